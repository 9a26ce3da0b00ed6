"""Edge means used to interpolate a density onto edges.

Both functions accept scalars or broadcastable arrays. Arguments are sorted
into (larger, smaller) before evaluation, which makes the logarithmic mean
bit-for-bit symmetric.
"""

from __future__ import annotations

import enum

import numpy as np

from .errors import NegativeInput, NonpositiveInput

# below this |log(a/b)| the closed forms lose digits to cancellation
SERIES_THRESHOLD = 1e-5


class MeanKind(enum.Enum):
    LOGARITHMIC = "log"
    ARITHMETIC = "arith"

    @classmethod
    def parse(cls, value: "MeanKind | str") -> "MeanKind":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        for kind in cls:
            if key in (kind.value, kind.name.lower()):
                return kind
        raise ValueError(f"unknown mean {value!r}; expected 'log' or 'arith'")


DEFAULT_MEAN = MeanKind.LOGARITHMIC


def _unwrap(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def theta(kind, a, b):
    kind = MeanKind.parse(kind)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a < 0) or np.any(b < 0):
        raise NegativeInput("mean arguments must be nonnegative")
    if kind is MeanKind.ARITHMETIC:
        return _unwrap(0.5 * (a + b))

    hi, lo = np.broadcast_arrays(np.maximum(a, b), np.minimum(a, b))
    out = np.zeros(hi.shape)
    pos = lo > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.where(pos, np.log1p((hi - lo) / np.where(pos, lo, 1.0)), np.inf)
        near = pos & (u < SERIES_THRESHOLD)
        far = pos & ~near
        out[far] = (hi[far] - lo[far]) / u[far]
        # sqrt(ab) * sinh(s)/s with s = u/2, truncated after s^4
        s2 = 0.25 * u[near] ** 2
        out[near] = np.sqrt(hi[near] * lo[near]) * (1.0 + s2 / 6.0 + s2**2 / 120.0)
    return _unwrap(out)


def theta_partials(kind, a, b):
    """Partial derivatives ``(d theta/da, d theta/db)`` for strictly positive inputs."""
    kind = MeanKind.parse(kind)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(a <= 0) or np.any(b <= 0):
        raise NonpositiveInput("mean partials need strictly positive arguments")
    if kind is MeanKind.ARITHMETIC:
        half = np.full(np.broadcast(a, b).shape, 0.5)
        return _unwrap(half), _unwrap(half.copy())

    a, b = np.broadcast_arrays(a, b)
    swap = a < b
    hi = np.where(swap, b, a)
    lo = np.where(swap, a, b)
    u = np.log1p((hi - lo) / lo)
    d_hi = np.empty(hi.shape)
    d_lo = np.empty(hi.shape)

    near = u < SERIES_THRESHOLD
    far = ~near
    th = (hi[far] - lo[far]) / u[far]
    d_hi[far] = (1.0 - th / hi[far]) / u[far]
    d_lo[far] = (th / lo[far] - 1.0) / u[far]

    # theta = sqrt(ab) h(s), h(s) = sinh(s)/s ~ 1 + s^2/6 + s^4/120, s = log(hi/lo)/2
    s = 0.5 * u[near]
    h = 1.0 + s**2 / 6.0 + s**4 / 120.0
    dh = s / 3.0 + s**3 / 30.0
    r = np.sqrt(lo[near] / hi[near])
    d_hi[near] = 0.5 * r * (h + dh)
    d_lo[near] = 0.5 / r * (h - dh)

    da = np.where(swap, d_lo, d_hi)
    db = np.where(swap, d_hi, d_lo)
    return _unwrap(da), _unwrap(db)
