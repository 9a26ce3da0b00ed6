"""Entropic curvature via the Bochner inequality, and Bakry-Emery curvature.

For a fixed positive density the best constant in ``B(rho,f) >= k A(rho,f)``
is the smallest generalised eigenvalue of the pair of quadratic forms on the
complement of constants. The entropic lower bound is the infimum of that
value over densities, which is searched numerically by multi-start
Nelder-Mead on a softmax parametrisation of the floored simplex.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.optimize

from .chain import MarkovChain
from .errors import DegenerateA, NonpositiveDensity, SolverFailure
from .forms import form_matrices
from .means import MeanKind

log = logging.getLogger(__name__)

DEFAULT_FLOOR = 1e-4
DEFAULT_STARTS = 16
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 2000
EXTRAPOLATION_FLOORS = (1e-3, 1e-4, 1e-5)


@lru_cache(maxsize=64)
def _complement_basis(n: int) -> np.ndarray:
    """Orthonormal basis of the functions orthogonal to constants."""
    basis = scipy.linalg.null_space(np.ones((1, n)))
    basis.setflags(write=False)
    return basis


def bochner_spectrum(chain: MarkovChain, rho, kind=MeanKind.LOGARITHMIC) -> np.ndarray:
    """Ascending generalised eigenvalues of ``B f = lam A f`` off the constants."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0):
        raise NonpositiveDensity("kappa_of_rho needs a strictly positive density")
    MA, MB = form_matrices(chain, rho, kind)
    V = _complement_basis(chain.n)
    A = V.T @ MA @ V
    B = V.T @ MB @ V
    try:
        return scipy.linalg.eigh(0.5 * (B + B.T), 0.5 * (A + A.T), eigvals_only=True)
    except np.linalg.LinAlgError as exc:
        raise DegenerateA("A(rho, .) is not positive definite off the constants") from exc


def kappa_of_rho(chain: MarkovChain, rho, kind=MeanKind.LOGARITHMIC) -> float:
    return float(bochner_spectrum(chain, rho, kind)[0])


def density_from_logits(chain: MarkovChain, z, floor_delta: float) -> np.ndarray:
    """Map free logits to ``rho = floor + (1 - floor) e^z / <e^z, pi>``, which has unit mass."""
    z = np.asarray(z, dtype=float)
    w = np.exp(z - z.max())
    return floor_delta + (1.0 - floor_delta) * w / np.dot(w, chain.pi)


@dataclass
class StartResult:
    seed: list[int]
    kappa: float
    iterations: int
    converged: bool


@dataclass
class CurvatureReport:
    kappa: float
    minimizer_rho: np.ndarray
    mean: MeanKind
    starts: int
    per_start: list[StartResult]
    floor_delta: float
    gradient_norm: float
    eigen_gap: float
    extrapolation: list[tuple[float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "mean": self.mean.value,
            "minimizer_rho": self.minimizer_rho.tolist(),
            "starts": self.starts,
            "floor_delta": self.floor_delta,
            "per_start": [asdict(s) for s in self.per_start],
            "diagnostics": {"gradient_norm": self.gradient_norm, "eigen_gap": self.eigen_gap},
            "extrapolation": [{"floor_delta": d, "kappa": k} for d, k in self.extrapolation],
        }


def _fd_gradient(fun, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fun(x + e) - fun(x - e)) / (2 * h)
    return g


def entropic_curvature_lower_bound(
    chain: MarkovChain,
    kind=MeanKind.LOGARITHMIC,
    floor_delta: float = DEFAULT_FLOOR,
    starts: int = DEFAULT_STARTS,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
) -> CurvatureReport:
    """Minimise ``kappa_of_rho`` over densities bounded below by ``floor_delta``.

    Start 0 is the uniform density; the remaining starts draw logits from a
    standard normal using the stream ``default_rng([seed, i])``. The first
    logit is pinned to zero since the map is invariant under shifts.
    """
    kind = MeanKind.parse(kind)
    if not floor_delta > 0 or floor_delta >= 1:
        raise ValueError("floor_delta must lie in (0, 1)")
    if starts < 1:
        raise ValueError("need at least one start")
    n = chain.n
    if n == 1:
        raise ValueError("curvature is undefined on a single state")

    def rho_of(y):
        return density_from_logits(chain, np.concatenate(([0.0], y)), floor_delta)

    def objective(y):
        return kappa_of_rho(chain, rho_of(y), kind)

    per_start = []
    best_val, best_y = np.inf, None
    for i in range(starts):
        rng = np.random.default_rng([seed, i])
        y0 = np.zeros(n - 1) if i == 0 else rng.standard_normal(n - 1)
        simplex = np.vstack([y0, y0 + 0.5 * np.eye(n - 1)])
        res = scipy.optimize.minimize(
            objective,
            y0,
            method="Nelder-Mead",
            options={
                "maxiter": max_iter,
                "maxfev": 4 * max_iter,
                "xatol": tol,
                "fatol": tol * 1e-3,
                "adaptive": True,
                "initial_simplex": simplex,
            },
        )
        y, val = res.x, float(res.fun)
        polished = scipy.optimize.minimize(objective, y, method="L-BFGS-B", options={"maxiter": 200})
        if polished.fun < val:
            y, val = polished.x, float(polished.fun)
        converged = bool(res.success)
        per_start.append(StartResult([seed, i], val, int(res.nit), converged))
        log.debug("start %d: kappa=%.12g nit=%d converged=%s", i, val, res.nit, converged)
        if converged and val < best_val:
            best_val, best_y = val, y

    if best_y is None:
        raise SolverFailure(f"none of {starts} starts converged within {max_iter} iterations")

    spec = bochner_spectrum(chain, rho_of(best_y), kind)
    grad = _fd_gradient(objective, best_y)
    return CurvatureReport(
        kappa=best_val,
        minimizer_rho=rho_of(best_y),
        mean=kind,
        starts=starts,
        per_start=per_start,
        floor_delta=floor_delta,
        gradient_norm=float(np.linalg.norm(grad)),
        eigen_gap=float(spec[1] - spec[0]) if spec.size > 1 else float("inf"),
    )


def floor_extrapolation(chain: MarkovChain, kind=MeanKind.LOGARITHMIC, floors=EXTRAPOLATION_FLOORS, **opts):
    """Re-run the lower bound at several floors to expose boundary minima."""
    return [(d, entropic_curvature_lower_bound(chain, kind, floor_delta=d, **opts).kappa) for d in floors]


def _gamma_matrix(chain: MarkovChain, y: int) -> np.ndarray:
    """Matrix of ``f -> Gamma(f)(y)``."""
    q = chain.Q[y].copy()
    q[y] = 0.0
    M = np.diag(q)
    M[y, :] = -q
    M[:, y] = -q
    M[y, y] = q.sum()
    return M


def bakry_emery_at(chain: MarkovChain, x: int) -> float:
    """Largest ``k`` with ``Gamma2(f)(x) >= k Gamma(f)(x)`` for all f."""
    K = chain.Q - np.diag(chain.Q.sum(axis=1))
    Mx = _gamma_matrix(chain, x)
    nbrs = chain.neighbors(x)
    G2 = -0.5 * (Mx @ K + K.T @ Mx)
    for y in nbrs:
        G2 += 0.5 * chain.Q[x, y] * (_gamma_matrix(chain, y) - Mx)

    # both forms ignore constants, so pin f(x) = 0; values beyond the 2-ball do not enter
    ball1 = set(nbrs.tolist())
    ball2 = set()
    for y in nbrs:
        ball2.update(chain.neighbors(y).tolist())
    outer = sorted(ball2 - ball1 - {x})
    inner = sorted(ball1)
    Gaa = G2[np.ix_(inner, inner)]
    if outer:
        Gab = G2[np.ix_(inner, outer)]
        Gbb = G2[np.ix_(outer, outer)]
        Gaa = Gaa - Gab @ np.linalg.solve(Gbb, Gab.T)
    Maa = Mx[np.ix_(inner, inner)]
    return float(scipy.linalg.eigh(0.5 * (Gaa + Gaa.T), Maa, eigvals_only=True)[0])


def bakry_emery_curvature(chain: MarkovChain) -> float:
    return min(bakry_emery_at(chain, x) for x in range(chain.n))
