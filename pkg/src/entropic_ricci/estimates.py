"""Sample-based checks of the gradient estimates and the diameter bound.

Every check returns a :class:`VerificationSample`; a violated inequality is
data, not an exception. The ``run_*_suite`` helpers draw reproducible
random inputs and collect the samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .calculus import gamma, heat_apply, laplacian
from .chain import MarkovChain, diameter, distance_matrix
from .curvature import bakry_emery_curvature
from .errors import InvalidDegree, NonpositiveKappa, NotSRW, VacuousBound
from .forms import form_A, localized_density
from .means import MeanKind, theta

DEFAULT_SLACK = 1e-9
T_RANGE = (1e-2, 10.0)
KINDS = ("global", "local", "corollary", "be", "diameter")


@dataclass
class VerificationSample:
    kind: str
    inputs: dict
    lhs: float
    rhs: float
    slack: float = DEFAULT_SLACK
    note: str = ""
    residual: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)
        self.residual = self.rhs - self.lhs
        self.passed = bool(self.residual >= -self.slack)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "inputs": self.inputs,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "residual": self.residual,
            "slack": self.slack,
            "pass": self.passed,
            "note": self.note,
        }


def _require_srw(chain: MarkovChain):
    if not chain.is_simple_random_walk():
        raise NotSRW("this estimate is stated for the simple random walk")


def check_global(chain, kappa, rho, f, t, kind=MeanKind.LOGARITHMIC, slack=DEFAULT_SLACK, seed=None):
    """``A(rho, P_t f) <= exp(-2 kappa t) A(P_t rho, f)``."""
    kind = MeanKind.parse(kind)
    rho = np.asarray(rho, dtype=float)
    lhs = form_A(chain, rho, heat_apply(chain, f, t), kind)
    # P_t preserves positivity; clip roundoff below zero
    rho_t = np.maximum(heat_apply(chain, rho, t), 0.0)
    rhs = math.exp(-2 * kappa * t) * form_A(chain, rho_t, f, kind)
    inputs = {"kappa": kappa, "t": t, "mean": kind.value, "rho": rho.tolist(), "f": np.asarray(f).tolist()}
    if seed is not None:
        inputs["seed"] = seed
    return VerificationSample("global", inputs, lhs, rhs, slack)


def check_local(chain, kappa, x, f, t, eps, kind=MeanKind.LOGARITHMIC, slack=DEFAULT_SLACK, seed=None):
    """Pointwise estimate obtained by localising the density around ``x``."""
    kind = MeanKind.parse(kind)
    if eps < 0:
        raise ValueError("eps must be >= 0")
    th = theta(kind, 1.0, eps)
    if th == 0:
        raise VacuousBound("theta(1, eps) = 0: the right-hand side is infinite")
    pi = chain.pi
    lhs = gamma(chain, heat_apply(chain, f, t))[x] * pi[x]
    pg = heat_apply(chain, gamma(chain, f), t)
    nbrs = chain.neighbors(x)
    bracket = pg[x] * pi[x] + eps * float(np.sum(pg[nbrs] * pi[nbrs]))
    rhs = math.exp(-2 * kappa * t) / (2 * th) * bracket
    inputs = {"kappa": kappa, "x": int(x), "t": t, "eps": eps, "mean": kind.value, "f": np.asarray(f).tolist()}
    if seed is not None:
        inputs["seed"] = seed
    return VerificationSample("local", inputs, lhs, rhs, slack)


def corollary_constant(D: int) -> float:
    """``c = D log D / (D - 1)``."""
    if D < 2:
        raise InvalidDegree(f"constant needs maximal degree >= 2, got {D}")
    return D * math.log(D) / (D - 1)


def local_constant(chain: MarkovChain, x: int, eps: float, kind=MeanKind.LOGARITHMIC) -> float:
    """Vertex constant ``(1 + eps sum_{y~x} d_y/d_x) / (2 theta(1, eps))``."""
    deg = chain.degrees
    ratio = deg[chain.neighbors(x)].sum() / deg[x]
    return (1 + eps * ratio) / (2 * theta(kind, 1.0, eps))


def check_corollary(chain, kappa, f, t, slack=DEFAULT_SLACK, seed=None):
    """``max_x Gamma(P_t f)(x) <= c exp(-2 kappa t) ||P_t Gamma(f)||_inf``."""
    _require_srw(chain)
    c = corollary_constant(chain.max_degree)
    lhs = float(gamma(chain, heat_apply(chain, f, t)).max())
    rhs = c * math.exp(-2 * kappa * t) * float(np.abs(heat_apply(chain, gamma(chain, f), t)).max())
    inputs = {"kappa": kappa, "t": t, "c": c, "f": np.asarray(f).tolist()}
    if seed is not None:
        inputs["seed"] = seed
    return VerificationSample("corollary", inputs, lhs, rhs, slack)


def check_distance_decay(chain, kappa, x0, t, slack=DEFAULT_SLACK):
    """Steps of the diameter argument for ``f = d(., x0)``.

    Returns two samples: the Cauchy-Schwarz step
    ``|Delta P_t f|^2 <= Gamma(P_t f)`` (worst vertex) and the decay
    ``|Delta P_t f| <= sqrt(c) exp(-kappa t)``.
    """
    _require_srw(chain)
    c = corollary_constant(chain.max_degree)
    f = distance_matrix(chain)[x0].astype(float)
    ptf = heat_apply(chain, f, t)
    lap = laplacian(chain, ptf)
    gam = gamma(chain, ptf)
    worst = int(np.argmax(lap**2 - gam))
    inputs = {"kappa": kappa, "x0": int(x0), "t": t}
    cs = VerificationSample("corollary", {**inputs, "x": worst, "step": "cauchy-schwarz"},
                            float(lap[worst] ** 2), float(gam[worst]), slack)
    decay = VerificationSample("corollary", {**inputs, "step": "decay", "c": c},
                               float(np.abs(lap).max()), math.sqrt(c) * math.exp(-kappa * t), slack)
    return cs, decay


def check_be(chain, kappa, x, f, t, slack=DEFAULT_SLACK, seed=None):
    """``Gamma(P_t f)(x) <= exp(-2 kappa t) P_t Gamma(f)(x)``."""
    lhs = float(gamma(chain, heat_apply(chain, f, t))[x])
    rhs = math.exp(-2 * kappa * t) * float(heat_apply(chain, gamma(chain, f), t)[x])
    inputs = {"kappa": kappa, "x": int(x), "t": t, "f": np.asarray(f).tolist()}
    if seed is not None:
        inputs["seed"] = seed
    return VerificationSample("be", inputs, lhs, rhs, slack)


def diameter_bound(kappa: float, D: int) -> float:
    """``(2 / kappa) sqrt(D log D / (D - 1))``."""
    if not kappa > 0:
        raise NonpositiveKappa(f"diameter bound needs kappa > 0, got {kappa}")
    return 2.0 / kappa * math.sqrt(corollary_constant(D))


def be_diameter_bound(kappa_be: float) -> float:
    if not kappa_be > 0:
        raise NonpositiveKappa(f"diameter bound needs kappa > 0, got {kappa_be}")
    return 2.0 / kappa_be


def check_diameter(chain, kappa, kappa_be=None, slack=DEFAULT_SLACK):
    """Compare the graph diameter with the entropic bound, and report the 2/kappa_BE bound.

    For ``D = 1`` the entropic constant is undefined; the sample then tests
    the Bakry-Emery route instead and says so in ``note``.
    """
    _require_srw(chain)
    if not kappa > 0:
        raise NonpositiveKappa(f"diameter check needs kappa > 0, got {kappa}")
    if kappa_be is None:
        kappa_be = bakry_emery_curvature(chain)
    D = chain.max_degree
    diam = diameter(chain)
    be_bound = be_diameter_bound(kappa_be) if kappa_be > 0 else math.inf
    inputs = {"kappa": kappa, "D": D, "kappa_be": kappa_be, "be_bound": be_bound}
    if D < 2:
        return VerificationSample("diameter", inputs, float(diam), be_bound, slack,
                                  note="entropic bound skipped: maximal degree 1; tested 2/kappa_BE")
    bound = diameter_bound(kappa, D)
    inputs["gap"] = bound - diam
    return VerificationSample("diameter", inputs, float(diam), bound, slack)


def _sample_t(rng: np.random.Generator) -> float:
    lo, hi = T_RANGE
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def _random_density(chain, rng):
    # symmetric Dirichlet weights w, rescaled so that sum(rho * pi) = 1
    return rng.dirichlet(np.ones(chain.n)) / chain.pi


def run_global_suite(chain, kappa, kind=MeanKind.LOGARITHMIC, samples=200, seed=0,
                     t_grid: Sequence[float] | None = None, slack=DEFAULT_SLACK):
    out = []
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        rho = _random_density(chain, rng)
        f = rng.standard_normal(chain.n)
        t = float(t_grid[i % len(t_grid)]) if t_grid else _sample_t(rng)
        out.append(check_global(chain, kappa, rho, f, t, kind, slack, seed=[seed, i]))
    return out


def default_eps_grid(chain) -> list[float]:
    return [1.0 / chain.max_degree, 0.25, 0.5, 1.0, 2.0]


def run_local_suite(chain, kappa, kind=MeanKind.LOGARITHMIC, samples=50, seed=0,
                    t_grid: Iterable[float] = (0.1, 1.0, 5.0), eps_grid: Iterable[float] | None = None,
                    slack=DEFAULT_SLACK):
    """``samples`` random functions, each checked at every vertex, eps and t."""
    t_grid = list(t_grid)
    eps_grid = list(eps_grid) if eps_grid is not None else default_eps_grid(chain)
    out = []
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        f = rng.standard_normal(chain.n)
        for x in range(chain.n):
            for eps in eps_grid:
                for t in t_grid:
                    out.append(check_local(chain, kappa, x, f, t, eps, kind, slack, seed=[seed, i]))
    return out


def run_corollary_suite(chain, kappa, samples=50, seed=0, t_grid: Iterable[float] = (0.5, 2.0),
                        slack=DEFAULT_SLACK):
    t_grid = list(t_grid)
    out = []
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        f = rng.standard_normal(chain.n)
        out.extend(check_corollary(chain, kappa, f, t, slack, seed=[seed, i]) for t in t_grid)
    if kappa > 0:
        for t in (0.0, 1.0, 5.0, 10.0):
            out.extend(check_distance_decay(chain, kappa, 0, t, slack))
    return out


def run_be_suite(chain, kappa, samples=50, seed=0, t_grid: Iterable[float] = (0.1, 1.0, 5.0),
                 slack=DEFAULT_SLACK):
    t_grid = list(t_grid)
    out = []
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        f = rng.standard_normal(chain.n)
        for x in range(chain.n):
            out.extend(check_be(chain, kappa, x, f, t, slack, seed=[seed, i]) for t in t_grid)
    return out


def summarize(samples: Iterable[VerificationSample]) -> list[dict]:
    """One row per sample kind: count, failures and the most negative residual."""
    rows: dict[str, dict] = {}
    for s in samples:
        row = rows.setdefault(s.kind, {"kind": s.kind, "samples": 0, "failures": 0, "worst_residual": math.inf})
        row["samples"] += 1
        row["failures"] += 0 if s.passed else 1
        row["worst_residual"] = min(row["worst_residual"], float(s.residual))
    return [rows[k] for k in KINDS if k in rows]
