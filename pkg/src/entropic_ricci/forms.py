"""Density-weighted inner products, the Bochner forms A and B, and entropy."""

from __future__ import annotations

import numpy as np

from .calculus import _field, edge_field, gradient, laplacian, laplacian_matrix
from .chain import MarkovChain
from .errors import NonpositiveDensity, NotNormalized
from .means import MeanKind, theta, theta_partials

NORMALIZATION_TOL = 1e-10


def inner_pi(chain: MarkovChain, f, g) -> float:
    return float(np.sum(_field(chain, f) * _field(chain, g) * chain.pi))


def inner_pi_edge(chain: MarkovChain, U, V) -> float:
    U = edge_field(chain, U)
    V = edge_field(chain, V)
    return float(0.5 * np.sum(U * V * chain.Q * chain.pi[:, None]))


def mass(chain: MarkovChain, rho) -> float:
    return float(np.dot(_field(chain, rho), chain.pi))


def normalize(chain: MarkovChain, rho) -> np.ndarray:
    """Rescale a nonnegative vector into ``D(X) = {rho >= 0 : sum rho pi = 1}``."""
    rho = _field(chain, rho)
    if np.any(rho < 0):
        raise NonpositiveDensity("density must be nonnegative")
    m = mass(chain, rho)
    if m <= 0:
        raise NonpositiveDensity("density has zero mass")
    return rho / m


def is_normalized(chain: MarkovChain, rho, tol: float = NORMALIZATION_TOL) -> bool:
    return abs(mass(chain, rho) - 1.0) <= tol


def localized_density(chain: MarkovChain, x: int, eps: float) -> np.ndarray:
    """Unnormalised density ``1_x + eps * sum_{y ~ x} 1_y``."""
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    rho = eps * chain.support[x].astype(float)
    rho[x] = 1.0
    return rho


def rho_hat(chain: MarkovChain, rho, kind=MeanKind.LOGARITHMIC) -> np.ndarray:
    rho = _field(chain, rho)
    if np.any(rho < 0):
        raise NonpositiveDensity("density must be nonnegative")
    return edge_field(chain, theta(kind, rho[:, None], rho[None, :]))


def delta_hat_rho(chain: MarkovChain, rho, kind=MeanKind.LOGARITHMIC) -> np.ndarray:
    rho = _field(chain, rho)
    if np.any(rho <= 0):
        raise NonpositiveDensity("delta_hat_rho needs a strictly positive density")
    d1, d2 = theta_partials(kind, rho[:, None], rho[None, :])
    lap = laplacian(chain, rho)
    return edge_field(chain, d1 * lap[:, None] + d2 * lap[None, :])


def form_A(chain: MarkovChain, rho, f, kind=MeanKind.LOGARITHMIC) -> float:
    grad = gradient(chain, f)
    return inner_pi_edge(chain, rho_hat(chain, rho, kind) * grad, grad)


def form_B(chain: MarkovChain, rho, f, kind=MeanKind.LOGARITHMIC) -> float:
    grad = gradient(chain, f)
    first = 0.5 * inner_pi_edge(chain, delta_hat_rho(chain, rho, kind) * grad, grad)
    second = inner_pi_edge(chain, rho_hat(chain, rho, kind) * grad, gradient(chain, laplacian(chain, f)))
    return first - second


def _weighted_laplacian(weights: np.ndarray) -> np.ndarray:
    return np.diag(weights.sum(axis=1)) - weights


def form_matrices(chain: MarkovChain, rho, kind=MeanKind.LOGARITHMIC) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric matrices ``(MA, MB)`` with ``A(rho,f) = f.MA.f`` and ``B(rho,f) = f.MB.f``."""
    flux = chain.Q * chain.pi[:, None]
    flux = 0.5 * (flux + flux.T)
    w = rho_hat(chain, rho, kind) * flux
    v = delta_hat_rho(chain, rho, kind) * flux
    Lw = _weighted_laplacian(w)
    K = laplacian_matrix(chain)
    LwK = Lw @ K
    MB = 0.5 * _weighted_laplacian(v) - 0.5 * (LwK + LwK.T)
    return Lw, 0.5 * (MB + MB.T)


def entropy(chain: MarkovChain, rho) -> float:
    """``H(rho) = sum rho log rho pi`` with ``0 log 0 = 0``; rho must lie in D(X)."""
    rho = _field(chain, rho)
    if np.any(rho < 0):
        raise NonpositiveDensity("density must be nonnegative")
    if not is_normalized(chain, rho):
        raise NotNormalized(f"density mass is {mass(chain, rho):.12g}, expected 1")
    pos = rho > 0
    return float(np.sum(rho[pos] * np.log(rho[pos]) * chain.pi[pos]))
