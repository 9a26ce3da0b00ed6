"""Discrete differential operators and the heat semigroup on a chain.

Scalar fields are length-``n`` arrays; edge fields are dense ``n x n``
arrays that vanish off the support of ``Q``.
"""

from __future__ import annotations

import numpy as np

from .chain import MarkovChain
from .errors import NegativeTime


def _field(chain: MarkovChain, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (chain.n,):
        raise ValueError(f"field has shape {f.shape}, chain has {chain.n} states")
    return f


def edge_field(chain: MarkovChain, values) -> np.ndarray:
    """Mask an ``n x n`` array to the edge support of ``chain``."""
    values = np.asarray(values, dtype=float)
    return np.where(chain.support, values, 0.0)


def gradient(chain: MarkovChain, f) -> np.ndarray:
    f = _field(chain, f)
    return edge_field(chain, f[None, :] - f[:, None])


def divergence(chain: MarkovChain, V) -> np.ndarray:
    V = edge_field(chain, V)
    return 0.5 * ((V - V.T) * chain.Q).sum(axis=1)


def laplacian(chain: MarkovChain, f) -> np.ndarray:
    f = _field(chain, f)
    return chain.Q @ f - chain.Q.sum(axis=1) * f


def laplacian_matrix(chain: MarkovChain) -> np.ndarray:
    """Matrix ``K = Q - I`` so that ``laplacian(f) == K @ f``."""
    return chain.Q - np.diag(chain.Q.sum(axis=1))


def gamma_bilinear(chain: MarkovChain, f, g) -> np.ndarray:
    f = _field(chain, f)
    g = _field(chain, g)
    df = f[None, :] - f[:, None]
    dg = g[None, :] - g[:, None]
    return (df * dg * chain.Q).sum(axis=1)


def gamma(chain: MarkovChain, f) -> np.ndarray:
    """Carré du champ without the customary factor 1/2."""
    f = _field(chain, f)
    df = f[None, :] - f[:, None]
    return (df * df * chain.Q).sum(axis=1)


def gamma2(chain: MarkovChain, f) -> np.ndarray:
    f = _field(chain, f)
    return 0.5 * laplacian(chain, gamma(chain, f)) - gamma_bilinear(chain, f, laplacian(chain, f))


def heat_operator(chain: MarkovChain, t: float) -> np.ndarray:
    """Matrix of ``P_t = exp(t * Laplacian)`` acting on column vectors."""
    if t < 0:
        raise NegativeTime(f"heat semigroup needs t >= 0, got {t}")
    if t == 0:
        return np.eye(chain.n)
    evals, U = chain.spectrum
    sq = np.sqrt(chain.pi)
    M = (U * np.exp(t * evals)) @ U.T
    return M * (sq[None, :] / sq[:, None])


def heat_apply(chain: MarkovChain, f, t: float) -> np.ndarray:
    f = _field(chain, f)
    if t < 0:
        raise NegativeTime(f"heat semigroup needs t >= 0, got {t}")
    if t == 0:
        return f.copy()
    evals, U = chain.spectrum
    sq = np.sqrt(chain.pi)
    return (U @ (np.exp(t * evals) * (U.T @ (sq * f)))) / sq


def heat_kernel(chain: MarkovChain, t: float) -> np.ndarray:
    """Kernel ``p_t`` with ``P_t g(u) = sum_z p_t(u, z) g(z) pi(z)``; symmetric in (u, z)."""
    if t < 0:
        raise NegativeTime(f"heat semigroup needs t >= 0, got {t}")
    evals, U = chain.spectrum
    isq = 1.0 / np.sqrt(chain.pi)
    if t == 0:
        return np.diag(1.0 / chain.pi)
    K = (U * np.exp(t * evals)) @ U.T
    K = 0.5 * (K + K.T)
    return isq[:, None] * K * isq[None, :]
