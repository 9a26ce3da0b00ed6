"""Finite reversible Markov chains and the graphs they live on."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import (
    DisconnectedGraph,
    InvalidSize,
    IsolatedVertex,
    NotIrreducible,
    NotReversible,
    NotStochastic,
)

DEFAULT_TOL = 1e-10
FAMILIES = ("hypercube", "cycle", "path", "complete")


@dataclass(frozen=True)
class GraphSpec:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSize(f"graph needs at least one vertex, got n={self.n}")
        seen = set()
        canon = []
        for i, j in self.edges:
            i, j = int(i), int(j)
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidSize(f"edge ({i}, {j}) out of range for n={self.n}")
            if i == j:
                raise InvalidSize(f"self-loop at vertex {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise InvalidSize(f"duplicate edge {key}")
            seen.add(key)
            canon.append(key)
        object.__setattr__(self, "edges", tuple(canon))
        if self.labels is not None:
            if len(self.labels) != self.n:
                raise InvalidSize("labels must have one entry per vertex")
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @cached_property
    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            adj[i, j] = adj[j, i] = True
        return adj

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def is_connected(self) -> bool:
        ncomp, _ = connected_components(csr_matrix(self.adjacency), directed=False)
        return ncomp == 1

    def to_dict(self) -> dict:
        out = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GraphSpec":
        try:
            n = int(data["n"])
            edges = tuple((int(a), int(b)) for a, b in data["edges"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSize(f"malformed graph description: {exc!r}") from exc
        labels = data.get("labels")
        return cls(n, edges, tuple(labels) if labels is not None else None)


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """Irreducible reversible kernel ``Q`` with its stationary measure ``pi``.

    Use :func:`build_srw` or :func:`from_kernel` rather than calling the
    constructor directly; those validate the invariants.
    """

    Q: np.ndarray
    pi: np.ndarray
    labels: tuple[str, ...] | None = None
    graph: GraphSpec | None = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    @cached_property
    def support(self) -> np.ndarray:
        """Edge indicator ``x ~ y``; the diagonal is excluded."""
        s = self.Q > 0
        np.fill_diagonal(s, False)
        return s

    @cached_property
    def degrees(self) -> np.ndarray:
        return self.support.sum(axis=1)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max())

    def neighbors(self, x: int) -> np.ndarray:
        return np.flatnonzero(self.support[x])

    def support_graph(self) -> GraphSpec:
        if self.graph is not None:
            return self.graph
        iu, ju = np.nonzero(np.triu(self.support, 1))
        return GraphSpec(self.n, tuple(zip(iu.tolist(), ju.tolist())), self.labels)

    def is_simple_random_walk(self, tol: float = 1e-12) -> bool:
        deg = self.degrees
        if np.any(deg == 0) or np.any(np.diag(self.Q) > tol):
            return False
        expected = self.support / deg[:, None]
        return bool(np.max(np.abs(self.Q - expected)) <= tol)

    @cached_property
    def spectrum(self) -> tuple[np.ndarray, np.ndarray]:
        """Eigenpairs of the pi-symmetrised generator ``S = D^½ (Q - I) D^-½``.

        Computed once per chain; every heat-semigroup evaluation reuses it.
        """
        sq = np.sqrt(self.pi)
        gen = self.Q - np.diag(self.Q.sum(axis=1))
        S = sq[:, None] * gen / sq[None, :]
        S = 0.5 * (S + S.T)
        evals, evecs = np.linalg.eigh(S)
        return evals, evecs

    def residuals(self) -> dict[str, float]:
        """Numerical residuals of every chain invariant (for diagnostics and tests)."""
        flux = self.pi[:, None] * self.Q
        return {
            "row_sum": float(np.max(np.abs(self.Q.sum(axis=1) - 1.0))),
            "detailed_balance": float(np.max(np.abs(flux - flux.T))),
            "pi_sum": float(abs(self.pi.sum() - 1.0)),
            "stationarity": float(np.max(np.abs(self.pi @ self.Q - self.pi))),
        }


def build_srw(g: GraphSpec) -> MarkovChain:
    """Simple random walk: ``Q(x,y) = 1/d_x`` on neighbours, ``pi(x) = d_x / sum d``."""
    deg = g.degrees
    if np.any(deg == 0):
        if g.n == 1:
            raise IsolatedVertex("single-vertex graph has no edges")
        raise IsolatedVertex(f"isolated vertices: {np.flatnonzero(deg == 0).tolist()}")
    if not g.is_connected():
        raise DisconnectedGraph("simple random walk needs a connected graph")
    Q = g.adjacency / deg[:, None].astype(float)
    pi = deg / deg.sum()
    Q.setflags(write=False)
    pi.setflags(write=False)
    return MarkovChain(Q, pi, g.labels, g)


def from_kernel(Q: Sequence[Sequence[float]] | np.ndarray, tol: float = DEFAULT_TOL) -> MarkovChain:
    """Validate a kernel and attach its stationary measure.

    The stationary vector is the eigenvector of ``Q^T`` for the eigenvalue
    closest to 1, normalised to a probability vector.
    """
    Q = np.array(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.shape[0] == 0:
        raise NotStochastic(f"kernel must be a non-empty square matrix, got shape {Q.shape}")
    if not np.all(np.isfinite(Q)) or np.any(Q < 0):
        raise NotStochastic("kernel entries must be finite and nonnegative")
    rows = Q.sum(axis=1)
    if np.max(np.abs(rows - 1.0)) > tol:
        raise NotStochastic(f"row sums deviate from 1 by {np.max(np.abs(rows - 1.0)):.3e}")
    ncomp, _ = connected_components(csr_matrix(Q > 0), directed=True, connection="strong")
    if ncomp != 1:
        raise NotIrreducible(f"support graph has {ncomp} strongly connected components")

    evals, evecs = np.linalg.eig(Q.T)
    k = int(np.argmin(np.abs(evals - 1.0)))
    v = np.real(evecs[:, k])
    v = v / v.sum()
    if np.any(v <= 0):
        raise NotIrreducible("stationary vector is not strictly positive")

    flux = v[:, None] * Q
    resid = float(np.max(np.abs(flux - flux.T)))
    if resid > tol:
        raise NotReversible(f"detailed-balance residual {resid:.3e} exceeds tolerance {tol:.1e}")
    Q.setflags(write=False)
    v.setflags(write=False)
    return MarkovChain(Q, v)


def generate(family: str, n: int) -> GraphSpec:
    """Standard graph families: ``hypercube`` (dimension n), ``cycle``, ``path``, ``complete``."""
    if family == "hypercube":
        if n < 1:
            raise InvalidSize("hypercube dimension must be >= 1")
        size = 1 << n
        edges = [(v, v ^ (1 << b)) for v in range(size) for b in range(n) if v < v ^ (1 << b)]
        labels = tuple(format(v, f"0{n}b") for v in range(size))
        return GraphSpec(size, tuple(edges), labels)
    if family == "cycle":
        if n < 3:
            raise InvalidSize("cycle needs n >= 3")
        return GraphSpec(n, tuple((i, (i + 1) % n) for i in range(n)))
    if family == "path":
        if n < 2:
            raise InvalidSize("path needs n >= 2")
        return GraphSpec(n, tuple((i, i + 1) for i in range(n - 1)))
    if family == "complete":
        if n < 2:
            raise InvalidSize("complete graph needs n >= 2")
        return GraphSpec(n, tuple(itertools.combinations(range(n), 2)))
    raise InvalidSize(f"unknown family {family!r}; expected one of {FAMILIES}")


def distance_matrix(g: GraphSpec | MarkovChain) -> np.ndarray:
    """All-pairs combinatorial distances (BFS from every vertex)."""
    adj = g.adjacency if isinstance(g, GraphSpec) else g.support
    dist = shortest_path(csr_matrix(adj.astype(float)), method="D", directed=False, unweighted=True)
    if np.any(np.isinf(dist)):
        raise DisconnectedGraph("graph is not connected")
    return dist.astype(int)


def diameter(g: GraphSpec | MarkovChain) -> int:
    return int(distance_matrix(g).max())


def max_degree(g: GraphSpec | MarkovChain) -> int:
    return int(g.degrees.max())
