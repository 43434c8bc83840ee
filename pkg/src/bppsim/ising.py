"""Ferromagnetic Ising models on small graphs: exact inference, Glauber
sampling, the degree/coupling sufficient condition, and tree-recursion ratio
bounds used by the network payment mechanism.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from bppsim import kernels
from bppsim.dominance import TripleDistribution, is_uniformly_dominant

__all__ = [
    "Graph",
    "IsingModel",
    "exact_joint",
    "node_means",
    "conditional_prob",
    "glauber_sample",
    "degree_coupling_condition",
    "tree_ratio",
    "dary_upper_bound",
    "uniform_dominance_network",
    "counterexample_graph",
    "majority_of_neighbors",
    "load_graph_csv",
]

EXACT_LIMIT = 22


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple  # sorted tuples (u, v), u < v

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError("self-loops not allowed")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError("edge endpoint out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(
            self, "edges", tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges))
        )

    def neighbors(self, i):
        out = []
        for u, v in self.edges:
            if u == i:
                out.append(v)
            elif v == i:
                out.append(u)
        return sorted(out)

    def degree(self, i):
        return len(self.neighbors(i))

    @property
    def max_degree(self):
        return max((self.degree(i) for i in range(self.n)), default=0)

    def has_edge(self, u, v):
        return (min(u, v), max(u, v)) in set(self.edges)

    def csr(self, beta):
        """Adjacency in CSR form with per-neighbor couplings, for the kernels."""
        beta_map = {}
        for (u, v), b in zip(self.edges, beta):
            beta_map[(u, v)] = b
            beta_map[(v, u)] = b
        indptr = [0]
        indices = []
        weights = []
        for i in range(self.n):
            for j in self.neighbors(i):
                indices.append(j)
                weights.append(beta_map[(min(i, j), max(i, j))])
            indptr.append(len(indices))
        return (
            np.array(indptr, dtype=np.int64),
            np.array(indices, dtype=np.int64),
            np.array(weights, dtype=np.float64),
        )


@dataclass(frozen=True)
class IsingModel:
    graph: Graph
    beta: np.ndarray = field(default=None)  # per-edge coupling, >= 0
    alpha: np.ndarray = field(default=None)  # per-node bias, >= 0

    def __post_init__(self):
        n_edges = len(self.graph.edges)
        beta = np.zeros(n_edges) if self.beta is None else np.asarray(self.beta, dtype=float)
        alpha = np.zeros(self.graph.n) if self.alpha is None else np.asarray(self.alpha, dtype=float)
        if np.isscalar(self.beta) or beta.ndim == 0:
            beta = np.full(n_edges, float(beta))
        if beta.shape != (n_edges,):
            raise ValueError("beta must have one entry per edge")
        if alpha.shape != (self.graph.n,):
            raise ValueError("alpha must have one entry per node")
        if np.any(beta < 0) or np.any(alpha < 0):
            raise ValueError("couplings and biases must be nonnegative")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def uniform(cls, graph, beta, alpha=0.0):
        return cls(graph, np.full(len(graph.edges), float(beta)),
                   np.full(graph.n, float(alpha)))


def exact_joint(model: IsingModel):
    """Normalized probability over all 2^n configurations (bit i = node i,
    bit 1 -> spin +1), via log-domain normalization."""
    n = model.graph.n
    if n > EXACT_LIMIT:
        raise ValueError(f"exact inference limited to {EXACT_LIMIT} nodes")
    eu = np.array([e[0] for e in model.graph.edges], dtype=np.int64)
    ev = np.array([e[1] for e in model.graph.edges], dtype=np.int64)
    h = kernels.config_energies(n, eu, ev, model.beta, model.alpha)
    h -= h.max()
    p = np.exp(h)
    p /= p.sum()
    return p


def _spin_column(n, i):
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx >> i) & 1) * 2 - 1


def node_means(model, joint=None):
    """nu_i = E[S_i] for every node."""
    joint = exact_joint(model) if joint is None else joint
    n = model.graph.n
    return np.array([float(np.dot(joint, _spin_column(n, i))) for i in range(n)])


def conditional_prob(model, i, condition, joint=None):
    """Pr[S_i = 1 | S_u = s_u for (u, s_u) in condition.items()]."""
    joint = exact_joint(model) if joint is None else joint
    n = model.graph.n
    mask = np.ones(joint.shape[0], dtype=bool)
    for u, s in condition.items():
        mask &= _spin_column(n, u) == s
    denom = joint[mask].sum()
    if denom <= 0:
        raise ValueError("conditioning event has zero probability")
    num = joint[mask & (_spin_column(n, i) == 1)].sum()
    return float(num / denom)


def glauber_sample(model, n_samples, burn_in, rng, thin=1, init=None):
    """Heat-bath samples, one row per recorded sweep after burn-in.

    Systematic site order 0..n-1; returns an (n_samples, n) +-1 int8 array.
    """
    if n_samples < 1 or burn_in < 1:
        raise ValueError("n_samples and burn_in must be >= 1")
    n = model.graph.n
    indptr, indices, weights = model.graph.csr(model.beta)
    state = (
        np.where(rng.random(n) < 0.5, -1, 1).astype(np.int8)
        if init is None
        else np.asarray(init, dtype=np.int8).copy()
    )
    empty = np.empty((0, n), dtype=np.int8)
    uniforms = rng.random(burn_in * n)
    kernels.glauber_chain(indptr, indices, weights, model.alpha, state, burn_in, uniforms, empty)
    total = n_samples * thin
    out = np.empty((total, n), dtype=np.int8)
    uniforms = rng.random(total * n)
    kernels.glauber_chain(indptr, indices, weights, model.alpha, state, total, uniforms, out)
    return out[thin - 1 :: thin]


def degree_coupling_condition(beta_min, beta_max, d):
    """Sufficient condition 2*beta_min/d > ln((e^{2(d+1)B}+1)/(e^{2B}+e^{2dB})).

    Returns (holds, lhs, rhs).
    """
    if not 0 <= beta_min <= beta_max or d < 1:
        raise ValueError("need 0 <= beta_min <= beta_max and d >= 1")
    lhs = 2.0 * beta_min / d
    rhs = math.log(
        (math.exp(2.0 * (d + 1) * beta_max) + 1.0)
        / (math.exp(2.0 * beta_max) + math.exp(2.0 * d * beta_max))
    )
    return lhs > rhs, lhs, rhs


def dary_upper_bound(beta_max, d):
    """Closed-form ratio bound ((e^{2(d+1)B}+1)/(e^{2B}+e^{2dB}))^d."""
    if beta_max < 0 or d < 1:
        raise ValueError("need beta_max >= 0 and d >= 1")
    return (
        (math.exp(2.0 * (d + 1) * beta_max) + 1.0)
        / (math.exp(2.0 * beta_max) + math.exp(2.0 * d * beta_max))
    ) ** d


def tree_ratio(graph, root, beta, alpha, boundary=None):
    """Pr[S_root=1]/Pr[S_root=-1] on a tree via the children's-ratio recursion.

    ``boundary`` maps leaves to fixed +-1 spins; a fixed child contributes
    its algebraic limit e^{+-2 beta} directly.  Errors on cyclic input.
    """
    boundary = boundary or {}
    n = graph.n
    if len(graph.edges) != n - 1:
        raise ValueError("input graph is not a tree")
    beta_map = {}
    for (u, v), b in zip(graph.edges, beta):
        beta_map[(u, v)] = b
        beta_map[(v, u)] = b

    visited = set()

    def rho(i, parent):
        visited.add(i)
        if i in boundary and i != root:
            raise AssertionError("fixed nodes are folded by the parent")
        out = math.exp(2.0 * alpha[i])
        for j in graph.neighbors(i):
            if j == parent:
                continue
            if j in visited:
                raise ValueError("cyclic input")
            b = beta_map[(min(i, j), max(i, j))]
            e2b = math.exp(2.0 * b)
            if j in boundary:
                visited.add(j)
                out *= e2b if boundary[j] == 1 else 1.0 / e2b
            else:
                rj = rho(j, i)
                out *= (rj * e2b + 1.0) / (e2b + rj)
        return out

    return rho(root, None)


def uniform_dominance_network(model, i, j, k):
    """Dominance report for (S_i, S_j friend, S_k non-friend), exact range.

    Requires (i, j) in E, (i, k) not in E, and zero biases (the symmetric
    model); by flip symmetry both margins coincide.
    """
    if not model.graph.has_edge(i, j):
        raise ValueError(f"({i}, {j}) is not an edge")
    if model.graph.has_edge(i, k) or i == k:
        raise ValueError(f"({i}, {k}) must be a distinct non-edge")
    if np.any(model.alpha != 0):
        raise ValueError("network dominance check requires zero biases")
    joint = exact_joint(model)
    n = model.graph.n
    si, sj, sk = (_spin_column(n, x) for x in (i, j, k))
    p = np.zeros((2, 2, 2))
    for bi in (0, 1):
        for bj in (0, 1):
            for bk in (0, 1):
                mask = (si == 2 * bi - 1) & (sj == 2 * bj - 1) & (sk == 2 * bk - 1)
                p[bi, bj, bk] = joint[mask].sum()
    return is_uniformly_dominant(TripleDistribution(p))


def counterexample_graph(n):
    """Two non-adjacent hubs sharing n-2 common friends (a theta graph)."""
    if n < 4:
        raise ValueError("need n >= 4")
    edges = []
    for l in range(1, n - 1):
        edges.append((0, l))
        edges.append((l, n - 1))
    return Graph(n, tuple(edges))


def majority_of_neighbors(graph, i, labels):
    """Majority report of i's neighbors: alternate bonus peer for the network
    mechanism.  Even-degree ties break toward +1 and are flagged.

    Returns (majority, tied).
    """
    nbrs = graph.neighbors(i)
    if not nbrs:
        raise ValueError(f"node {i} has no neighbors")
    total = sum(labels[j] for j in nbrs)
    if total == 0:
        return 1, True
    return (1 if total > 0 else -1), False


def load_graph_csv(path, n=None):
    """Edge-list CSV ``u,v`` -> Graph; duplicates merged, 0-based ids."""
    edges = set()
    max_node = -1
    with open(path, newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 2:
                raise ValueError(f"line {line_no}: expected u,v")
            u, v = int(row[0]), int(row[1])
            if u == v:
                raise ValueError(f"line {line_no}: self-loop {u}")
            edges.add((min(u, v), max(u, v)))
            max_node = max(max_node, u, v)
    return Graph(n or max_node + 1, tuple(sorted(edges)))
