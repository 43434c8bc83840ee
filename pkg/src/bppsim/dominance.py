"""Joint triple distributions and the uniform-dominance test.

A TripleDistribution holds the joint law of three +-1 signals (S_i, S_j, S_k)
as a 2x2x2 array; axis index 0 stands for signal -1 and index 1 for +1.
S_j uniformly dominates S_k for S_i when its conditional agreement with S_i
beats S_k's on both realizations of S_i.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from bppsim import sst_models as sm

__all__ = [
    "TripleDistribution",
    "DominanceReport",
    "is_uniformly_dominant",
    "triple_from_model",
    "triple_from_model_mc",
    "claim_transitive_check",
    "is_uniformly_dominant_general",
    "flip_triple",
]

STRICT_TOL = 1e-9


@dataclass(frozen=True)
class TripleDistribution:
    p: np.ndarray  # shape (2, 2, 2), [s_i, s_j, s_k], index 0 -> -1

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (2, 2, 2):
            raise ValueError("triple distribution must be 2x2x2")
        if np.any(p < -1e-15) or abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("entries must be a probability distribution")
        object.__setattr__(self, "p", np.clip(p, 0.0, None))

    def marginal_i(self):
        return self.p.sum(axis=(1, 2))

    def conditional(self, s_i: int):
        """2x2 table of (S_j, S_k) given S_i = s_i (+-1)."""
        idx = (s_i + 1) // 2
        m = self.p[idx].sum()
        if m <= 0:
            raise ValueError(f"degenerate marginal Pr[S_i = {s_i}] = 0")
        return self.p[idx] / m

    def serialize(self) -> str:
        """8 comma-separated cells, lexicographic (s_i, s_j, s_k), -1 < 1."""
        return ",".join(repr(float(x)) for x in self.p.ravel())

    @classmethod
    def deserialize(cls, text: str) -> "TripleDistribution":
        vals = np.array([float(x) for x in text.strip().split(",")])
        if vals.size != 8:
            raise ValueError("expected 8 comma-separated probabilities")
        return cls(vals.reshape(2, 2, 2))


@dataclass(frozen=True)
class DominanceReport:
    delta_plus: float   # Pr[S_j=1|S_i=1] - Pr[S_k=1|S_i=1]
    delta_minus: float  # Pr[S_j=-1|S_i=-1] - Pr[S_k=-1|S_i=-1]
    dominant: bool

    def margin(self, s_i: int) -> float:
        """Dominance margin delta_{s_i} = Pr[S_j=s_i|S_i=s_i] - Pr[S_k=s_i|S_i=s_i]."""
        return self.delta_plus if s_i == 1 else self.delta_minus


def is_uniformly_dominant(P: TripleDistribution, tol=STRICT_TOL) -> DominanceReport:
    """Both conditional margins, plus the strict dominance verdict."""
    cond_pos = P.conditional(1)
    cond_neg = P.conditional(-1)
    delta_plus = cond_pos[1].sum() - cond_pos[:, 1].sum()
    delta_minus = cond_neg[0].sum() - cond_neg[:, 0].sum()
    return DominanceReport(
        delta_plus=float(delta_plus),
        delta_minus=float(delta_minus),
        dominant=bool(delta_plus > tol and delta_minus > tol),
    )


def flip_triple(P: TripleDistribution) -> TripleDistribution:
    """Global sign flip s -> -s on all three coordinates."""
    return TripleDistribution(P.p[::-1, ::-1, ::-1].copy())


def _triple_from_qs(q_i, q_j, q_k, weights):
    """Joint of three conditionally independent +-1 signals with per-theta means."""
    p = np.zeros((2, 2, 2))
    signs = np.array([-1.0, 1.0])
    for w, qi, qj, qk in zip(weights, q_i, q_j, q_k):
        pi = 0.5 * (1.0 + signs * qi)
        pj = 0.5 * (1.0 + signs * qj)
        pk = 0.5 * (1.0 + signs * qk)
        p += w * pi[:, None, None] * pj[None, :, None] * pk[None, None, :]
    return TripleDistribution(p)


def triple_from_model(model, a, a_prime, a_dprime) -> TripleDistribution:
    """Exact joint of (S(a,a'), S(a'',a'), S(a'',a)) for a finite-prior model.

    Uses conditional independence of comparisons given theta.
    """
    if len({a, a_prime, a_dprime}) != 3:
        raise ValueError("items must be distinct")
    thetas, weights = sm.enumerate_thetas(model)
    q_i = [2.0 * sm.pairwise_prob(model, t, a, a_prime) - 1.0 for t in thetas]
    q_j = [2.0 * sm.pairwise_prob(model, t, a_dprime, a_prime) - 1.0 for t in thetas]
    q_k = [2.0 * sm.pairwise_prob(model, t, a_dprime, a) - 1.0 for t in thetas]
    return _triple_from_qs(q_i, q_j, q_k, weights)


def triple_from_model_mc(model, a, a_prime, a_dprime, n_samples, rng):
    """Empirical joint of the same triple; returns (TripleDistribution, n_samples)."""
    if len({a, a_prime, a_dprime}) != 3:
        raise ValueError("items must be distinct")
    counts = np.zeros((2, 2, 2))
    for _ in range(n_samples):
        theta = sm.sample_theta(model, rng)
        si = rng.random() < sm.pairwise_prob(model, theta, a, a_prime)
        sj = rng.random() < sm.pairwise_prob(model, theta, a_dprime, a_prime)
        sk = rng.random() < sm.pairwise_prob(model, theta, a_dprime, a)
        counts[int(si), int(sj), int(sk)] += 1
    return TripleDistribution(counts / n_samples), n_samples


def claim_transitive_check(q, a, a_prime, a_dprime, tol=0.0):
    """Per-theta product inequality behind the SST-to-dominance bridge.

    Verifies Q(a,a') Q(a'',a') > Q(a,a') Q(a'',a); returns True on pass,
    'degenerate' when Q(a,a') = 0, False on failure.
    """
    q = np.asarray(q, dtype=float)
    lead = q[a, a_prime]
    if lead == 0.0:
        return "degenerate"
    return bool(lead * q[a_dprime, a_prime] > lead * q[a_dprime, a] + tol)


@dataclass(frozen=True)
class GeneralDominanceReport:
    dominant: bool
    witness: tuple | None  # (s, s_prime) of the first failing sign condition


def is_uniformly_dominant_general(p, tol=STRICT_TOL) -> GeneralDominanceReport:
    """Uniform dominance over a finite signal alphabet of size >= 2.

    ``p`` is an (m, m, m) joint over (S_i, S_j, S_k).  For every s with
    positive marginal and every s' != s the conditional difference
    Pr[S_j=.|S_i=s] - Pr[S_k=.|S_i=s] must be positive at s and negative
    at s'.
    """
    p = np.asarray(p, dtype=float)
    m = p.shape[0]
    if p.shape != (m, m, m) or m < 2:
        raise ValueError("need an (m, m, m) joint with m >= 2")
    if np.any(p < -1e-15) or abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("entries must be a probability distribution")
    for s in range(m):
        mass = p[s].sum()
        if mass <= 0:
            raise ValueError(f"degenerate marginal Pr[S_i = index {s}] = 0")
        pj = p[s].sum(axis=1) / mass
        pk = p[s].sum(axis=0) / mass
        diff = pj - pk
        if diff[s] <= tol:
            return GeneralDominanceReport(False, (s, s))
        for sp in range(m):
            if sp != s and diff[sp] >= -tol:
                return GeneralDominanceReport(False, (s, sp))
    return GeneralDominanceReport(True, None)


def all_triples(n):
    """Ordered distinct item triples (a, a', a'')."""
    return itertools.permutations(range(n), 3)
