"""Audit arbitrary 3-input payment functions for strict truthfulness under
uniform dominance, and certify the affine bonus-penalty characterization.

A payment is a table of 8 reals over (s_i, s_j, s_k) in {-1,1}^3, stored as
a (2,2,2) array with index 0 -> -1.  Any such table splits exactly into
U = s_i * D(s_j, s_k) + mu(s_j, s_k); strict truthfulness on every dominant
triple forces D to be a positive multiple of (s_j - s_k).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from bppsim.dominance import TripleDistribution, is_uniformly_dominant
from bppsim.payments import bpp

__all__ = [
    "payment_table",
    "bpp_table",
    "decompose",
    "is_affine_bpp",
    "witness_p1",
    "witness_p2",
    "witness_p2_mirror",
    "truthfulness_audit",
    "uniqueness_search",
    "random_dominant_triple",
]

TOL = 1e-10
WITNESS_GRID = (0.5, 0.25, 0.1, 0.01, 0.001)


def payment_table(values):
    u = np.asarray(values, dtype=float)
    if u.size != 8:
        raise ValueError("payment needs 8 values")
    u = u.reshape(2, 2, 2)
    if not np.all(np.isfinite(u)):
        raise ValueError("payment entries must be finite")
    return u


def bpp_table():
    u = np.empty((2, 2, 2))
    for a, si in ((0, -1), (1, 1)):
        for b, sj in ((0, -1), (1, 1)):
            for c, sk in ((0, -1), (1, 1)):
                u[a, b, c] = bpp(si, sj, sk)
    return u


@dataclass(frozen=True)
class Decomposition:
    d_part: np.ndarray   # D(s_j, s_k) = (U(1,.,.) - U(-1,.,.)) / 2
    mu_part: np.ndarray  # mu(s_j, s_k) = (U(1,.,.) + U(-1,.,.)) / 2

    def reconstruct(self):
        u = np.empty((2, 2, 2))
        u[0] = -self.d_part + self.mu_part
        u[1] = self.d_part + self.mu_part
        return u


def decompose(u) -> Decomposition:
    u = payment_table(u)
    return Decomposition(
        d_part=0.5 * (u[1] - u[0]),
        mu_part=0.5 * (u[1] + u[0]),
    )


def is_affine_bpp(u, tol=TOL):
    """(lambda, mu table) when U = lambda*bpp + mu(s_j, s_k), else None.

    Requires D zero on the diagonal, antisymmetric off it, and positive at
    (s_j, s_k) = (1, -1).
    """
    dec = decompose(u)
    d = dec.d_part
    # index [1, 0] is (s_j, s_k) = (1, -1)
    if abs(d[1, 1]) > tol or abs(d[0, 0]) > tol:
        return None
    if abs(d[1, 0] + d[0, 1]) > tol:
        return None
    if d[1, 0] <= tol:
        return None
    return float(d[1, 0]) / 2.0, dec.mu_part.copy()


def _from_conditionals(cond_pos, cond_neg):
    """Join two (s_j, s_k) tables with a fair S_i marginal."""
    p = np.empty((2, 2, 2))
    p[1] = 0.5 * cond_pos
    p[0] = 0.5 * cond_neg
    return TripleDistribution(p)


def witness_p1(delta) -> TripleDistribution:
    """Antidiagonal witness family: margins 2*delta on both signals."""
    if not 0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 1/2]")
    # rows s_j in (+1, -1) per the source layout; our arrays use 0 -> -1
    cond_pos = np.array([[0.0, 0.5 - delta], [0.5 + delta, 0.0]])  # [s_j, s_k], 0 -> -1
    cond_neg = np.array([[0.0, 0.5 + delta], [0.5 - delta, 0.0]])
    return _from_conditionals(cond_pos, cond_neg)


def witness_p2(epsilon) -> TripleDistribution:
    """Diagonal-heavy witness family: margins epsilon/2, mass near (1, 1)."""
    if not 0 <= epsilon <= 1:
        raise ValueError("epsilon must lie in [0, 1]")
    cond_pos = np.array([[0.0, epsilon / 4.0], [0.75 * epsilon, 1.0 - epsilon]])
    cond_neg = np.array([[0.0, 0.75 * epsilon], [epsilon / 4.0, 1.0 - epsilon]])
    return _from_conditionals(cond_pos, cond_neg)


def witness_p2_mirror(epsilon) -> TripleDistribution:
    """Global sign flip of witness_p2; pushes mass near (-1, -1)."""
    base = witness_p2(epsilon)
    return TripleDistribution(base.p[::-1, ::-1, ::-1].copy())


def truthfulness_audit(u, P: TripleDistribution, tol=TOL):
    """'strict', 'weak', or 'violated': does truthful reporting maximize the
    conditional expectation of U on this dominant triple, per signal?"""
    u = payment_table(u)
    rep = is_uniformly_dominant(P)
    if not rep.dominant:
        raise ValueError("triple distribution is not uniformly dominant")
    verdict = "strict"
    for idx in (0, 1):
        cond = P.conditional(1 if idx == 1 else -1)
        vals = [float(np.sum(u[r] * cond)) for r in (0, 1)]
        margin = vals[idx] - vals[1 - idx]
        if margin < -tol:
            return "violated"
        if margin <= tol:
            verdict = "weak"
    return verdict


def random_dominant_triple(rng, min_margin=0.05, max_tries=10_000):
    """Rejection-sample a triple distribution with both margins above a floor."""
    for _ in range(max_tries):
        p = rng.random((2, 2, 2))
        p /= p.sum()
        P = TripleDistribution(p)
        rep = is_uniformly_dominant(P)
        if rep.dominant and min(rep.delta_plus, rep.delta_minus) > min_margin:
            return P
    raise RuntimeError("failed to sample a dominant triple")


def uniqueness_search(u, grid=WITNESS_GRID, n_random=200, rng=None):
    """Certify U as affine-BPP or find a dominant triple refuting strictness.

    Returns ('certificate', (lambda, mu)) or ('counterexample', P) or
    ('inconclusive', None) if the search is exhausted.
    """
    cert = is_affine_bpp(u)
    if cert is not None:
        return "certificate", cert
    candidates = []
    for g in grid:
        candidates.append(witness_p1(min(g, 0.5)))
        candidates.append(witness_p2(g))
        candidates.append(witness_p2_mirror(g))
    rng = rng or np.random.default_rng(0)
    for _ in range(n_random):
        candidates.append(random_dominant_triple(rng))
    for P in candidates:
        if truthfulness_audit(u, P) != "strict":
            return "counterexample", P
    return "inconclusive", None
