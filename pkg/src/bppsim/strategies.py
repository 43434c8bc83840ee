"""Report strategies, expected payments, best responses, and the symmetric
equilibrium sweep for the bonus-penalty game.

Strategies are row-stochastic matrices sigma[s, s_hat] indexed with 0 -> -1
and 1 -> +1, so sigma[0, 1] is the chance of reporting +1 on signal -1.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from bppsim.dominance import (
    TripleDistribution,
    is_uniformly_dominant,
    is_uniformly_dominant_general,
)

__all__ = [
    "validate_strategy",
    "classify_strategy",
    "truthful",
    "flip",
    "uninformed",
    "expected_payment",
    "conditional_payments",
    "best_response",
    "classify_symmetric_equilibria",
    "strongly_truthful_audit",
    "symmetric_profile_payment",
    "expected_payment_general",
    "informed_truthfulness_audit_general",
    "EquilibriumReport",
]

UNINFORMED_TOL = 1e-9
SIGNS = np.array([-1.0, 1.0])

_BPP_TABLE = np.array(
    [[[SIGNS[a] * SIGNS[b] - SIGNS[a] * SIGNS[c] for c in (0, 1)] for b in (0, 1)] for a in (0, 1)]
)


def truthful():
    return np.eye(2)


def flip():
    return np.eye(2)[::-1].copy()


def uninformed(p_report_one=0.5):
    return np.array([[1.0 - p_report_one, p_report_one]] * 2)


def validate_strategy(sigma):
    sigma = np.asarray(sigma, dtype=float)
    if sigma.shape[0] != sigma.shape[1] or sigma.ndim != 2:
        raise ValueError("strategy must be a square stochastic matrix")
    if np.any(sigma < -1e-15) or np.max(np.abs(sigma.sum(axis=1) - 1.0)) > 1e-12:
        raise ValueError("strategy rows must sum to 1 with entries in [0, 1]")
    return np.clip(sigma, 0.0, 1.0)


def classify_strategy(sigma, tol=UNINFORMED_TOL):
    """'Truthful', 'Flip', 'Uninformed', or 'OtherInformed'."""
    sigma = np.asarray(sigma, dtype=float)
    if np.max(np.abs(sigma - np.eye(2))) <= tol:
        return "Truthful"
    if np.max(np.abs(sigma - flip())) <= tol:
        return "Flip"
    if np.max(np.abs(sigma[0] - sigma[1])) <= tol:
        return "Uninformed"
    return "OtherInformed"


def expected_payment(P: TripleDistribution, sigma_i, sigma_j, sigma_k):
    """Exact expected payment and its per-signal conditional values.

    Returns (total, {+1: value, -1: value}) where the conditional value is
    E[u | S_i = s] with all three report randomizations applied.
    """
    sigma_i = validate_strategy(sigma_i)
    sigma_j = validate_strategy(sigma_j)
    sigma_k = validate_strategy(sigma_k)
    marg = P.marginal_i()
    conds = {}
    total = 0.0
    for idx, s in ((0, -1), (1, 1)):
        if marg[idx] <= 0:
            conds[s] = 0.0
            continue
        cond = P.p[idx] / marg[idx]  # (s_j, s_k)
        val = np.einsum(
            "jk,ia,jb,kc,abc->",
            cond,
            sigma_i[[idx]],
            sigma_j,
            sigma_k,
            _BPP_TABLE,
        )
        conds[s] = float(val)
        total += marg[idx] * val
    return float(total), conds


def conditional_payments(P: TripleDistribution, sigma_peer):
    """E[u(report, sigma(S_j), sigma(S_k)) | S_i = s] for each (s, report).

    Returns a 2x2 array indexed [signal, report] (0 -> -1).  Equals
    2 * delta_s * (sigma(s, r) - sigma(-s, r)) by the closed form.
    """
    sigma_peer = validate_strategy(sigma_peer)
    marg = P.marginal_i()
    out = np.zeros((2, 2))
    for idx in (0, 1):
        if marg[idx] <= 0:
            raise ValueError("degenerate S_i marginal")
        cond = P.p[idx] / marg[idx]
        for r in (0, 1):
            rep = np.zeros((1, 2))
            rep[0, r] = 1.0
            out[idx, r] = np.einsum(
                "jk,ia,jb,kc,abc->", cond, rep, sigma_peer, sigma_peer, _BPP_TABLE
            )
    return out


def best_response(P: TripleDistribution, sigma_peer, tol=UNINFORMED_TOL):
    """Best response map for agent i when both peers play sigma_peer.

    Requires a uniformly dominant P.  Returns {s: report or 'indifferent'}
    using the argmax of sigma(s, .) - sigma(-s, .).
    """
    report = is_uniformly_dominant(P)
    if not report.dominant:
        raise ValueError("triple distribution is not uniformly dominant")
    sigma_peer = validate_strategy(sigma_peer)
    out = {}
    for idx, s in ((0, -1), (1, 1)):
        diff = sigma_peer[idx] - sigma_peer[1 - idx]
        if abs(diff[0] - diff[1]) <= tol:
            out[s] = "indifferent"
        else:
            out[s] = -1 if diff[0] > diff[1] else 1
    return out


def symmetric_profile_payment(P: TripleDistribution, sigma):
    """Expected payment to agent i when all three agents play sigma."""
    total, _ = expected_payment(P, sigma, sigma, sigma)
    return total


def _is_equilibrium(cond_pay, sigma, tol):
    """Support of sigma must only contain best responses, per signal."""
    for idx in (0, 1):
        best = cond_pay[idx].max()
        for r in (0, 1):
            if sigma[idx, r] > tol and cond_pay[idx, r] < best - tol:
                return False
    return True


@dataclass
class EquilibriumReport:
    rows: list  # (sigma_11, sigma_m11, is_eq, classification, expected_payment)

    def equilibria(self):
        return [r for r in self.rows if r[2]]

    def classes_found(self):
        return {r[3] for r in self.equilibria()}

    def payment(self, classification):
        vals = [r[4] for r in self.equilibria() if r[3] == classification]
        return vals

    def write_csv(self, path):
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["sigma_11", "sigma_m11", "is_eq", "classification", "expected_payment"])
            for row in self.rows:
                w.writerow([format(row[0], ".10g"), format(row[1], ".10g"),
                            int(row[2]), row[3], format(row[4], ".12g")])


def classify_symmetric_equilibria(P: TripleDistribution, grid_resolution=101, tol=UNINFORMED_TOL):
    """Sweep symmetric strategies sigma(1,1) x sigma(-1,1) on a grid.

    Marks sigma an equilibrium when its support is best-response consistent,
    and records the symmetric-profile payment.
    """
    grid = np.linspace(0.0, 1.0, grid_resolution)
    points = {(float(p), float(q)) for p in grid for q in grid}
    points |= {(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (0.0, 0.0)}
    rows = []
    for p, q in sorted(points):
        sigma = np.array([[1.0 - q, q], [1.0 - p, p]])  # rows: signal -1, +1
        cond_pay = conditional_payments(P, sigma)
        is_eq = _is_equilibrium(cond_pay, sigma, tol)
        rows.append((p, q, is_eq, classify_strategy(sigma), symmetric_profile_payment(P, sigma)))
    return EquilibriumReport(rows)


def strongly_truthful_audit(P: TripleDistribution, tol=1e-10):
    """Check the headline equilibrium facts on one dominant triple.

    E[truth] > 0, E[truth] = E[flip], uninformed pays 0, and truth is a
    strict best response to truthful peers.  Returns None on pass, else a
    diagnostic string.
    """
    report = is_uniformly_dominant(P)
    if not report.dominant:
        return "triple distribution is not uniformly dominant"
    e_truth = symmetric_profile_payment(P, truthful())
    e_flip = symmetric_profile_payment(P, flip())
    if e_truth <= 0:
        return f"truthful payment {e_truth} not positive"
    if abs(e_truth - e_flip) > tol:
        return f"truth/flip payment mismatch: {e_truth} vs {e_flip}"
    for p1 in (0.0, 0.3, 0.5, 1.0):
        e_un = symmetric_profile_payment(P, uninformed(p1))
        if abs(e_un) > tol:
            return f"uninformed payment {e_un} nonzero"
    cond_pay = conditional_payments(P, truthful())
    for idx, s in ((0, -1), (1, 1)):
        if cond_pay[idx, idx] <= cond_pay[idx, 1 - idx] + tol:
            return f"truth not a strict best response at signal {s}"
    return None


def expected_payment_general(p, sigma_i, sigma_j, sigma_k):
    """Exact expected BPP payment for a joint over a finite alphabet."""
    p = np.asarray(p, dtype=float)
    m = p.shape[0]
    eye = np.eye(m)
    u = 2.0 * (eye[:, :, None] - eye[:, None, :])  # u[a,b,c] = 2(1[a=b]-1[a=c])
    return float(np.einsum("ijk,ia,jb,kc,abc->", p, sigma_i, sigma_j, sigma_k, u))


def _random_stochastic(m, rng):
    s = rng.random((m, m))
    return s / s.sum(axis=1, keepdims=True)


def informed_truthfulness_audit_general(p, n_strategies=500, rng=None, tol=1e-10):
    """Audit the non-binary extension on a dominant joint over m signals.

    Checks: truth is a strict best response, every uninformed strategy pays
    zero, and the truthful profile beats sampled symmetric profiles (strictly
    beating uninformed ones).  Returns None on pass, else a diagnostic.
    """
    rng = rng or np.random.default_rng(0)
    p = np.asarray(p, dtype=float)
    m = p.shape[0]
    rep = is_uniformly_dominant_general(p)
    if not rep.dominant:
        return f"not uniformly dominant (witness {rep.witness})"
    eye = np.eye(m)
    # strict truthfulness: per signal, truthful report maximizes the
    # conditional difference Pr[S_j=.|s] - Pr[S_k=.|s]
    for s in range(m):
        mass = p[s].sum()
        diff = p[s].sum(axis=1) / mass - p[s].sum(axis=0) / mass
        if not all(diff[s] > diff[t] + tol for t in range(m) if t != s):
            return f"truth not strictly optimal at signal {s}"
    e_truth = expected_payment_general(p, eye, eye, eye)
    if e_truth <= tol:
        return f"truthful payment {e_truth} not positive"
    for _ in range(8):
        row = _random_stochastic(1, rng)[0] if m > 1 else np.ones(1)
        sig = np.tile(row, (m, 1))
        e_un = expected_payment_general(p, sig, sig, sig)
        if abs(e_un) > 1e-9:
            return f"uninformed payment {e_un} nonzero"
    strategies = [_random_stochastic(m, rng) for _ in range(n_strategies)]
    if m <= 4:
        import itertools
        for det in itertools.product(range(m), repeat=m):
            strategies.append(eye[list(det)])
    for sig in strategies:
        e = expected_payment_general(p, sig, sig, sig)
        if e > e_truth + tol:
            return f"symmetric profile beats truth: {e} > {e_truth}"
    return None
