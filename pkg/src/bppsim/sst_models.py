"""Comparison models with a Bayesian strong-stochastic-transitivity structure.

A model consists of a latent parameter theta (item scores, a reference
ranking, or a mixture index) with a prior, and per-theta pairwise win
probabilities.  Signals are +1 ("first item preferred") / -1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LinkFunction",
    "Parametric",
    "Mallows",
    "NoisySort",
    "FiniteMixture",
    "sample_theta",
    "pairwise_prob",
    "pairwise_matrix",
    "mallows_pairwise_marginal",
    "sample_mallows_ranking",
    "kendall_tau",
    "check_sst",
    "check_weak_st",
    "check_apriori_similar",
    "h_eta",
    "h_eta_claim_check",
    "enumerate_thetas",
    "load_model_config",
]

MAX_ITEMS = 10_000
EXACT_RANKING_LIMIT = 7  # enumerate all rankings up to 7! = 5040


def gaussian_cdf(t):
    return 0.5 * math.erfc(-t / math.sqrt(2.0))


def sigmoid(t):
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


@dataclass(frozen=True)
class LinkFunction:
    """Strictly increasing link F with F(t) = 1 - F(-t).

    kind is 'btl' (sigmoid), 'thurstone' (Gaussian CDF) or 'custom' with a
    tabulated map, interpolated linearly between grid points.
    """
    kind: str
    grid: np.ndarray | None = None
    values: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("btl", "thurstone", "custom"):
            raise ValueError(f"unknown link kind {self.kind!r}")
        if self.kind == "custom":
            g = np.asarray(self.grid, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if g.ndim != 1 or g.shape != v.shape:
                raise ValueError("custom link needs matching 1-d grid and values")
            if np.any(np.diff(g) <= 0) or np.any(np.diff(v) <= 0):
                raise ValueError("custom link must be strictly increasing")
            object.__setattr__(self, "grid", g)
            object.__setattr__(self, "values", v)
            # symmetry F(t) = 1 - F(-t) on the tabulated points
            sym = v + np.interp(-g, g, v)
            if np.max(np.abs(sym - 1.0)) > 1e-10:
                raise ValueError("custom link violates F(t) = 1 - F(-t)")

    def __call__(self, t: float) -> float:
        if self.kind == "btl":
            return sigmoid(t)
        if self.kind == "thurstone":
            return gaussian_cdf(t)
        return float(np.interp(t, self.grid, self.values))


BTL = LinkFunction("btl")
THURSTONE = LinkFunction("thurstone")


@dataclass(frozen=True)
class Parametric:
    """Score-based model: Pr[first preferred] = F(theta_a - theta_a')."""
    link: LinkFunction
    n_items: int
    score_prior: str = "normal"  # iid standard normal scores

    def __post_init__(self):
        if not 2 <= self.n_items <= MAX_ITEMS:
            raise ValueError("n_items out of range")


@dataclass(frozen=True)
class Mallows:
    """Mallows ranking model, Pr(phi) proportional to exp(-eta * KT distance)."""
    eta: float
    n_items: int

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError("eta must be positive")
        if not 2 <= self.n_items <= MAX_ITEMS:
            raise ValueError("n_items out of range")


@dataclass(frozen=True)
class NoisySort:
    """Noisy-sorting model: every pair flips the reference order w.p. 1/2 - gamma."""
    gamma: float
    n_items: int

    def __post_init__(self):
        if not 0 < self.gamma < 0.5:
            raise ValueError("gamma must lie in (0, 1/2)")
        if not 2 <= self.n_items <= MAX_ITEMS:
            raise ValueError("n_items out of range")


@dataclass(frozen=True)
class FiniteMixture:
    """Explicit finite prior: a pairwise matrix Q per theta plus weights."""
    thetas: tuple = ()
    weights: np.ndarray = field(default_factory=lambda: np.array([]))

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if abs(w.sum() - 1.0) > 1e-12 or np.any(w < 0):
            raise ValueError("weights must form a probability vector")
        if len(self.thetas) != len(w):
            raise ValueError("one weight per theta required")
        qs = tuple(np.asarray(q, dtype=float) for q in self.thetas)
        for q in qs:
            _validate_pairwise_matrix(q)
        object.__setattr__(self, "thetas", qs)
        object.__setattr__(self, "weights", w)

    @property
    def n_items(self):
        return self.thetas[0].shape[0]


def _validate_pairwise_matrix(q):
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValueError("pairwise matrix must be square")
    if np.max(np.abs(q + q.T - 2 * np.diag(np.diag(q)))) > 1e-12:
        raise ValueError("pairwise matrix must be antisymmetric")
    if np.max(np.abs(q)) > 1.0 + 1e-12:
        raise ValueError("pairwise matrix entries must lie in [-1, 1]")


def sample_theta(model, rng):
    """Draw theta from the model prior.

    Parametric -> score vector (resampled on float ties), Mallows/NoisySort ->
    uniform reference ranking (rank array, 0 = best), FiniteMixture -> index.
    """
    if isinstance(model, Parametric):
        while True:
            theta = rng.standard_normal(model.n_items)
            if len(np.unique(theta)) == model.n_items:
                return theta
    if isinstance(model, (Mallows, NoisySort)):
        return rng.permutation(model.n_items)
    if isinstance(model, FiniteMixture):
        return int(rng.choice(len(model.weights), p=model.weights))
    raise TypeError(f"unknown model {type(model).__name__}")


def h_eta(eta, x):
    """x / (1 - exp(-eta x)); the Mallows partial-sum function."""
    return x / (1.0 - math.exp(-eta * x))


def mallows_pairwise_marginal(eta, rank_gap):
    """Pr[better-ranked item wins] for a reference-rank gap g >= 1.

    Equals h_eta(g+1) - h_eta(g), always in (1/2, 1).
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    if rank_gap < 1:
        raise ValueError("rank_gap must be >= 1")
    return h_eta(eta, rank_gap + 1) - h_eta(eta, rank_gap)


def pairwise_prob(model, theta, a, b):
    """Pr[T_theta(a, b) = 1], i.e. item a preferred over item b given theta."""
    if a == b:
        raise ValueError("items must be distinct")
    if isinstance(model, Parametric):
        return model.link(theta[a] - theta[b])
    if isinstance(model, Mallows):
        gap = theta[b] - theta[a]  # rank 0 is best
        if gap > 0:
            return mallows_pairwise_marginal(model.eta, gap)
        return 1.0 - mallows_pairwise_marginal(model.eta, -gap)
    if isinstance(model, NoisySort):
        return 0.5 + model.gamma if theta[a] < theta[b] else 0.5 - model.gamma
    if isinstance(model, FiniteMixture):
        return 0.5 * (model.thetas[theta][a, b] + 1.0)
    raise TypeError(f"unknown model {type(model).__name__}")


def pairwise_matrix(model, theta, n_items=None):
    """Antisymmetric Q with Q[a, b] = E[T_theta(a, b) | theta] = 2 p(a, b) - 1."""
    if isinstance(model, FiniteMixture):
        return model.thetas[theta].copy()
    n = n_items or model.n_items
    q = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            q[a, b] = 2.0 * pairwise_prob(model, theta, a, b) - 1.0
            q[b, a] = -q[a, b]
    return q


def kendall_tau(ranking_a, ranking_b):
    """Number of discordant pairs between two rank arrays."""
    n = len(ranking_a)
    d = 0
    for a in range(n):
        for b in range(a + 1, n):
            if (ranking_a[a] - ranking_a[b]) * (ranking_b[a] - ranking_b[b]) < 0:
                d += 1
    return d


def sample_mallows_ranking(eta, reference, rng):
    """Exact Mallows draw by repeated insertion.

    Items are inserted best-to-worst (per the reference); inserting the k-th
    item j slots above the bottom adds j inversions, weighted exp(-eta * j).
    Returns a rank array in the same item indexing as ``reference``.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    reference = np.asarray(reference)
    n = len(reference)
    order = np.argsort(reference)  # items best-to-worst
    placed: list[int] = []
    for k in range(n):
        w = np.exp(-eta * np.arange(k, -1, -1, dtype=float))  # position 0..k, top first
        w /= w.sum()
        pos = rng.choice(k + 1, p=w)
        placed.insert(pos, order[k])
    ranks = np.empty(n, dtype=int)
    for r, item in enumerate(placed):
        ranks[item] = r
    return ranks


def check_sst(q, tol=0.0):
    """Check strong stochastic transitivity of a pairwise matrix.

    Returns None on pass, otherwise the first violating (a, b, c) with
    Q[a,b] > 0, Q[b,c] > 0 but Q[a,c] <= max(Q[a,b], Q[b,c]).
    """
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    for a, b, c in itertools.permutations(range(n), 3):
        if q[a, b] > tol and q[b, c] > tol:
            if q[a, c] <= max(q[a, b], q[b, c]) + tol:
                return (a, b, c)
    return None


def check_weak_st(q, tol=0.0):
    """As check_sst but only requires Q[a,c] > 0 in the conclusion."""
    q = np.asarray(q, dtype=float)
    n = q.shape[0]
    for a, b, c in itertools.permutations(range(n), 3):
        if q[a, b] > tol and q[b, c] > tol and q[a, c] <= tol:
            return (a, b, c)
    return None


def enumerate_thetas(model):
    """Finite-prior support as (thetas, weights); errors on non-finite priors."""
    if isinstance(model, FiniteMixture):
        return list(range(len(model.weights))), model.weights.copy()
    if isinstance(model, (Mallows, NoisySort)):
        n = model.n_items
        if n > EXACT_RANKING_LIMIT:
            raise ValueError(f"exact enumeration limited to {EXACT_RANKING_LIMIT} items")
        thetas = [np.array(p) for p in itertools.permutations(range(n))]
        return thetas, np.full(len(thetas), 1.0 / len(thetas))
    raise TypeError(f"{type(model).__name__} has no finite parameter space")


def check_apriori_similar(model, n_samples=100_000, rng=None, tol=1e-10):
    """Verify E_theta[Q(a, b)] = 0 with per-theta Q(a, b) != 0.

    Finite priors are checked exactly; Parametric models by Monte Carlo with
    a 3-sigma band.  Returns None on pass, else (pair, residual).
    """
    if isinstance(model, Parametric):
        rng = rng or np.random.default_rng(0)
        n = model.n_items
        a, b = 0, 1
        vals = np.empty(n_samples)
        for t in range(n_samples):
            theta = rng.standard_normal(n)
            vals[t] = 2.0 * pairwise_prob(model, theta, a, b) - 1.0
        mean = vals.mean()
        band = 3.0 * vals.std(ddof=1) / math.sqrt(n_samples)
        if abs(mean) > band:
            return ((a, b), mean)
        return None
    thetas, weights = enumerate_thetas(model)
    n = model.n_items
    for a in range(n):
        for b in range(a + 1, n):
            total = 0.0
            for theta, w in zip(thetas, weights):
                q = 2.0 * pairwise_prob(model, theta, a, b) - 1.0
                if q == 0.0:
                    return ((a, b), 0.0)
                total += w * q
            if abs(total) > tol:
                return ((a, b), total)
    return None


def h_eta_claim_check(eta, x_max):
    """Verify the gaps h(x+1) - h(x) exceed 1/2 and increase for x = 1..x_max.

    Returns None on pass, else the first failing x.
    """
    if eta <= 0 or x_max < 2:
        raise ValueError("need eta > 0 and x_max >= 2")
    prev = None
    for x in range(1, x_max + 1):
        gap = h_eta(eta, x + 1) - h_eta(eta, x)
        # monotonicity up to float saturation: gaps approach 1 and the
        # exponential tail underflows, leaving exactly equal values
        if gap <= 0.5 or (prev is not None and gap < prev - 1e-12):
            return x
        prev = gap
    return None


def load_model_config(path):
    """Parse a key=value model fixture file into a ComparisonModel."""
    keys = {}
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            k, _, v = line.partition("=")
            keys[k.strip()] = v.strip()
    variant = keys.get("variant", "").lower()
    n_items = int(keys.get("n_items", 0))
    if variant == "mallows":
        return Mallows(eta=float(keys["eta"]), n_items=n_items)
    if variant == "noisysort":
        return NoisySort(gamma=float(keys["gamma"]), n_items=n_items)
    if variant in ("btl", "thurstone"):
        return Parametric(link=BTL if variant == "btl" else THURSTONE, n_items=n_items)
    raise ValueError(f"unknown variant {keys.get('variant')!r}")
