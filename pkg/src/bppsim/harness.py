"""Dataset ingestion and the experiment pipelines.

Rankings come as CSV rows ``agent_id,item_0,item_1,...`` listed best-to-worst;
networks as an edge CSV plus a label CSV.  The pipelines pay every agent the
average bonus-penalty payment over randomized trials under three settings:
truth-telling, uninformed (all reports replaced by coins), and unilateral
deviation (only the paid agent's report replaced).
"""
from __future__ import annotations

import csv
import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from bppsim.ising import Graph, IsingModel, glauber_sample
from bppsim.payments import bpp, nae
from bppsim.sst_models import sample_mallows_ranking

__all__ = [
    "RankingDataset",
    "NetworkDataset",
    "load_rankings",
    "load_network",
    "experiment_comparison",
    "experiment_network",
    "experiment_network_model",
    "ecdf",
    "dominance_test",
    "empirical_transitivity",
    "summarize",
    "synthetic_mallows_dataset",
    "synthetic_ising_dataset",
    "write_payment_rows",
]

SETTINGS = ("truth", "uninformed", "deviation")


@dataclass(frozen=True)
class RankingDataset:
    """Complete rankings: ranks[agent, item] = position, 0 best."""
    agent_ids: tuple
    ranks: np.ndarray

    @property
    def n_agents(self):
        return self.ranks.shape[0]

    @property
    def n_items(self):
        return self.ranks.shape[1]

    def compare(self, agent_idx, a, b):
        """+1 if the agent ranks item a above item b."""
        return 1 if self.ranks[agent_idx, a] < self.ranks[agent_idx, b] else -1


@dataclass(frozen=True)
class NetworkDataset:
    graph: Graph
    labels: np.ndarray  # +-1 per node

    @property
    def prior(self):
        """Empirical fraction of +1 labels."""
        return float(np.mean(self.labels == 1))


def load_rankings(path) -> RankingDataset:
    agent_ids = []
    rows = []
    n_items = None
    with open(path, newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].startswith("#"):
                continue
            agent_ids.append(row[0])
            items = [int(x) for x in row[1:]]
            if n_items is None:
                n_items = len(items)
            if len(items) != n_items or sorted(items) != list(range(n_items)):
                raise ValueError(f"line {line_no}: not a permutation of 0..{n_items - 1}")
            ranks = np.empty(n_items, dtype=int)
            for pos, item in enumerate(items):
                ranks[item] = pos
            rows.append(ranks)
    if not rows:
        raise ValueError("empty ranking file")
    return RankingDataset(tuple(agent_ids), np.array(rows))


def load_network(edge_path, label_path) -> NetworkDataset:
    edges = set()
    max_node = -1
    with open(edge_path, newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 2:
                raise ValueError(f"{edge_path} line {line_no}: expected u,v")
            u, v = int(row[0]), int(row[1])
            if u == v:
                raise ValueError(f"{edge_path} line {line_no}: self-loop {u}")
            edges.add((min(u, v), max(u, v)))
            max_node = max(max_node, u, v)
    labels = {}
    with open(label_path, newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 2:
                raise ValueError(f"{label_path} line {line_no}: expected agent_id,label")
            agent, lab = int(row[0]), int(row[1])
            if lab == 0:
                warnings.warn(f"{label_path} line {line_no}: label 0 mapped to -1")
                lab = -1
            if lab not in (-1, 1):
                raise ValueError(f"{label_path} line {line_no}: label must be -1/1 (or 0/1)")
            labels[agent] = lab
            max_node = max(max_node, agent)
    n = max_node + 1
    missing = [i for i in range(n) if i not in labels]
    if missing:
        raise ValueError(f"labels missing for nodes {missing[:5]}")
    return NetworkDataset(
        Graph(n, tuple(sorted(edges))),
        np.array([labels[i] for i in range(n)]),
    )


def _trial_rng(master_seed, agent, trial):
    return np.random.default_rng([int(master_seed), int(agent), int(trial)])


def experiment_comparison(dataset: RankingDataset, trials=100, setting="truth",
                          master_seed=0, debug=False):
    """Average payment per agent for the comparison pipeline.

    Per trial, three distinct items (a, a', a'') and two distinct other
    agents (j, k) are drawn; signals are the rankings' comparisons on
    (a, a'), (a'', a'), and (a'', a) so the bonus peer shares item a' and the
    penalty peer shares item a.  With ``debug`` the transitivity-indicator
    identity is asserted on every trial.
    """
    if setting not in SETTINGS:
        raise ValueError(f"setting must be one of {SETTINGS}")
    n, m = dataset.n_agents, dataset.n_items
    if n < 3 or m < 3:
        raise ValueError("need at least 3 agents and 3 items")
    payments = np.zeros(n)
    for i in range(n):
        total = 0.0
        for t in range(trials):
            rng = _trial_rng(master_seed, i, t)
            a, ap, app = rng.choice(m, size=3, replace=False)
            others = [x for x in range(n) if x != i]
            j, k = rng.choice(others, size=2, replace=False)
            s_i = dataset.compare(i, a, ap)
            s_j = dataset.compare(j, app, ap)
            s_k = dataset.compare(k, app, a)
            if debug:
                # the not-all-equal transitivity indicator on the oriented
                # comparisons must match the payment affinely
                lhs = nae(s_i, -s_j, s_k)
                rhs = 0.25 * bpp(s_i, s_j, s_k) + 0.75 + 0.25 * s_j * s_k
                assert abs(lhs - rhs) < 1e-12
            if setting == "uninformed":
                s_i, s_j, s_k = (1 if rng.random() < 0.5 else -1 for _ in range(3))
            elif setting == "deviation":
                s_i = 1 if rng.random() < 0.5 else -1
            total += bpp(s_i, s_j, s_k)
        payments[i] = total / trials
    return payments


def experiment_network(dataset: NetworkDataset, trials=100, setting="truth",
                       master_seed=0, prior=None):
    """Average payment per agent for the network pipeline.

    Truth pays bpp(own label, random friend's, random non-friend's);
    uninformed replaces all three reports with iid prior draws; deviation
    replaces only the paid agent's report with a fair coin.  Agents without
    both a friend and a non-friend are skipped (payment NaN).
    """
    if setting not in SETTINGS:
        raise ValueError(f"setting must be one of {SETTINGS}")
    g, labels = dataset.graph, dataset.labels
    prior = dataset.prior if prior is None else prior
    n = g.n
    payments = np.full(n, np.nan)
    all_nodes = set(range(n))
    for i in range(n):
        friends = g.neighbors(i)
        non_friends = sorted(all_nodes - set(friends) - {i})
        if not friends or not non_friends:
            continue
        total = 0.0
        for t in range(trials):
            rng = _trial_rng(master_seed, i, t)
            j = friends[int(rng.integers(len(friends)))]
            k = non_friends[int(rng.integers(len(non_friends)))]
            if setting == "uninformed":
                s_i, s_j, s_k = (1 if rng.random() < prior else -1 for _ in range(3))
            elif setting == "deviation":
                s_i = 1 if rng.random() < 0.5 else -1
                s_j, s_k = labels[j], labels[k]
            else:
                s_i, s_j, s_k = labels[i], labels[j], labels[k]
            total += bpp(int(s_i), int(s_j), int(s_k))
        payments[i] = total / trials
    return payments


def experiment_network_model(model, trials=100, setting="truth", master_seed=0,
                             burn_in=2000, thin=5, prior=0.5):
    """Network pipeline with labels redrawn from an Ising model every trial.

    A fixed dataset freezes one world; when the signal prior itself is
    available (synthetic runs), each trial uses a fresh Glauber configuration
    so per-agent averages estimate the model-level expected payment.
    """
    if setting not in SETTINGS:
        raise ValueError(f"setting must be one of {SETTINGS}")
    g = model.graph
    n = g.n
    chain_rng = np.random.default_rng([int(master_seed), n])
    configs = glauber_sample(model, n_samples=trials, burn_in=burn_in, rng=chain_rng, thin=thin)
    payments = np.full(n, np.nan)
    all_nodes = set(range(n))
    for i in range(n):
        friends = g.neighbors(i)
        non_friends = sorted(all_nodes - set(friends) - {i})
        if not friends or not non_friends:
            continue
        total = 0.0
        for t in range(trials):
            rng = _trial_rng(master_seed, i, t)
            labels = configs[t]
            j = friends[int(rng.integers(len(friends)))]
            k = non_friends[int(rng.integers(len(non_friends)))]
            if setting == "uninformed":
                s_i, s_j, s_k = (1 if rng.random() < prior else -1 for _ in range(3))
            elif setting == "deviation":
                s_i = 1 if rng.random() < 0.5 else -1
                s_j, s_k = labels[j], labels[k]
            else:
                s_i, s_j, s_k = labels[i], labels[j], labels[k]
            total += bpp(int(s_i), int(s_j), int(s_k))
        payments[i] = total / trials
    return payments


def ecdf(payments):
    """Sorted values with cumulative fractions; ignores NaN (skipped agents)."""
    vals = np.sort(np.asarray(payments, dtype=float))
    vals = vals[~np.isnan(vals)]
    if vals.size == 0:
        raise ValueError("empty payment vector")
    fracs = np.arange(1, vals.size + 1) / vals.size
    return vals, fracs


def _ecdf_at(vals, fracs, x):
    idx = np.searchsorted(vals, x, side="right")
    return 0.0 if idx == 0 else fracs[idx - 1]


def dominance_test(e1, e2, tol=1e-12):
    """'dominated' when e1 <= e2 pointwise on the merged support, else 'crossed'.

    e1 below e2 means the first sample first-order stochastically dominates
    the second.  Returns (verdict, equal_flag).
    """
    v1, f1 = e1
    v2, f2 = e2
    support = np.union1d(v1, v2)
    diffs = [_ecdf_at(v1, f1, x) - _ecdf_at(v2, f2, x) for x in support]
    if all(d <= tol for d in diffs):
        equal = all(abs(d) <= tol for d in diffs)
        return "dominated", equal
    return "crossed", False


def empirical_transitivity(dataset: RankingDataset):
    """Fractions of item triples satisfying (weak, strong) transitivity.

    Each unordered triple is oriented as a majority chain a > a' > a'';
    triples with any pairwise proportion exactly 1/2 are excluded and
    counted separately.  Also reports the mean strong-margin
    p_{a>a''} - max(p_{a>a'}, p_{a'>a''}).
    """
    n, m = dataset.n_agents, dataset.n_items
    if m < 3:
        raise ValueError("need at least 3 items")
    win = np.zeros((m, m))
    for a in range(m):
        for b in range(m):
            if a != b:
                win[a, b] = np.mean(dataset.ranks[:, a] < dataset.ranks[:, b])
    weak = strong = total = ties = 0
    margins = []
    for trio in itertools.combinations(range(m), 3):
        if any(win[x, y] == 0.5 for x, y in itertools.combinations(trio, 2)):
            ties += 1
            continue
        chain = None
        for a, ap, app in itertools.permutations(trio):
            if win[a, ap] > 0.5 and win[ap, app] > 0.5:
                chain = (a, ap, app)
                break
        assert chain is not None  # a 3-tournament always has a 2-edge path
        a, ap, app = chain
        total += 1
        if win[a, app] > 0.5:
            weak += 1
        # >= so that unanimous datasets (all proportions 1) count as strong
        if win[a, app] >= max(win[a, ap], win[ap, app]) - 1e-12:
            strong += 1
        margins.append(win[a, app] - max(win[a, ap], win[ap, app]))
    if total == 0:
        raise ValueError("no tie-free triples")
    return {
        "weak_fraction": weak / total,
        "strong_fraction": strong / total,
        "mean_strong_margin": float(np.mean(margins)),
        "n_triples": total,
        "n_tied": ties,
    }


def summarize(payments):
    """Mean payment and fraction strictly positive (NaN-skipping)."""
    vals = np.asarray(payments, dtype=float)
    vals = vals[~np.isnan(vals)]
    if vals.size == 0:
        raise ValueError("empty payment vector")
    return {"mean": float(vals.mean()), "fraction_positive": float(np.mean(vals > 0))}


def synthetic_mallows_dataset(eta, n_items, n_agents, rng) -> RankingDataset:
    """Agents draw iid Mallows rankings around a common hidden reference."""
    reference = rng.permutation(n_items)
    rows = [sample_mallows_ranking(eta, reference, rng) for _ in range(n_agents)]
    return RankingDataset(tuple(str(i) for i in range(n_agents)), np.array(rows))


def synthetic_ising_dataset(n, beta, rng, burn_in=2000, graph=None) -> NetworkDataset:
    """One Glauber-sampled label configuration on a cycle (max degree 2, so
    the degree/coupling sufficient condition holds for moderate beta)."""
    g = graph or Graph(n, tuple((i, (i + 1) % n) for i in range(n)))
    model = IsingModel.uniform(g, beta)
    labels = glauber_sample(model, n_samples=1, burn_in=burn_in, rng=rng)[0]
    return NetworkDataset(g, labels.astype(int))


def write_payment_rows(path, setting, payments, shift=0.0):
    """Rows ``agent_id,setting,payment``; skipped agents are omitted."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        for i, p in enumerate(np.asarray(payments, dtype=float)):
            if np.isnan(p):
                continue
            w.writerow([i, setting, format(p + shift, ".12g")])
