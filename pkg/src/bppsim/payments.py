"""Bonus-penalty payment, admissible assignments, and peer selection.

The payment rewards agreement with the bonus peer j and punishes agreement
with the penalty peer k: u = s_i*s_j - s_i*s_k.  Assignments map agents to
ordered item pairs; an assignment is admissible when every pair (a, a') has
a pivot a'' with (a'', a') and (a'', a) also assigned.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

__all__ = [
    "bpp",
    "nae",
    "Assignment",
    "check_admissible",
    "make_admissible",
    "select_peers_comparison",
    "select_peers_network",
    "pay_all",
    "load_assignment_csv",
    "write_payments_csv",
]


def _check_sign(*vals):
    for v in vals:
        if v not in (-1, 1):
            raise ValueError(f"signals must be +-1, got {v!r}")


def bpp(s_i, s_j, s_k):
    """Bonus-penalty payment s_i*s_j - s_i*s_k, in {-2, 0, 2}."""
    _check_sign(s_i, s_j, s_k)
    return s_i * s_j - s_i * s_k


def nae(w1, w2, w3):
    """1 iff the three +-1 inputs are not all equal, else 0."""
    _check_sign(w1, w2, w3)
    return round(0.75 - 0.25 * (w1 * w2 + w1 * w3 + w2 * w3))


@dataclass(frozen=True)
class Assignment:
    """Map agent id -> ordered pair of distinct item ids."""
    entries: dict

    def __post_init__(self):
        for agent, (u, v) in self.entries.items():
            if u == v:
                raise ValueError(f"agent {agent} assigned identical items")

    @property
    def pair_set(self):
        return set(self.entries.values())

    def holders(self, pair):
        """Agent ids holding an ordered pair, sorted for deterministic picks."""
        return sorted(a for a, e in self.entries.items() if e == pair)


def check_admissible(pairs):
    """Return None if the ordered-pair set is admissible, else a witness pair."""
    pairs = set(pairs)
    items = {x for p in pairs for x in p}
    for (a, ap) in sorted(pairs):
        if not any(
            (app, ap) in pairs and (app, a) in pairs
            for app in items
            if app not in (a, ap)
        ):
            return (a, ap)
    return None


def make_admissible(pairs0, n_items, rng=None):
    """Admissible superset of ``pairs0``, at most six times larger.

    For each pair, a pivot a'' (smallest index not in the pair, or a seeded
    random choice) contributes all six ordered pairs over {a, a', a''}.
    """
    if n_items < 3:
        raise ValueError("need at least 3 items")
    result = set(pairs0)
    for (a, ap) in sorted(pairs0):
        candidates = [x for x in range(n_items) if x not in (a, ap)]
        pivot = candidates[0] if rng is None else int(rng.choice(candidates))
        for x, y in ((a, ap), (a, pivot), (ap, pivot)):
            result.add((x, y))
            result.add((y, x))
    assert check_admissible(result) is None
    return result


def select_peers_comparison(assignment: Assignment, i, rng=None):
    """Pick (j, k, pivot) for agent i per the comparison mechanism.

    Needs e_j = (a'', a') and e_k = (a'', a) where e_i = (a, a').  Ties break
    to the smallest pivot then smallest agent ids, or uniformly when ``rng``
    is given.
    """
    a, ap = assignment.entries[i]
    candidates = []
    items = {x for p in assignment.pair_set for x in p}
    for app in sorted(items):
        if app in (a, ap):
            continue
        js = [j for j in assignment.holders((app, ap)) if j != i]
        ks = [k for k in assignment.holders((app, a)) if k != i]
        for j in js:
            for k in ks:
                if j != k:
                    candidates.append((j, k, app))
    if not candidates:
        raise ValueError(f"no valid peer tuple for agent {i}: assignment inadmissible at runtime")
    if rng is None:
        return min(candidates, key=lambda t: (t[2], t[0], t[1]))
    return candidates[int(rng.integers(len(candidates)))]


def select_peers_network(graph, i, rng=None):
    """Pick (friend j, non-friend k) for agent i on a graph."""
    friends = graph.neighbors(i)
    non_friends = [v for v in range(graph.n) if v != i and v not in set(friends)]
    if not friends:
        raise ValueError(f"agent {i} is isolated")
    if not non_friends:
        raise ValueError(f"agent {i} is adjacent to everyone")
    if rng is None:
        return friends[0], non_friends[0]
    return (
        int(friends[int(rng.integers(len(friends)))]),
        int(non_friends[int(rng.integers(len(non_friends)))]),
    )


def pay_all(reports, selection):
    """Average bonus-penalty payment per agent.

    ``selection`` maps agent i to a nonempty list of (j, k, ...) tuples;
    extra tuple elements (e.g. the pivot item) are ignored.
    """
    payments = {}
    for i, tuples in selection.items():
        total = 0.0
        for entry in tuples:
            j, k = entry[0], entry[1]
            try:
                total += bpp(reports[i], reports[j], reports[k])
            except KeyError as exc:
                raise ValueError(f"missing report for agent {exc.args[0]}") from exc
        payments[i] = total / len(tuples)
    return payments


def load_assignment_csv(path):
    """Rows ``agent_id,item_u,item_v`` -> Assignment."""
    entries = {}
    with open(path, newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 3:
                raise ValueError(f"line {line_no}: expected agent_id,item_u,item_v")
            agent, u, v = int(row[0]), int(row[1]), int(row[2])
            if agent in entries:
                raise ValueError(f"line {line_no}: duplicate agent {agent}")
            entries[agent] = (u, v)
    return Assignment(entries)


def write_payments_csv(path, payments):
    """Rows ``agent_id,payment`` with 12 significant digits."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        for agent in sorted(payments):
            w.writerow([agent, format(payments[agent], ".12g")])
