import numpy as np
import pytest

from bppsim import harness as hz
from bppsim.ising import Graph


@pytest.fixture
def small_rankings(tmp_path):
    path = tmp_path / "rankings.csv"
    path.write_text("a0,0,1,2,3\na1,1,0,2,3\na2,0,2,1,3\n")
    return path


def test_load_rankings(small_rankings):
    ds = hz.load_rankings(small_rankings)
    assert ds.n_agents == 3 and ds.n_items == 4
    assert ds.compare(0, 0, 1) == 1
    assert ds.compare(1, 0, 1) == -1


def test_load_rankings_rejects_bad_rows(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a0,0,1,2\na1,0,0,2\n")
    with pytest.raises(ValueError, match="line 2"):
        hz.load_rankings(path)
    path.write_text("")
    with pytest.raises(ValueError, match="empty"):
        hz.load_rankings(path)


def test_load_network(tmp_path):
    edges = tmp_path / "edges.csv"
    labels = tmp_path / "labels.csv"
    edges.write_text("0,1\n1,0\n1,2\n")
    labels.write_text("0,1\n1,-1\n2,1\n3,1\n")
    ds = hz.load_network(edges, labels)
    assert ds.graph.edges == ((0, 1), (1, 2))
    assert ds.graph.n == 4
    assert list(ds.labels) == [1, -1, 1, 1]
    assert abs(ds.prior - 0.75) < 1e-12


def test_load_network_zero_one_labels_warn(tmp_path):
    edges = tmp_path / "edges.csv"
    labels = tmp_path / "labels.csv"
    edges.write_text("0,1\n")
    labels.write_text("0,0\n1,1\n")
    with pytest.warns(UserWarning):
        ds = hz.load_network(edges, labels)
    assert list(ds.labels) == [-1, 1]
    labels.write_text("0,2\n1,1\n")
    with pytest.raises(ValueError, match="line 1"):
        hz.load_network(edges, labels)


def test_experiment_comparison_deterministic(small_rankings):
    ds = hz.load_rankings(small_rankings)
    a = hz.experiment_comparison(ds, trials=10, master_seed=3, debug=True)
    b = hz.experiment_comparison(ds, trials=10, master_seed=3)
    assert np.array_equal(a, b)
    c = hz.experiment_comparison(ds, trials=10, master_seed=4)
    assert not np.array_equal(a, c)


def test_experiment_comparison_validation(small_rankings):
    ds = hz.load_rankings(small_rankings)
    with pytest.raises(ValueError):
        hz.experiment_comparison(ds, setting="bogus")
    tiny = hz.RankingDataset(("x", "y"), np.array([[0, 1, 2], [0, 1, 2]]))
    with pytest.raises(ValueError):
        hz.experiment_comparison(tiny)


def test_experiment_network_skips_and_pays():
    # node 3 is isolated; node 0 adjacent to everyone else except 3... build:
    g = Graph(5, ((0, 1), (1, 2), (2, 0)))
    ds = hz.NetworkDataset(g, np.array([1, 1, -1, 1, -1]))
    vec = hz.experiment_network(ds, trials=5, master_seed=0)
    assert np.isnan(vec[3]) and np.isnan(vec[4])  # isolated: no friend
    assert not np.any(np.isnan(vec[:3]))


def test_network_uninformed_mean_near_zero():
    rng = np.random.default_rng(0)
    ds = hz.synthetic_ising_dataset(40, 0.2, rng, burn_in=300)
    vec = hz.experiment_network(ds, trials=50, setting="uninformed", master_seed=1)
    vals = vec[~np.isnan(vec)]
    sigma = vals.std(ddof=1) / np.sqrt(len(vals))
    assert abs(vals.mean()) < max(3 * sigma, 0.05)


def test_experiment_network_model_positive_mean():
    g = Graph(30, tuple((i, (i + 1) % 30) for i in range(30)))
    from bppsim.ising import IsingModel
    model = IsingModel.uniform(g, 0.3)
    vec = hz.experiment_network_model(model, trials=40, master_seed=0, burn_in=300)
    assert hz.summarize(vec)["mean"] > 0
    again = hz.experiment_network_model(model, trials=40, master_seed=0, burn_in=300)
    assert np.array_equal(vec, again)


def test_ecdf_basics():
    v, f = hz.ecdf(np.array([2.0, 2.0, 2.0]))
    assert np.array_equal(v, [2.0, 2.0, 2.0])
    assert f[-1] == 1.0
    with pytest.raises(ValueError):
        hz.ecdf(np.array([]))


def test_dominance_test_cases():
    x = np.array([0.0, 1.0, 2.0, 3.0])
    e = hz.ecdf(x)
    verdict, equal = hz.dominance_test(e, e)
    assert verdict == "dominated" and equal
    shifted = hz.ecdf(x + 1.0)
    verdict, equal = hz.dominance_test(shifted, e)
    assert verdict == "dominated" and not equal
    crossed, _ = hz.dominance_test(hz.ecdf(np.array([0.0, 5.0])), hz.ecdf(np.array([1.0, 2.0])))
    assert crossed == "crossed"


def test_empirical_transitivity_identical_rankings():
    ranks = np.tile(np.arange(5), (4, 1))
    ds = hz.RankingDataset(tuple("abcd"), ranks)
    out = hz.empirical_transitivity(ds)
    assert out["weak_fraction"] == 1.0
    assert out["strong_fraction"] == 1.0
    assert out["n_tied"] == 0


def test_empirical_transitivity_counts_ties():
    ranks = np.array([[0, 1, 2], [2, 1, 0]])  # every pairwise proportion 1/2
    ds = hz.RankingDataset(("a", "b"), ranks)
    with pytest.raises(ValueError, match="tie-free"):
        hz.empirical_transitivity(ds)


def test_summarize():
    out = hz.summarize(np.array([2.0, 0.0, -2.0]))
    assert out["mean"] == 0.0
    assert abs(out["fraction_positive"] - 1 / 3) < 1e-12
    out2 = hz.summarize(np.array([2.0, 2.0]))
    assert out2 == {"mean": 2.0, "fraction_positive": 1.0}


def test_synthetic_generators():
    rng = np.random.default_rng(0)
    ds = hz.synthetic_mallows_dataset(1.0, 6, 10, rng)
    assert ds.n_agents == 10 and ds.n_items == 6
    for row in ds.ranks:
        assert sorted(row) == list(range(6))
    nds = hz.synthetic_ising_dataset(20, 0.3, rng, burn_in=100)
    assert nds.graph.n == 20 and set(np.unique(nds.labels)) <= {-1, 1}


def test_mallows_transitivity_weak_high():
    rng = np.random.default_rng(7)
    ds = hz.synthetic_mallows_dataset(1.0, 10, 500, rng)
    out = hz.empirical_transitivity(ds)
    assert out["weak_fraction"] >= 0.99


def test_write_payment_rows(tmp_path):
    path = tmp_path / "pay.csv"
    hz.write_payment_rows(path, "truth", np.array([1.0, np.nan, -0.5]), shift=1.0)
    lines = path.read_text().strip().splitlines()
    assert lines == ["0,truth,2", "2,truth,0.5"]
