import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from bppsim import dominance as dom
from bppsim import uniqueness as un

finite_reals = hst.floats(-5, 5, allow_nan=False)


def test_bpp_table_values():
    u = un.bpp_table()
    assert u[1, 1, 0] == 2.0   # s_i=s_j=1, s_k=-1
    assert u[1, 1, 1] == 0.0
    assert u[0, 1, 0] == -2.0


@given(hst.lists(finite_reals, min_size=8, max_size=8))
@settings(max_examples=60, deadline=None)
def test_decompose_reconstruct_roundtrip(vals):
    u = un.payment_table(vals)
    dec = un.decompose(u)
    assert np.allclose(dec.reconstruct(), u, atol=1e-12)


def test_is_affine_bpp_accepts_affine_transforms():
    rng = np.random.default_rng(0)
    base = un.bpp_table()
    for _ in range(50):
        lam = rng.random() * 3 + 0.01
        mu = rng.standard_normal((2, 2))
        u = lam * base + mu[None, :, :]
        out = un.is_affine_bpp(u)
        assert out is not None
        got_lam, got_mu = out
        assert abs(got_lam - lam) < 1e-9
        assert np.allclose(got_mu, mu, atol=1e-9)


def test_is_affine_bpp_rejects():
    base = un.bpp_table()
    assert un.is_affine_bpp(-base) is None                    # negative scale
    assert un.is_affine_bpp(np.zeros((2, 2, 2))) is None      # lambda = 0
    skew = base.copy()
    skew[1, 1, 0] += 0.5                                      # breaks antisymmetry
    assert un.is_affine_bpp(skew) is None
    diag = base.copy()
    diag[1, 1, 1] += 1.0
    diag[0, 1, 1] -= 1.0                                      # D on the diagonal
    assert un.is_affine_bpp(diag) is None


def test_witness_p1_margins():
    for delta in (0.1, 0.25, 0.5):
        rep = dom.is_uniformly_dominant(un.witness_p1(delta))
        assert abs(rep.delta_plus - 2 * delta) < 1e-12
        assert abs(rep.delta_minus - 2 * delta) < 1e-12
    with pytest.raises(ValueError):
        un.witness_p1(0.6)


def test_witness_p2_margins():
    for eps in (0.1, 0.5, 1.0):
        rep = dom.is_uniformly_dominant(un.witness_p2(eps))
        assert abs(rep.delta_plus - eps / 2) < 1e-12
        assert abs(rep.delta_minus - eps / 2) < 1e-12
        mirror = dom.is_uniformly_dominant(un.witness_p2_mirror(eps))
        assert abs(mirror.delta_plus - eps / 2) < 1e-12


def test_truthfulness_audit_bpp_strict():
    rng = np.random.default_rng(1)
    base = un.bpp_table()
    for _ in range(20):
        P = un.random_dominant_triple(rng)
        assert un.truthfulness_audit(base, P) == "strict"
        # adding any mu(s_j, s_k) never changes the verdict
        mu = rng.standard_normal((2, 2))
        assert un.truthfulness_audit(base + mu[None], P) == "strict"


def test_truthfulness_audit_negated_bpp_violated():
    P = un.witness_p1(0.25)
    assert un.truthfulness_audit(-un.bpp_table(), P) == "violated"
    assert un.truthfulness_audit(np.zeros((2, 2, 2)), P) == "weak"


def test_truthfulness_audit_requires_dominance():
    iid = dom.TripleDistribution(np.full((2, 2, 2), 0.125))
    with pytest.raises(ValueError):
        un.truthfulness_audit(un.bpp_table(), iid)


def test_uniqueness_search_certificate():
    verdict, detail = un.uniqueness_search(2.5 * un.bpp_table() + 0.7)
    assert verdict == "certificate"
    lam, mu = detail
    assert abs(lam - 2.5) < 1e-9
    assert np.allclose(mu, 0.7, atol=1e-9)


def test_uniqueness_search_refutes_non_affine():
    rng = np.random.default_rng(2)
    for _ in range(20):
        u = rng.standard_normal((2, 2, 2)) * 2
        if un.is_affine_bpp(u) is not None:
            continue
        verdict, P = un.uniqueness_search(u, n_random=50, rng=np.random.default_rng(0))
        assert verdict == "counterexample"
        assert un.truthfulness_audit(u, P) != "strict"


def test_payment_table_validation():
    with pytest.raises(ValueError):
        un.payment_table([1.0] * 7)
    with pytest.raises(ValueError):
        un.payment_table([np.inf] + [0.0] * 7)
