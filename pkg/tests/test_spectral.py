import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from dlevy import spectral as sp
from dlevy.errors import DataError, InvalidParams
from dlevy.rv import StableParams, c_alpha_inv, sample_stable_cms
from dlevy.seeds import SeedSpec


def test_constant_kinds():
    Z = sp.sample_spectral_array(sp.SpectralSampler("constant_one", 6), np.random.default_rng(0), 5)
    assert np.all(Z == 1.0)
    Z = sp.sample_spectral_array(sp.SpectralSampler("signed_constant", 6, p=1.0), np.random.default_rng(0), 50)
    assert np.all(Z == 1.0)
    Z = sp.sample_spectral_array(sp.SpectralSampler("signed_constant", 6, p=0.3), np.random.default_rng(0), 10**4)
    assert np.all(np.abs(Z) == 1.0) and np.all(Z == Z[:, :1])
    assert abs(np.mean(Z[:, 0] > 0) - 0.3) < 3 * math.sqrt(0.21 / 10**4)


@pytest.mark.parametrize("kind", ["constant_one", "signed_constant", "geom_bm", "size_biased_bm"])
def test_unit_sup_norm(kind):
    s = sp.SpectralSampler(kind, 20, p=0.4, pool=5000)
    Z = sp.sample_spectral_array(s, np.random.default_rng(1), 500)
    assert np.all(np.max(np.abs(Z), axis=1) == 1.0)
    d = sp.assumption_diagnostics(Z)
    assert d["unit_norm_ok"]
    if kind != "size_biased_bm":
        assert d["assumption_a_ok"]


def test_geom_bm_strictly_positive_and_continuous():
    Z = sp.sample_spectral_array(sp.SpectralSampler("geom_bm", 30), np.random.default_rng(2), 200)
    assert np.all(Z > 0)
    d = sp.assumption_diagnostics(Z)
    # grid artefact: every sample changes value at every grid point
    assert not d["assumption_b_ok"]


def test_user_paths_normalized_and_zero_column_error():
    P = np.array([[0.0, 2.0, -4.0], [1.0, 1.0, 0.5]])
    s = sp.SpectralSampler("user_paths", 2, paths=P)
    assert np.array_equal(s.paths, np.array([[0.0, 0.5, -1.0], [1.0, 1.0, 0.5]]))
    with pytest.raises(DataError, match="site_b"):
        sp.normalize_panel(np.array([[1.0, 2.0], [0.0, 0.0]]), names=["site_a", "site_b"])
    with pytest.raises(InvalidParams):
        sp.SpectralSampler("user_paths", 3, paths=P)


def test_sampler_validation():
    with pytest.raises(InvalidParams, match="choose from"):
        sp.SpectralSampler("gaussian", 4)
    with pytest.raises(InvalidParams):
        sp.SpectralSampler("constant_one", 0)
    with pytest.raises(InvalidParams):
        sp.SpectralSampler("signed_constant", 3, p=1.5)


def test_phi_psi_exact_kinds():
    pp = sp.phi_psi(sp.SpectralSampler("constant_one", 4), 0, 10)
    assert pp.exact and np.all(pp.phi == 1) and np.all(pp.psi == 1)
    pp = sp.phi_psi(sp.SpectralSampler("signed_constant", 4, p=0.8), 0, 10)
    assert np.allclose(pp.phi, 0.6) and np.all(pp.psi == 1)


def test_phi_psi_geom_bm_self_consistent():
    s = sp.SpectralSampler("geom_bm", 8)
    small = sp.phi_psi(s, SeedSpec(1), 10**4)
    big = sp.phi_psi(s, SeedSpec(2), 10**5)
    se = np.sqrt(small.phi_se ** 2 + big.phi_se ** 2)
    assert np.all(np.abs(small.phi - big.phi) <= 3.5 * se)
    se = np.sqrt(small.psi_se ** 2 + big.psi_se ** 2)
    assert np.all(np.abs(small.psi - big.psi) <= 3.5 * se)


def test_tail_constants_constant_kinds():
    cp, cm = sp.tail_constants(sp.SpectralSampler("signed_constant", 3, p=0.25), 1.5, c=2.0)
    assert np.allclose(cp, 0.5) and np.allclose(cm, 1.5)


# --------------------------------------------------------------------- Brownian paths

def test_brownian_paths():
    W = sp.brownian_paths(np.random.default_rng(3), 10**4, 16)
    assert np.all(W[:, 0] == 0.0)
    assert abs(W[:, -1].var() - 1.0) < 0.03
    inc1 = W[:, 8] - W[:, 0]
    inc2 = W[:, 16] - W[:, 8]
    assert abs(np.corrcoef(inc1, inc2)[0, 1]) < 0.03


def test_abs_gaussian_moment():
    for a in (0.5, 1.0, 1.5, 2.0):
        x = np.random.default_rng(0).standard_normal(10**6)
        assert sp.abs_gaussian_moment(a) == pytest.approx(np.mean(np.abs(x) ** a), rel=0.01)
    assert sp.abs_gaussian_moment(2.0) == pytest.approx(1.0)
    assert sp.abs_gaussian_moment(1.0) == pytest.approx(math.sqrt(2 / math.pi))


# --------------------------------------------------------------------- LePage

def test_lepage_constant_base():
    X = sp.lepage_panel(0.7, 25, "one", 5, SeedSpec(4), 3)
    signs, g = sp.lepage_terms(0.7, 25, SeedSpec(4), 3)
    assert np.all(X == X[:, :1])
    assert np.allclose(X[:, 0], (signs * g).sum(axis=1), rtol=1e-13)


def test_lepage_gamma_ordering():
    _, g = sp.lepage_terms(1.5, 50, SeedSpec(1), 4)
    assert np.all(np.diff(g, axis=1) < 0)


def test_lepage_single_term():
    seed = SeedSpec(6)
    x = sp.lepage_path(1.2, 1, "brownian", 10, seed)
    _, g = sp.lepage_terms(1.2, 1, seed, 1)
    Y = sp.brownian_paths(seed.generator(5), 1, 10)[0]  # LEPAGE_BASE sub-stream
    assert np.allclose(np.abs(x.values), g[0, 0] * np.abs(Y), rtol=1e-13)


def test_lepage_brownian_marginal_is_stable():
    alpha, K = 1.5, 1000
    x = sp.lepage_endpoint_brownian(alpha, K, SeedSpec(12), 5000)
    sigma = (c_alpha_inv(alpha) * sp.abs_gaussian_moment(alpha)) ** (1 / alpha)
    oracle = sample_stable_cms(StableParams(alpha, sigma, 0.0, 0.0), SeedSpec(13), 20000)
    assert stats.ks_2samp(x, oracle).statistic < 0.05


def test_lepage_endpoint_matches_panel_law():
    # the exact-endpoint shortcut and full paths describe the same law
    alpha, K = 1.5, 200
    a = sp.lepage_endpoint_brownian(alpha, K, SeedSpec(1), 3000)
    b = sp.lepage_panel(alpha, K, "brownian", 4, SeedSpec(2), 3000)[:, -1]
    assert stats.ks_2samp(a, b).pvalue > 0.01


def test_lepage_truncation_monotone():
    alpha = 0.6
    means = []
    for K in (5, 10, 20, 40):
        d = [np.max(np.abs(sp.lepage_path(alpha, 2 * K, "brownian", 8, SeedSpec(r, 9)).values
                           - sp.lepage_path(alpha, K, "brownian", 8, SeedSpec(r, 9)).values))
             for r in range(300)]
        means.append(np.mean(d))
    assert all(a > b for a, b in zip(means, means[1:]))


def test_lepage_prefix_in_k():
    a = sp.lepage_path(1.5, 10, "brownian", 6, SeedSpec(3)).values
    b = sp.lepage_path(1.5, 20, "brownian", 6, SeedSpec(3)).values
    signs, g = sp.lepage_terms(1.5, 20, SeedSpec(3), 1)
    Y = sp.brownian_paths(SeedSpec(3).generator(5), 20, 6)
    assert np.allclose(b - a, (signs[0, 10:] * g[0, 10:]) @ Y[10:], atol=1e-12)


# --------------------------------------------------------------------- C_{Y, alpha}

def test_c_y_alpha():
    assert sp.c_y_alpha("one", 1.5, 10, 0) == (1.0, 0.0)
    for a in (0.5, 1.5):
        est, se = sp.c_y_alpha("brownian", a, 5000, SeedSpec(1), m=500)
        assert est <= 8 * sp.abs_gaussian_moment(a) + 3 * se
        assert est >= sp.abs_gaussian_moment(a) - 3 * se  # sup dominates the endpoint


def test_c_y_alpha_se_rate():
    _, se1 = sp.c_y_alpha("brownian", 1.5, 4000, SeedSpec(2), m=200)
    _, se2 = sp.c_y_alpha("brownian", 1.5, 8000, SeedSpec(3), m=200)
    assert se1 / se2 == pytest.approx(math.sqrt(2), rel=0.1)


@given(st.integers(1, 30), st.integers(0, 1000))
@settings(max_examples=25, deadline=None)
def test_geom_bm_norm_property(m, seed):
    Z = sp.sample_spectral_array(sp.SpectralSampler("geom_bm", m), np.random.default_rng(seed), 3)
    assert np.all(np.max(np.abs(Z), axis=1) == 1.0)
