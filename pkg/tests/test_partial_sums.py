import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats

from dlevy import partial_sums as ps
from dlevy import prm
from dlevy.errors import AlphaOne, InvalidParams, MismatchedTargets
from dlevy.rv import RVLaw, StableParams, centering_mu, normalizing_a_n, sample_stable_cms
from dlevy.seeds import SeedSpec
from dlevy.spectral import SpectralSampler, c_y_alpha
from dlevy.verify import cross_construction_check, ks_two_sample

import oracles

panels = st.tuples(st.integers(1, 8), st.integers(1, 5)).flatmap(
    lambda nm: arrays(np.float64, (nm[0], nm[1] + 1), elements=st.floats(-100, 100, allow_subnormal=False)))


# --------------------------------------------------------------------- partial sums

def test_first_row_zero_and_single_path():
    X = np.zeros((5, 4))
    X[0] = [1.0, -2.0, 3.0, 0.5]
    sh = ps.partial_sum_sheet(ps.PathPanel(X), 4.0)
    assert np.all(sh.values[0] == 0.0)
    for k in range(1, 6):
        assert np.array_equal(sh.values[k], X[0] / 4.0)


@given(panels, st.floats(0.5, 1e3))
@settings(deadline=None)
def test_prefix_sums_match_brute_force(X, a_n):
    sh = ps.partial_sum_sheet(ps.PathPanel(X), a_n)
    assert np.allclose(sh.values, oracles.brute_partial_sums(X, a_n), rtol=1e-12, atol=1e-9)


@given(panels, st.floats(0.5, 1e3))
@settings(deadline=None)
def test_doubling_a_n_halves_values(X, a_n):
    P = ps.PathPanel(X)
    assert np.array_equal(ps.partial_sum_sheet(P, 2 * a_n).values, ps.partial_sum_sheet(P, a_n).values / 2)


@given(panels, st.floats(0.5, 10), st.floats(0.0, 50))
@settings(deadline=None)
def test_truncation_identity(X, a_n, eps):
    P = ps.PathPanel(X)
    full = ps.partial_sum_sheet(P, a_n).values
    big = ps.truncated_sum_sheet(P, a_n, eps).values
    small = ps.small_jump_sheet(P, a_n, eps).values
    assert np.allclose(full, big + small, rtol=1e-12, atol=1e-12)


def test_truncation_extremes():
    X = np.random.default_rng(0).standard_normal((20, 5))
    P = ps.PathPanel(X)
    assert np.array_equal(ps.truncated_sum_sheet(P, 2.0, 0.0).values, ps.partial_sum_sheet(P, 2.0).values)
    assert np.all(ps.truncated_sum_sheet(P, 2.0, 1e9).values == 0.0)


def test_centering_path():
    X = np.ones((4, 3))
    sh = ps.partial_sum_sheet(ps.PathPanel(X), 1.0, mu_path=np.ones(3))
    assert np.all(sh.values == 0.0) and sh.centered


def test_panel_validation():
    with pytest.raises(InvalidParams):
        ps.PathPanel(np.zeros((3, 1)))
    with pytest.raises(InvalidParams):
        ps.PathPanel(np.array([[0.0, np.nan]]))
    with pytest.raises(InvalidParams):
        ps.partial_sum_sheet(ps.PathPanel(np.zeros((2, 2))), 0.0)


# --------------------------------------------------------------------- sources

def test_product_source_truncated_mean_closed_form():
    src = ps.ProductSource(RVLaw.two_sided_pareto(1.5, 0.8), SpectralSampler("signed_constant", 3, p=0.9))
    bound = 7.0
    X = src.draw(SeedSpec(1), 10**6)
    norms = np.max(np.abs(X), axis=1)
    mc = np.where((norms <= bound)[:, None], X, 0.0)
    exact = src.truncated_mean(bound)
    se = mc.std(axis=0) / 1000
    assert np.all(np.abs(mc.mean(axis=0) - exact) < 3 * se)


def test_example1_source_rows():
    law = RVLaw.pareto(1.5)
    src = ps.Example1Source(law, 10)
    X = src.draw(SeedSpec(2), 3)
    assert X.shape == (3, 11) and np.all(X[:, 0] == 0.0)


# --------------------------------------------------------------------- negligibility

def test_negligibility_delta_huge():
    src = ps.ProductSource(RVLaw.pareto(0.5), SpectralSampler("constant_one", 4))
    res = ps.negligibility_stat(src, 100, 0.1, 1e12, 1.0, 20, SeedSpec(3))
    assert res.estimate == 0.0


def test_negligibility_alpha_half_decreasing_and_bounded():
    src = ps.ProductSource(RVLaw.pareto(0.5), SpectralSampler("geom_bm", 8))
    est = []
    for eps in (0.4, 0.2, 0.1):
        res = ps.negligibility_stat(src, 400, eps, 0.5, 1.0, 200, SeedSpec(4))
        assert res.estimate <= res.markov_bound + 3 * res.se
        est.append(res.estimate)
    assert est[0] >= est[1] >= est[2]


def test_negligibility_alpha_above_one():
    src = ps.ProductSource(RVLaw.two_sided_pareto(1.5, 0.5), SpectralSampler("constant_one", 4))
    est = [ps.negligibility_stat(src, 400, eps, 1.0, 1.0, 200, SeedSpec(5)).estimate for eps in (0.2, 0.05, 0.0125)]
    assert est[0] > est[1] > est[2]
    # documented diagnostic default: eps = 0.05, n = 400, delta = 2
    res = ps.negligibility_stat(src, 400, 0.05, 2.0, 1.0, 200, SeedSpec(5))
    assert res.per_k.shape == (400,) and res.estimate < 0.05


# --------------------------------------------------------------------- double sums

def test_double_sum_zero_and_corner():
    law = RVLaw.pareto(1.5)
    mu = centering_mu(law)
    sh = ps.levy_sheet_double_sum(law, 3, 4, 0, xi=np.full((3, 4), mu))
    assert np.all(sh.values == 0.0)
    xi = np.array([[5.0]])
    sh = ps.levy_sheet_double_sum(law, 1, 1, 0, xi=xi)
    assert sh.values[1, 1] == pytest.approx((5.0 - mu) / (normalizing_a_n(law, 1) ** 2))
    assert np.all(sh.values[0] == 0) and np.all(sh.values[:, 0] == 0)


def test_double_sum_brute_force():
    law = RVLaw.frechet(1.5)
    xi = np.random.default_rng(1).random((5, 4)) * 10
    sh = ps.levy_sheet_double_sum(law, 5, 4, 0, a_n=2.0, a_m=3.0, xi=xi)
    mu = centering_mu(law)
    for k in range(6):
        for l in range(5):
            direct = sum(xi[i, j] - mu for i in range(k) for j in range(l)) / 6.0
            assert sh.values[k, l] == pytest.approx(direct, abs=1e-12)


def test_double_sum_row_block_additivity():
    law = RVLaw.two_sided_pareto(1.5, 0.5)
    small = ps.levy_sheet_double_sum(law, 10, 7, SeedSpec(6), a_n=3.0, a_m=2.0)
    big = ps.levy_sheet_double_sum(law, 20, 7, SeedSpec(6), a_n=3.0, a_m=2.0)
    assert np.array_equal(big.values[:11], small.values)


def test_double_sum_alpha_one_rejected():
    with pytest.raises(AlphaOne):
        ps.levy_sheet_double_sum(RVLaw.pareto(1.0), 3, 3, 0)


def test_example1_sheets():
    sh = ps.example1_sheet(RVLaw.pareto(0.5), 400, 250, SeedSpec(7))
    assert sh.values.shape == (401, 251)
    assert np.all(np.diff(sh.values, axis=1) >= 0)
    sh = ps.example1_sheet(RVLaw.frechet(1.5), 400, 250, SeedSpec(7))
    assert np.all(sh.values[0] == 0)


def test_double_sum_corner_matches_sheet():
    law = RVLaw.burr(0.75, 2.0)
    seed = SeedSpec(8)
    corner = ps.double_sum_corner(law, 12, 9, seed, 3)
    for r in range(3):
        sh = ps.levy_sheet_double_sum(law, 12, 9, seed.replicate(r))
        assert corner[r] == pytest.approx(sh.values[-1, -1], rel=1e-10)


def test_double_sum_marginal_vs_cms():
    law = RVLaw.two_sided_pareto(1.5, 0.5)
    x = ps.double_sum_corner(law, 250, 250, SeedSpec(9), 2000)
    power, linear = ps.double_sum_target(law)
    oracle = sample_stable_cms(power, SeedSpec(10), 20000)
    assert cross_construction_check(x, oracle, power, power).D < 0.05
    assert ks_two_sample(x, sample_stable_cms(linear, SeedSpec(11), 20000)).D > 0.05


def test_double_sum_target_stable_law_factor():
    # for stable summands the double sum is exactly stable: check the C factor
    law = RVLaw.stable_law(1.5, 1.0, 0.0)
    x = ps.double_sum_corner(law, 20, 20, SeedSpec(12), 3000)
    power, _ = ps.double_sum_target(law)
    oracle = sample_stable_cms(power, SeedSpec(13), 20000)
    assert ks_two_sample(x, oracle).D < 0.035


# --------------------------------------------------------------------- example 2

def test_example2_sheet_shape():
    sh = ps.example2_sheet(1.5, 10, 8, 6, SeedSpec(14), c_w=1.2)
    assert sh.values.shape == (9, 7) and np.all(sh.values[0] == 0)
    with pytest.raises(InvalidParams):
        ps.example2_sheet(1.5, 0, 8, 6, 0, c_w=1.0)


def test_example2_marginal_vs_cms():
    alpha, K, n, m = 1.5, 500, 200, 100
    c_w, _ = c_y_alpha("brownian", alpha, 20000, SeedSpec(15), m)
    x = ps.example2_corner(alpha, K, n, SeedSpec(16), 2000, c_w)
    power, _ = ps.example2_target(alpha, c_w)
    oracle = sample_stable_cms(power, SeedSpec(17), 20000)
    assert ks_two_sample(x, oracle).D < 0.06


def test_example2_vs_prm_cross_construction():
    alpha, m = 1.5, 16
    c_w, _ = c_y_alpha("brownian", alpha, 50000, SeedSpec(18), m)
    a = ps.example2_corner(alpha, 500, 200, SeedSpec(19), 2000, c_w)
    spec = SpectralSampler("size_biased_bm", m, alpha=alpha)
    b = prm.marginal_samples(1.0, 1.0, 0.01, 1.0, alpha, spec, SeedSpec(20), 2000)
    target, _ = ps.example2_target(alpha, c_w)
    assert cross_construction_check(a, b, target, target).D < 0.06
    with pytest.raises(MismatchedTargets):
        cross_construction_check(a, b, target, StableParams(0.5, 1.0))
