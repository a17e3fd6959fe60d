"""Copulas, bivariate models, and the seeded sampler."""

import math

import numpy as np
import pytest
from scipy.stats import kendalltau

import _oracles as orc
from rvar import (
    BivariateModel,
    Comonotone,
    Countermonotone,
    DomainError,
    Exponential,
    Gumbel,
    Independence,
    Weibull,
    copula_cdf,
    sample,
)

UV_GRID = [(u, v) for u in (0.0, 0.2, 0.5, 0.8, 1.0) for v in (0.0, 0.3, 0.7, 1.0)]


@pytest.mark.parametrize("u,v", UV_GRID)
def test_copula_cdf_matches_reference_forms(u, v):
    assert copula_cdf(Independence(), u, v) == pytest.approx(orc.pi_cdf(u, v), abs=1e-15)
    assert copula_cdf(Comonotone(), u, v) == pytest.approx(orc.m_cdf(u, v), abs=1e-15)
    assert copula_cdf(Countermonotone(), u, v) == pytest.approx(orc.w_cdf(u, v), abs=1e-15)
    assert copula_cdf(Gumbel(1.5), u, v) == pytest.approx(
        orc.gumbel_cdf(u, v, 1.5), abs=1e-15)


def test_gumbel_theta_one_is_independence():
    for u, v in [(0.3, 0.8), (0.05, 0.95), (0.5, 0.5)]:
        assert copula_cdf(Gumbel(1.0), u, v) == pytest.approx(u * v, rel=1e-14)


def test_gumbel_spot_value():
    # C(0.5, 0.5) with theta = 1.5: exp(-(2 (ln 2)^1.5)^(2/3))
    want = math.exp(-((2.0 * math.log(2.0) ** 1.5) ** (1.0 / 1.5)))
    assert copula_cdf(Gumbel(1.5), 0.5, 0.5) == pytest.approx(want, rel=1e-15)
    assert want == pytest.approx(0.33277038426286515, rel=1e-14)


def test_copula_validation():
    with pytest.raises(DomainError):
        Gumbel(0.8)
    with pytest.raises(DomainError):
        copula_cdf(Independence(), -0.1, 0.5)
    with pytest.raises(DomainError):
        copula_cdf(Independence(), 0.5, 1.2)


def test_frechet_ordering_and_survival_positivity():
    cops = [Countermonotone(), Independence(), Gumbel(1.5), Gumbel(4.0), Comonotone()]
    for u in np.linspace(0.05, 0.95, 7):
        for v in np.linspace(0.05, 0.95, 7):
            vals = [copula_cdf(c, u, v) for c in cops]
            assert vals == sorted(vals)
            for c in cops:
                assert 1.0 - u - v + copula_cdf(c, u, v) >= -1e-15


def test_bivariate_model_joint_cdf_and_survival():
    b = BivariateModel(Weibull(2.0, 50.0), Weibull(2.0, 150.0), Gumbel(1.5))
    x, y = 60.0, 200.0
    u, v = b.margin1.cdf(x), b.margin2.cdf(y)
    assert b.joint_cdf(x, y) == pytest.approx(orc.gumbel_cdf(u, v, 1.5), rel=1e-14)
    assert b.joint_survival(x, y) == pytest.approx(
        1.0 - u - v + orc.gumbel_cdf(u, v, 1.5), rel=1e-12)


def test_sampler_is_seed_deterministic():
    b = BivariateModel(Exponential(1.0), Exponential(2.0), Gumbel(1.5))
    s1 = sample(b, 100, seed=7).data
    s2 = b.sample(100, seed=7).data
    s3 = sample(b, 100, seed=8).data
    np.testing.assert_array_equal(s1, s2)
    assert not np.array_equal(s1, s3)
    assert s1.shape == (100, 2)


def test_sampler_margins_are_correct():
    b = BivariateModel(Exponential(1.0), Weibull(2.0, 50.0), Gumbel(2.0))
    s = sample(b, 200_000, seed=11).data
    # transformed coordinates must be standard uniform
    for col, margin in [(0, b.margin1), (1, b.margin2)]:
        u = np.array([margin.cdf(x) for x in s[:, col]])
        assert abs(u.mean() - 0.5) < 0.004
        assert abs(u.var() - 1.0 / 12.0) < 0.002


def test_comonotone_and_countermonotone_ranks():
    b = BivariateModel(Exponential(1.0), Exponential(2.0), Comonotone())
    s = sample(b, 1000, seed=3).data
    r1 = np.argsort(np.argsort(s[:, 0]))
    r2 = np.argsort(np.argsort(s[:, 1]))
    np.testing.assert_array_equal(r1, r2)
    b = BivariateModel(Exponential(1.0), Exponential(2.0), Countermonotone())
    s = sample(b, 1000, seed=3).data
    r1 = np.argsort(np.argsort(s[:, 0]))
    r2 = np.argsort(np.argsort(s[:, 1]))
    np.testing.assert_array_equal(r1, len(r1) - 1 - r2)


@pytest.mark.parametrize("theta", [1.5, 3.0])
def test_gumbel_sampler_kendall_tau(theta):
    b = BivariateModel(Exponential(1.0), Exponential(1.0), Gumbel(theta))
    s = sample(b, 200_000, seed=5).data
    tau = kendalltau(s[:, 0], s[:, 1]).statistic
    assert tau == pytest.approx(1.0 - 1.0 / theta, abs=0.01)


def test_gumbel_sampler_matches_copula_cdf():
    theta = 1.5
    b = BivariateModel(Exponential(1.0), Exponential(2.0), Gumbel(theta))
    s = sample(b, 400_000, seed=13).data
    u = 1.0 - np.exp(-s[:, 0])
    v = 1.0 - np.exp(-2.0 * s[:, 1])
    for uu, vv in [(0.3, 0.4), (0.7, 0.2), (0.9, 0.9), (0.5, 0.8)]:
        emp = np.mean((u <= uu) & (v <= vv))
        want = orc.gumbel_cdf(uu, vv, theta)
        se = math.sqrt(want * (1.0 - want) / len(u))
        assert abs(emp - want) <= 4.0 * se + 1e-12


def test_sample_size_validation():
    b = BivariateModel(Exponential(1.0), Exponential(2.0), Independence())
    with pytest.raises(DomainError):
        sample(b, 0, seed=1)
