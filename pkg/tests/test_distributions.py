import math

import numpy as np
import pytest
from scipy import integrate, special, stats

from rgg.distributions import (
    BracketingError,
    RGGParams,
    expected_l0,
    gn_cdf,
    gn_pdf,
    gn_variance,
    lp_norm_constraint_check,
    read_sample_csv,
    rgn_moments,
    rgn_pdf_mass,
    rgn_zero_mass,
    sample_gn,
    sample_rgn,
    sigma_gn,
    sigma_rgn,
    write_sample_csv,
)

GRID_P = (0.5, 1.0, 2.0)
GRID_MU = (-2.0, -1.0, 0.0, 1.0)


def test_params_validation():
    with pytest.raises(ValueError):
        RGGParams(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        RGGParams(2.0, 0.0, -1.0)
    with pytest.raises(ValueError):
        RGGParams(2.0, float("nan"), 1.0)


def test_gn_pdf_special_cases():
    assert gn_pdf(RGGParams(2, 0, 1), 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi),
                                                            rel=1e-12)
    assert gn_pdf(RGGParams(1, 0, 1), 0.0) == pytest.approx(0.5, rel=1e-12)


@pytest.mark.parametrize("p", [0.5, 1.0, 1.7, 2.0, 4.0])
def test_gn_pdf_normalization(p):
    params = RGGParams(p, 0.3, 1.2)
    total, _ = integrate.quad(lambda x: gn_pdf(params, x), -np.inf, np.inf, limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_gn_cdf_matches_normal_and_laplace():
    x = np.linspace(-6, 6, 201)
    # p=2 vs erf-based normal CDF
    np.testing.assert_allclose(gn_cdf(RGGParams(2, 0, 1), x), stats.norm.cdf(x),
                               atol=1e-10)
    # p=1 vs closed-form Laplace CDF
    lap = np.where(x < 0, 0.5 * np.exp(x), 1 - 0.5 * np.exp(-x))
    np.testing.assert_allclose(gn_cdf(RGGParams(1, 0, 1), x), lap, atol=1e-12)


def test_gn_cdf_at_location_is_half():
    for p in GRID_P:
        assert gn_cdf(RGGParams(p, 1.3, 0.7), 1.3) == pytest.approx(0.5, abs=1e-15)


def test_gn_cdf_example():
    assert gn_cdf(RGGParams(2, 0, 1), 1.0) == pytest.approx(0.8413447461, abs=1e-9)
    assert gn_cdf(RGGParams(1, 0, 1), 1.0) == pytest.approx(1 - np.exp(-1) / 2,
                                                            rel=1e-12)


def test_rgn_pdf_mass():
    density, atom = rgn_pdf_mass(RGGParams(2, 0, 1), 0.0)
    assert atom == pytest.approx(0.5, abs=1e-14)
    assert density == 0.0
    density, atom = rgn_pdf_mass(RGGParams(2, 0, 1), 1.0)
    assert atom == 0.0
    assert density == pytest.approx(stats.norm.pdf(1.0), rel=1e-12)
    _, atom = rgn_pdf_mass(RGGParams(1, -1, 1), 0.0)
    assert atom == pytest.approx(1 - np.exp(-1) / 2, rel=1e-10)
    density, _ = rgn_pdf_mass(RGGParams(2, 0, 1), -1.0)
    assert density == 0.0


def test_sample_gn_moments():
    x = sample_gn(RGGParams(2, 0, 1), 10**6, 42)
    assert abs(x.mean()) < 0.005
    assert x.var() == pytest.approx(1.0, abs=0.01)
    y = sample_gn(RGGParams(1, 0, 1), 10**6, 43)
    assert y.var() == pytest.approx(2.0, abs=0.02)
    z = sample_gn(RGGParams(2, 5, 1), 10**5, 44)
    assert z.mean() == pytest.approx(5.0, abs=0.02)


def test_sample_gn_deterministic():
    a = sample_gn(RGGParams(1.5, 0.2, 0.8), 100, 7)
    b = sample_gn(RGGParams(1.5, 0.2, 0.8), 100, 7)
    np.testing.assert_array_equal(a, b)


def test_sample_rgn_zero_fraction_and_mean():
    params = RGGParams(2, 0, 1)
    y = sample_rgn(params, 10**6, 5)
    assert np.mean(y == 0) == pytest.approx(0.5, abs=0.002)
    assert y.mean() == pytest.approx(1 / math.sqrt(2 * math.pi), abs=0.002)
    far = sample_rgn(RGGParams(1, -10, 1), 10**5, 6)
    assert np.mean(far == 0) >= 0.9999


def test_sampling_cdf_consistency_dkw():
    # DKW bound at confidence 0.999 for n = 1e5
    n = 10**5
    eps = math.sqrt(math.log(2 / 0.001) / (2 * n))
    rng = np.random.default_rng(101)
    for _ in range(20):
        p = rng.uniform(0.5, 3.0)
        mu = rng.uniform(-2, 2)
        sigma = rng.uniform(0.5, 2.0)
        params = RGGParams(p, mu, sigma)
        x = np.sort(sample_gn(params, n, rng))
        qs = mu + sigma * rng.uniform(-2, 2, size=10)
        emp = np.searchsorted(x, qs, side="right") / n
        theo = gn_cdf(params, qs)
        assert np.max(np.abs(emp - theo)) < eps, (p, mu, sigma)


def test_rgn_moments_special_cases():
    m = rgn_moments(RGGParams(2, 0, 1))
    assert m.mean == pytest.approx(0.3989423, abs=1e-6)
    assert m.second_moment == pytest.approx(0.5, rel=1e-12)
    assert m.variance == pytest.approx(0.3408451, abs=1e-6)
    m1 = rgn_moments(RGGParams(1, 0, 1))
    assert m1.mean == pytest.approx(0.5, rel=1e-12)
    assert m1.second_moment == pytest.approx(1.0, rel=1e-12)
    # rectification inactive when mu >> sigma
    assert rgn_moments(RGGParams(2, 10, 1)).mean == pytest.approx(10.0, abs=1e-6)


def test_rgn_moments_match_monte_carlo_grid():
    rng = np.random.default_rng(77)
    n = 10**6
    for p in GRID_P:
        for mu in GRID_MU:
            for sigma in (sigma_gn(p), 1.0):
                params = RGGParams(p, mu, sigma)
                y = sample_rgn(params, n, rng)
                m = rgn_moments(params)
                se_mean = y.std() / math.sqrt(n)
                assert abs(y.mean() - m.mean) < 4 * se_mean + 1e-12, params
                se_second = (y**2).std() / math.sqrt(n)
                assert abs((y**2).mean() - m.second_moment) < 4 * se_second + 1e-12


def test_rgn_moments_variance_nonnegative():
    rng = np.random.default_rng(5)
    for _ in range(200):
        params = RGGParams(rng.uniform(0.3, 4), rng.uniform(-3, 3),
                           rng.uniform(0.2, 3))
        m = rgn_moments(params)
        assert m.variance >= -1e-12
        assert m.variance == pytest.approx(m.second_moment - m.mean**2, abs=1e-12)


def test_zero_atom_matches_sampling():
    rng = np.random.default_rng(21)
    for p in GRID_P:
        for mu in GRID_MU:
            for sigma in (sigma_gn(p), 1.0):
                params = RGGParams(p, mu, sigma)
                atom = rgn_zero_mass(params)
                n = 10**5
                frac = np.mean(sample_rgn(params, n, rng) == 0)
                se = math.sqrt(max(atom * (1 - atom), 1e-12) / n)
                assert abs(frac - atom) < 4 * se + 1e-3, params


def test_sigma_gn_values():
    assert sigma_gn(2.0) == pytest.approx(1.0, abs=1e-10)
    assert sigma_gn(1.0) == pytest.approx(1 / math.sqrt(2), abs=1e-10)
    for p in (0.5, 0.8, 1.3, 3.0):
        assert gn_variance(RGGParams(p, 0, sigma_gn(p))) == pytest.approx(1.0,
                                                                          abs=1e-10)


def test_sigma_rgn_rectified_gaussian():
    expected = (0.5 - 1 / (2 * math.pi)) ** -0.5
    sigma, iters = sigma_rgn(2.0, 0.0, tol=1e-10, return_iterations=True)
    assert sigma == pytest.approx(expected, abs=1e-4)
    assert iters <= 40
    assert abs(rgn_moments(RGGParams(2, 0, sigma)).variance - 1.0) < 1e-9


def test_sigma_rgn_postcondition_various():
    for p, mu in [(1.0, -1.0), (0.5, 0.5), (2.0, 1.0)]:
        tol = 1e-10
        sigma = sigma_rgn(p, mu, tol=tol)
        assert abs(rgn_moments(RGGParams(p, mu, sigma)).variance - 1.0) < 10 * tol
    with pytest.raises(ValueError):
        sigma_rgn(2.0, 0.0, tol=-1.0)


def test_expected_l0():
    assert expected_l0(RGGParams(1, 0, 1), 100) == pytest.approx(50.0, rel=1e-12)
    assert expected_l0(RGGParams(2, 1, 1), 100) == pytest.approx(84.134, abs=1e-2)
    per_dim = expected_l0(RGGParams(1, -3, sigma_gn(1)), 1)
    assert per_dim == pytest.approx(0.5 * np.exp(-3 / sigma_gn(1)), rel=1e-10)
    assert per_dim == pytest.approx(0.00718, abs=1e-4)


def test_expected_l0_complement_identity():
    rng = np.random.default_rng(3)
    for _ in range(100):
        params = RGGParams(rng.uniform(0.3, 4), rng.uniform(-4, 4),
                           rng.uniform(0.2, 3))
        assert expected_l0(params, 1) + rgn_zero_mass(params) == pytest.approx(
            1.0, abs=1e-12)


def test_lp_norm_constraint():
    rng = np.random.default_rng(9)
    x = sample_gn(RGGParams(2, 0, 1), 10**5 * 32, rng).reshape(10**5, 32)
    assert lp_norm_constraint_check(RGGParams(2, 0, 1), x) == pytest.approx(32,
                                                                            abs=0.3)
    y = sample_gn(RGGParams(1, 0, 1), 10**5 * 10, rng).reshape(10**5, 10)
    assert lp_norm_constraint_check(RGGParams(1, 0, 1), y) == pytest.approx(10,
                                                                            abs=0.15)


def test_csv_roundtrip(tmp_path):
    data = np.random.default_rng(0).normal(size=(13, 4))
    path = tmp_path / "m.csv"
    write_sample_csv(path, data)
    header = path.read_text().splitlines()[0]
    assert header == "dim_0,dim_1,dim_2,dim_3"
    back = read_sample_csv(path)
    np.testing.assert_array_equal(back, data)
