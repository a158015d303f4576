import itertools

import numpy as np
import pytest

from rgg.distributions import RGGParams, rgn_moments, rgn_zero_mass, sample_rgn, sigma_gn
from rgg.slicing import (
    ProjectionSet,
    draw_target,
    eig_projections,
    mixed_projections,
    rdmreg_loss,
    sample_sphere_projections,
    sliced_stat_profile,
    sliced_w2_1d,
)

# Recorded 99th percentile of the i.i.d. null (B=4096, D=16, N=1024,
# 100 seeds) for the targets used below.
NULL_P99_GAUSS = 0.0009
NULL_P99_LAPLACE_SGN = 0.0017


def brute_force_w2(z, y):
    """Exact 1-D W2^2 between empirical measures by optimal assignment."""
    z, y = np.asarray(z, float), np.asarray(y, float)
    best = np.inf
    for perm in itertools.permutations(range(len(y))):
        cost = np.mean((z - y[list(perm)]) ** 2)
        best = min(best, cost)
    return best


def test_sphere_projection_unit_norm():
    ps = sample_sphere_projections(50, 7, 0)
    np.testing.assert_allclose(np.linalg.norm(ps.directions, axis=1), 1.0,
                               atol=1e-12)


def test_sphere_projection_isotropy():
    ps = sample_sphere_projections(10**5, 8, 1)
    means = ps.directions.mean(axis=0)
    assert np.all(np.abs(means) < 0.01)
    second = (ps.directions**2).mean(axis=0)
    np.testing.assert_allclose(second, 1 / 8, atol=0.003)


def test_projection_set_validation():
    with pytest.raises(ValueError):
        ProjectionSet(np.array([[1.0, 1.0]]))
    with pytest.raises(ValueError):
        sample_sphere_projections(0, 4, 0)


def test_eig_projections_recovers_axis():
    rng = np.random.default_rng(2)
    z = rng.normal(size=(10**4, 2)) * np.array([2.0, 1.0])
    ps = eig_projections(z, 2, which="top")
    angle = np.arccos(min(1.0, abs(ps.directions[0] @ np.array([1.0, 0.0]))))
    assert angle < 0.05
    # orthonormality
    gram = ps.directions @ ps.directions.T
    np.testing.assert_allclose(gram, np.eye(2), atol=1e-8)


def test_eig_projections_ordering_and_errors():
    rng = np.random.default_rng(3)
    z = rng.normal(size=(10**4, 4)) * np.array([3.0, 2.0, 1.0, 0.5])
    top = eig_projections(z, 1, which="top").directions[0]
    bottom = eig_projections(z, 1, which="bottom").directions[0]
    assert abs(top[0]) > 0.9
    assert abs(bottom[3]) > 0.9
    with pytest.raises(ValueError):
        eig_projections(z[:1], 1)
    with pytest.raises(ValueError):
        eig_projections(z, 5)


def test_isotropic_eigenvalue_spread():
    rng = np.random.default_rng(4)
    z = rng.normal(size=(10**4, 4))
    evals = np.linalg.eigvalsh(np.cov(z, rowvar=False))
    assert evals.max() / evals.min() < 1.1


def test_sliced_w2_basic():
    assert sliced_w2_1d([1.0, -2.0, 0.5], [1.0, -2.0, 0.5]) == 0.0
    assert sliced_w2_1d([0, 1], [1, 0]) == 0.0
    assert sliced_w2_1d([0, 2], [1, 3]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        sliced_w2_1d([0, 1], [0, 1, 2])


def test_sliced_w2_symmetry():
    rng = np.random.default_rng(6)
    for _ in range(20):
        z, y = rng.normal(size=12), rng.normal(size=12)
        assert sliced_w2_1d(z, y) == pytest.approx(sliced_w2_1d(y, z), rel=1e-14)


def test_sliced_w2_brute_force_equivalence():
    rng = np.random.default_rng(5)
    for b in range(1, 9):
        z, y = rng.normal(size=b), rng.normal(size=b)
        assert sliced_w2_1d(z, y) == pytest.approx(brute_force_w2(z, y), abs=1e-12)


def test_rdmreg_loss_invariance_zero_for_equal_views():
    rng = np.random.default_rng(8)
    z = rng.normal(size=(64, 8))
    proj = sample_sphere_projections(32, 8, 9)
    out = rdmreg_loss(z, z, RGGParams(2, 0, 1), proj, seed=10)
    assert out.invariance == 0.0
    assert out.rdmreg_view1 == pytest.approx(out.rdmreg_view2)
    assert out.total == pytest.approx(
        out.lambda_dist * (out.rdmreg_view1 + out.rdmreg_view2))


def test_rdmreg_loss_shape_mismatch():
    proj = sample_sphere_projections(8, 4, 0)
    with pytest.raises(ValueError):
        rdmreg_loss(np.zeros((4, 4)), np.zeros((5, 4)), RGGParams(2, 0, 1), proj)


def test_rdmreg_null_below_recorded_threshold():
    target = RGGParams(2, 0, 1)
    for seed in (1, 2, 3):
        rng = np.random.default_rng(seed)
        z = draw_target(target, 4096, 16, rng)
        zprime = draw_target(target, 4096, 16, rng)
        proj = sample_sphere_projections(1024, 16, rng)
        out = rdmreg_loss(z, zprime, target, proj, seed=rng)
        assert out.rdmreg_view1 <= NULL_P99_GAUSS
        assert out.rdmreg_view1 <= 0.05


def test_rdmreg_default_weights():
    proj = sample_sphere_projections(4, 2, 0)
    out = rdmreg_loss(np.zeros((4, 2)), np.zeros((4, 2)), RGGParams(2, 0, 1), proj)
    assert out.lambda_sim == 25.0
    assert out.lambda_dist == 125.0


def test_rdmreg_row_permutation_invariance():
    rng = np.random.default_rng(12)
    z = rng.normal(size=(32, 4))
    zprime = rng.normal(size=(32, 4))
    proj = sample_sphere_projections(64, 4, 13)
    y = draw_target(RGGParams(2, 0, 1), 32, 4, 14)
    a = rdmreg_loss(z, zprime, RGGParams(2, 0, 1), proj, target_sample=y)
    perm = rng.permutation(32)
    b = rdmreg_loss(z[perm], zprime[perm], RGGParams(2, 0, 1), proj,
                    target_sample=y)
    assert a.total == pytest.approx(b.total, rel=1e-12)


def test_frozen_target_deterministic():
    rng = np.random.default_rng(15)
    z = rng.normal(size=(16, 3))
    proj = sample_sphere_projections(8, 3, 16)
    y = draw_target(RGGParams(1, 0, 1), 16, 3, 17)
    a = rdmreg_loss(z, z, RGGParams(1, 0, 1), proj, target_sample=y)
    b = rdmreg_loss(z, z, RGGParams(1, 0, 1), proj, target_sample=y)
    assert a.rdmreg_view1 == b.rdmreg_view1


def test_sliced_stat_profile_null_and_alternative():
    target = RGGParams(2, 0, 1)
    rng = np.random.default_rng(18)
    z_null = draw_target(target, 256, 16, rng)
    assert sliced_stat_profile(z_null, target, 512, 19) < 0.012
    z_zero = np.zeros((256, 16))
    assert sliced_stat_profile(z_zero, target, 512, 20) >= 0.1


def test_sliced_stat_profile_averaging_reduces_variance():
    target = RGGParams(2, 0, 1)
    rng = np.random.default_rng(21)
    z = draw_target(target, 128, 8, rng)
    small = [sliced_stat_profile(z, target, 64, s) for s in range(50)]
    large = [sliced_stat_profile(z, target, 512, 1000 + s) for s in range(50)]
    assert np.var(large) <= np.var(small)


def test_gaussian_projection_moment_match():
    # GN_2 samples project to a Gaussian with matching mean/variance
    rng = np.random.default_rng(22)
    z = rng.normal(size=(10**5, 6)) * 1.3 + 0.4
    c = sample_sphere_projections(1, 6, 23).directions[0]
    proj = z @ c
    assert proj.mean() == pytest.approx(0.4 * c.sum(), abs=0.02)
    assert proj.var() == pytest.approx(1.3**2, abs=0.03)


def test_rgn_projection_not_closed():
    # Fig-1b operational form: projected RGN loses its zero atom
    params = RGGParams(2, 0, 1)
    z = sample_rgn(params, 10**5 * 16, 24).reshape(10**5, 16)
    c = sample_sphere_projections(1, 16, 25).directions[0]
    proj = z @ c
    assert np.mean(proj == 0.0) < 1e-3
    # coordinate marginals keep the atom
    assert np.mean(z[:, 0] == 0.0) == pytest.approx(rgn_zero_mass(params), abs=0.01)


def test_empirical_covariance_concentrates():
    # isotropic RGN draws: eigenvalue spread shrinks with batch size
    params = RGGParams(1, 0, sigma_gn(1))
    gamma = rgn_moments(params).variance
    spreads = []
    for b in (500, 50000):
        z = sample_rgn(params, b * 6, 26).reshape(b, 6)
        evals = np.linalg.eigvalsh(np.cov(z, rowvar=False))
        spreads.append(evals.max() - evals.min())
    assert spreads[1] < spreads[0]
    # anisotropic columns: top eigendirection variance differs from gamma
    rng = np.random.default_rng(27)
    z = sample_rgn(params, 20000 * 4, 28).reshape(20000, 4)
    z[:, 0] *= 3.0
    top = eig_projections(z, 1, which="top").directions[0]
    proj_var = np.var(z @ top, ddof=1)
    assert abs(proj_var - gamma) > 0.5


def test_mixed_projections_policies():
    rng = np.random.default_rng(29)
    z = rng.normal(size=(64, 8))
    for policy, k_expected in (("random_plus_top_eig", 8),
                               ("random_plus_bottom_eig", 4)):
        ps = mixed_projections(z, 32, policy, 30)
        assert ps.policy == policy
        assert ps.directions.shape == (32, 8)
    ps = mixed_projections(z, 16, "random_sphere", 31)
    assert ps.n == 16
