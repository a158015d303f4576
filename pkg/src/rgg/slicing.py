"""Random-projection machinery and the sliced two-sample matching loss.

Because the rectified family is not closed under linear projection, matching
is done sample-to-sample: features are compared against a fresh target draw
along each direction via the sorted one-dimensional 2-Wasserstein distance.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .distributions import sample_rgn

__all__ = [
    "ProjectionSet",
    "LossBreakdown",
    "sample_sphere_projections",
    "eig_projections",
    "mixed_projections",
    "sliced_w2_1d",
    "rdmreg_loss",
    "sliced_stat_profile",
    "DEFAULT_LAMBDA_SIM",
    "DEFAULT_LAMBDA_DIST",
]

DEFAULT_LAMBDA_SIM = 25.0
DEFAULT_LAMBDA_DIST = 125.0

POLICIES = ("random_sphere", "random_plus_top_eig", "random_plus_bottom_eig")


@dataclass(frozen=True)
class ProjectionSet:
    """N unit-norm direction vectors (rows) in D dimensions."""

    directions: np.ndarray
    policy: str = "random_sphere"

    def __post_init__(self):
        d = np.atleast_2d(np.asarray(self.directions, dtype=float))
        norms = np.linalg.norm(d, axis=1)
        if not np.allclose(norms, 1.0, atol=1e-12):
            raise ValueError("projection rows must have unit l2 norm")
        if self.policy not in POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}")
        object.__setattr__(self, "directions", d)

    @property
    def n(self):
        return self.directions.shape[0]


@dataclass(frozen=True)
class LossBreakdown:
    invariance: float
    rdmreg_view1: float
    rdmreg_view2: float
    lambda_sim: float
    lambda_dist: float

    @property
    def total(self):
        return self.lambda_sim * self.invariance + self.lambda_dist * (
            self.rdmreg_view1 + self.rdmreg_view2
        )


def sample_sphere_projections(n, d, seed):
    """n i.i.d. directions uniform on the unit sphere in R^d."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = rng.standard_normal((n, d))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return ProjectionSet(g)


def eig_projections(z, k, which="top"):
    """k unit eigenvectors of the empirical covariance of z, as rows.

    Ordered by eigenvalue descending for which="top", ascending for "bottom".
    Covariance is column-centered with divisor B-1.
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    b, d = z.shape
    if b < 2:
        raise ValueError("need at least 2 rows for a covariance eigenbasis")
    if which not in ("top", "bottom"):
        raise ValueError(f"which must be 'top' or 'bottom', got {which!r}")
    if k > min(b, d):
        raise ValueError(f"k={k} exceeds min(B, D)={min(b, d)}")
    cov = np.cov(z, rowvar=False, ddof=1)
    evals, evecs = np.linalg.eigh(cov)  # ascending
    if which == "top":
        idx = np.argsort(evals)[::-1][:k]
    else:
        idx = np.argsort(evals)[:k]
    return ProjectionSet(evecs[:, idx].T)


def mixed_projections(z, n, policy, seed, k=None):
    """Projection set for a policy: pure random, or k eigenvectors + n-k random.

    Defaults per policy: k = min(B, D) for random_plus_top_eig and
    min(B, D) // 2 for random_plus_bottom_eig.
    """
    if policy == "random_sphere":
        ps = sample_sphere_projections(n, np.atleast_2d(z).shape[1], seed)
        return ProjectionSet(ps.directions, policy=policy)
    z = np.atleast_2d(np.asarray(z, dtype=float))
    b, d = z.shape
    if policy == "random_plus_top_eig":
        k = min(b, d) if k is None else k
        eig = eig_projections(z, k, which="top")
    elif policy == "random_plus_bottom_eig":
        k = max(1, min(b, d) // 2) if k is None else k
        eig = eig_projections(z, k, which="bottom")
    else:
        raise ValueError(f"unknown policy {policy!r}")
    rand = sample_sphere_projections(max(1, n - k), d, seed)
    dirs = np.vstack([eig.directions, rand.directions])[:n]
    return ProjectionSet(dirs, policy=policy)


def sliced_w2_1d(zproj, yproj):
    """(1/B) * sum_i (sort(zproj)_i - sort(yproj)_i)^2 for two length-B vectors."""
    zproj = np.asarray(zproj, dtype=float).ravel()
    yproj = np.asarray(yproj, dtype=float).ravel()
    if zproj.shape != yproj.shape:
        raise ValueError("projected samples must have equal length")
    losses = _kernels.sorted_w2_losses(zproj[None, :], yproj[None, :])
    return float(losses[0])


def sliced_w2_mean(z, y, proj):
    """Mean sorted-W2 over all projection rows applied to (z, y)."""
    zp = proj.directions @ np.asarray(z, dtype=float).T
    yp = proj.directions @ np.asarray(y, dtype=float).T
    return float(np.mean(_kernels.sorted_w2_losses(zp, yp)))


def draw_target(target, b, d, seed):
    """Fresh B x D i.i.d. target sample used as the matching reference."""
    return sample_rgn(target, b * d, seed).reshape(b, d)


def rdmreg_loss(z, zprime, target, proj, lambda_sim=DEFAULT_LAMBDA_SIM,
                lambda_dist=DEFAULT_LAMBDA_DIST, seed=0, target_sample=None):
    """Invariance + two-view sliced matching loss against a target draw.

    The target sample Y is redrawn from `seed` on every call; pass
    `target_sample` to freeze Y for deterministic evaluation.
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    zprime = np.atleast_2d(np.asarray(zprime, dtype=float))
    if z.shape != zprime.shape:
        raise ValueError(f"view shapes differ: {z.shape} vs {zprime.shape}")
    b, d = z.shape
    y = draw_target(target, b, d, seed) if target_sample is None else target_sample
    if y.shape != z.shape:
        raise ValueError(f"target sample shape {y.shape} != feature shape {z.shape}")
    invariance = float(np.mean(np.sum((z - zprime) ** 2, axis=1)))
    return LossBreakdown(
        invariance=invariance,
        rdmreg_view1=sliced_w2_mean(z, y, proj),
        rdmreg_view2=sliced_w2_mean(zprime, y, proj),
        lambda_sim=lambda_sim,
        lambda_dist=lambda_dist,
    )


def sliced_stat_profile(z, target, n_proj, seed):
    """Diagnostic mean sliced W2 between z and a fresh target draw."""
    if n_proj < 1:
        raise ValueError("n_proj must be >= 1")
    z = np.atleast_2d(np.asarray(z, dtype=float))
    b, d = z.shape
    rng = np.random.default_rng(seed)
    proj = sample_sphere_projections(n_proj, d, rng)
    y = draw_target(target, b, d, rng)
    return sliced_w2_mean(z, y, proj)
