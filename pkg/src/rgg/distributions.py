"""The generalized Gaussian family: GN, its truncation TGN, and rectified RGN.

The distribution is parameterized so the density of GN_p(mu, sigma) is

    f(x) = p^(1 - 1/p) / (2 sigma Gamma(1/p)) * exp(-|x - mu|^p / (p sigma^p))

which reduces to Laplace(mu, sigma) at p = 1 and N(mu, sigma^2) at p = 2.
Rectification Y = max(0, X) mixes a point mass at zero with the density
restricted to (0, inf).
"""

from dataclasses import dataclass

import numpy as np

from .special import gamma, gamma_lower_regularized, gamma_upper

__all__ = [
    "RGGParams",
    "MomentSummary",
    "gn_pdf",
    "gn_cdf",
    "gn_variance",
    "rgn_pdf_mass",
    "rgn_zero_mass",
    "sample_gn",
    "sample_rgn",
    "rgn_moments",
    "sigma_gn",
    "sigma_rgn",
    "expected_l0",
    "lp_norm_constraint_check",
    "write_sample_csv",
    "read_sample_csv",
]

# |mu/sigma| beyond this short-circuits the CDF to 0/1; the incomplete gamma
# argument |r|^p/p is far past any mass at that point.
_RATIO_CUTOFF = 50.0


@dataclass(frozen=True)
class RGGParams:
    """Shape p, location mu, scale sigma of a GN/TGN/RGN distribution."""

    p: float
    mu: float
    sigma: float

    def __post_init__(self):
        if not (np.isfinite(self.p) and self.p > 0):
            raise ValueError(f"p must be finite and > 0, got {self.p}")
        if not np.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be finite and > 0, got {self.sigma}")


@dataclass(frozen=True)
class MomentSummary:
    mean: float
    second_moment: float
    variance: float


def gn_pdf(params, x):
    """Density of GN_p(mu, sigma) at x (scalar or array)."""
    p, mu, sigma = params.p, params.mu, params.sigma
    x = np.asarray(x, dtype=float)
    norm = p ** (1.0 - 1.0 / p) / (2.0 * sigma * gamma(1.0 / p))
    return norm * np.exp(-np.abs(x - mu) ** p / (p * sigma**p))


def gn_cdf(params, x):
    """CDF of GN_p(mu, sigma): 1/2 + sgn(x-mu) * P(1/p, |x-mu|^p / (p sigma^p)) / 2."""
    p, mu, sigma = params.p, params.mu, params.sigma
    x = np.asarray(x, dtype=float)
    r = (x - mu) / sigma
    out = np.empty_like(r)
    lo = r <= -_RATIO_CUTOFF
    hi = r >= _RATIO_CUTOFF
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    rm = r[mid]
    t = np.abs(rm) ** p / p
    out[mid] = 0.5 + np.sign(rm) * 0.5 * gamma_lower_regularized(1.0 / p, t)
    return out if out.ndim else float(out)


def gn_variance(params):
    """Closed-form Var(GN_p(mu, sigma)) = sigma^2 p^(2/p) Gamma(3/p) / Gamma(1/p)."""
    p, sigma = params.p, params.sigma
    return sigma**2 * p ** (2.0 / p) * gamma(3.0 / p) / gamma(1.0 / p)


def rgn_zero_mass(params):
    """Point mass of RGN_p(mu, sigma) at zero: Phi_GN(0,1)(-mu/sigma)."""
    std = RGGParams(params.p, 0.0, 1.0)
    return float(gn_cdf(std, -params.mu / params.sigma))


def rgn_pdf_mass(params, x):
    """RGN density/atom decomposition at x.

    Returns (density, atom_at_zero): density is the GN density on (0, inf) and
    zero elsewhere; the atom is reported only at x == 0.
    """
    x = float(x)
    density = float(gn_pdf(params, x)) if x > 0 else 0.0
    atom = rgn_zero_mass(params) if x == 0.0 else 0.0
    return density, atom


def _resolve_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_gn(params, n, seed):
    """Draw n i.i.d. GN_p(mu, sigma) samples: X = mu + sigma * S * (p G)^(1/p).

    S is a random sign and G ~ Gamma(shape=1/p, rate=1).  `seed` may be an
    integer or a caller-owned numpy Generator.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p, mu, sigma = params.p, params.mu, params.sigma
    rng = _resolve_rng(seed)
    s = rng.integers(0, 2, size=n) * 2.0 - 1.0
    g = rng.gamma(shape=1.0 / p, scale=1.0, size=n)
    return mu + sigma * s * (p * g) ** (1.0 / p)


def sample_rgn(params, n, seed):
    """Draw n i.i.d. RGN_p(mu, sigma) samples: max(0, GN draw)."""
    return np.maximum(0.0, sample_gn(params, n, seed))


def rgn_moments(params):
    """Mean, second moment, and variance of RGN_p(mu, sigma).

    Composed from the shifted integrals

        I0 = (1/p) a^(-1/p) Gamma(1/p) (1 + sgn(mu) P(1/p, t0))
        I1 = (1/p) a^(-2/p) Gamma(2/p, t0)
        I2 = (1/p) a^(-3/p) Gamma(3/p) (1 + sgn(mu) P(3/p, t0))

    with a = 1/(p sigma^p), t0 = |mu|^p / (p sigma^p), and the density
    normalizer C = p^(1-1/p) / (2 sigma Gamma(1/p)):

        E[X]   = C (mu I0 + I1)
        E[X^2] = C (mu^2 I0 + 2 mu I1 + I2)
    """
    p, mu, sigma = params.p, params.mu, params.sigma
    a = 1.0 / (p * sigma**p)
    t0 = np.abs(mu) ** p * a
    sgn = np.sign(mu)
    c = p ** (1.0 - 1.0 / p) / (2.0 * sigma * gamma(1.0 / p))
    i0 = (1.0 / p) * a ** (-1.0 / p) * gamma(1.0 / p) * (
        1.0 + sgn * gamma_lower_regularized(1.0 / p, t0)
    )
    i1 = (1.0 / p) * a ** (-2.0 / p) * gamma_upper(2.0 / p, t0)
    i2 = (1.0 / p) * a ** (-3.0 / p) * gamma(3.0 / p) * (
        1.0 + sgn * gamma_lower_regularized(3.0 / p, t0)
    )
    mean = c * (mu * i0 + i1)
    second = c * (mu**2 * i0 + 2.0 * mu * i1 + i2)
    return MomentSummary(mean=float(mean), second_moment=float(second),
                         variance=float(second - mean**2))


def sigma_gn(p):
    """Scale making the pre-rectification GN variance exactly 1."""
    if p <= 0:
        raise ValueError(f"p must be > 0, got {p}")
    return float(np.sqrt(gamma(1.0 / p)) / (p ** (1.0 / p) * np.sqrt(gamma(3.0 / p))))


class BracketingError(RuntimeError):
    """Raised when the bisection bracket cannot enclose a sign change."""


def sigma_rgn(p, mu, tol=1e-10, max_iter=200, return_iterations=False):
    """Scale making the post-rectification RGN variance 1, by bisection.

    Solves Var(RGN_p(mu, sigma)) = 1 on an initial bracket [1e-3, 10],
    expanded geometrically up to 1e3 before reporting a bracketing failure.
    """
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")

    def f(sigma):
        return rgn_moments(RGGParams(p, mu, sigma)).variance - 1.0

    lo, hi = 1e-3, 10.0
    while f(hi) < 0:
        hi *= 2.0
        if hi > 1e3:
            raise BracketingError(
                f"no sigma in [1e-3, 1e3] with unit RGN variance for p={p}, mu={mu}"
            )
    if f(lo) >= 0:
        raise BracketingError(
            f"lower bracket 1e-3 already has variance >= 1 for p={p}, mu={mu}"
        )

    iterations = 0
    while hi - lo > tol and iterations < max_iter:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
        iterations += 1
    sigma_star = 0.5 * (lo + hi)
    if return_iterations:
        return sigma_star, iterations
    return sigma_star


def expected_l0(params, d):
    """Expected nonzero count of a d-dimensional i.i.d. RGN vector.

    Equals d * Phi_GN(0,1)(mu/sigma)
         = (d/2) * (1 + sgn(mu/sigma) P(1/p, |mu/sigma|^p / p)).
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    std = RGGParams(params.p, 0.0, 1.0)
    return d * float(gn_cdf(std, params.mu / params.sigma))


def lp_norm_constraint_check(params, samples):
    """Empirical mean of ||x||_p^p over rows; approaches d * sigma^p for GN_p(0, sigma)."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    return float(np.mean(np.sum(np.abs(samples) ** params.p, axis=1)))


def write_sample_csv(path, samples):
    """Write a B x D sample matrix as CSV with header dim_0,...,dim_{D-1}."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    header = ",".join(f"dim_{j}" for j in range(samples.shape[1]))
    np.savetxt(path, samples, delimiter=",", header=header, comments="", fmt="%.17g")


def read_sample_csv(path):
    """Read a sample matrix written by write_sample_csv; returns a B x D array."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data
