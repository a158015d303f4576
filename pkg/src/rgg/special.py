"""Gamma-family special functions used by every closed-form expression here.

Thin validated wrappers around scipy.special; arguments are restricted to the
real, positive domain that the distribution formulas need.
"""

import numpy as np
import scipy.special as sc

__all__ = ["gamma", "gamma_lower_regularized", "gamma_upper", "log_gamma"]


def _check_s(s):
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0) or not np.all(np.isfinite(s)):
        raise ValueError(f"shape argument must be finite and > 0, got {s}")
    return s


def gamma(s):
    """Gamma function for s > 0. Returns inf on overflow (s > ~171.6)."""
    s = _check_s(s)
    return sc.gamma(s)


def log_gamma(s):
    """log Gamma(s) for s > 0; safe where gamma() would overflow."""
    s = _check_s(s)
    return sc.gammaln(s)


def gamma_lower_regularized(s, t):
    """Regularized lower incomplete gamma P(s, t) = gammainc(s, t) / Gamma(s)."""
    s = _check_s(s)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise ValueError(f"second argument must be finite and >= 0, got {t}")
    return sc.gammainc(s, t)


def gamma_upper(s, t):
    """Unregularized upper incomplete gamma Gamma(s, t) = Gamma(s) * (1 - P(s, t))."""
    s = _check_s(s)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise ValueError(f"second argument must be finite and >= 0, got {t}")
    return sc.gammaincc(s, t) * sc.gamma(s)
