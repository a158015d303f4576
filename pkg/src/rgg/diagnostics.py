"""Sparsity metrics and variance/covariance diagnostics (evaluation only)."""

from dataclasses import dataclass

import numpy as np

__all__ = ["SparsityReport", "sparsity_metrics", "vcreg_diagnostics"]


@dataclass(frozen=True)
class SparsityReport:
    m_l1: float | None
    m_l0: float
    zero_fraction: float
    n_zero_rows: int = 0


def sparsity_metrics(z):
    """Normalized l1-ratio and l0 sparsity metrics over rows.

    m_l1 = (1/D) * mean(||row||_1^2 / ||row||_2^2): 1/D for one-hot rows, 1 for
    dense uniform rows; undefined (None) when any row is all zeros.
    m_l0 = mean nonzero count / D.
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    b, d = z.shape
    l1 = np.sum(np.abs(z), axis=1)
    l2sq = np.sum(z * z, axis=1)
    nonzero_rows = l2sq > 0
    n_zero_rows = int(b - np.count_nonzero(nonzero_rows))
    m_l0 = float(np.mean(np.count_nonzero(z, axis=1)) / d)
    if n_zero_rows > 0:
        m_l1 = None
    else:
        m_l1 = float(np.mean(l1**2 / l2sq) / d)
    return SparsityReport(m_l1=m_l1, m_l0=m_l0, zero_fraction=1.0 - m_l0,
                          n_zero_rows=n_zero_rows)


def vcreg_diagnostics(z, target_var):
    """Variance and covariance diagnostic losses of a feature matrix.

    variance_loss: l2 distance between the diagonal of the empirical
    covariance (ddof=1) and the target variance.
    covariance_loss: signed sum of the off-diagonal covariance entries,
    scaled by 1/D.
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    b, d = z.shape
    if b < 2:
        raise ValueError("need at least 2 rows")
    cov = np.cov(z, rowvar=False, ddof=1)
    cov = np.atleast_2d(cov)
    diag = np.diag(cov)
    variance_loss = float(np.linalg.norm(diag - target_var))
    off = cov - np.diag(diag)
    covariance_loss = float(np.sum(off) / d)
    return variance_loss, covariance_loss
