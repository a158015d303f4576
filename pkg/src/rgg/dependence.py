"""HSIC-based pairwise dependence diagnostics with a Gaussian kernel.

The biased estimator HSIC(X, Y) = Tr(K H L H) / (B - 1)^2 is used, with
H = I - (1/B) 1 1^T.  Bandwidth follows either the median of pairwise
distances or, for rectified inputs with many exact zeros, the standard
deviation of the strictly positive entries.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["KernelSpec", "hsic", "nhsic", "nhsic_offdiag_mean", "resolve_bandwidth"]


class DegenerateInputError(ValueError):
    """Input too degenerate to resolve a positive kernel bandwidth."""


@dataclass(frozen=True)
class KernelSpec:
    family: str = "gaussian"
    bandwidth_rule: str = "median_pairwise"
    bandwidth_override: float | None = None

    def __post_init__(self):
        if self.family != "gaussian":
            raise ValueError(f"unsupported kernel family {self.family!r}")
        if self.bandwidth_rule not in ("median_pairwise", "positive_std"):
            raise ValueError(f"unknown bandwidth rule {self.bandwidth_rule!r}")
        if self.bandwidth_override is not None and self.bandwidth_override <= 0:
            raise ValueError("bandwidth_override must be > 0")


def default_kernel_for(x, y):
    """positive_std when exact zeros are present (rectified features), else median."""
    has_zeros = np.any(np.asarray(x) == 0.0) or np.any(np.asarray(y) == 0.0)
    return KernelSpec(bandwidth_rule="positive_std" if has_zeros else "median_pairwise")


def resolve_bandwidth(x, y, kernel):
    if kernel.bandwidth_override is not None:
        return kernel.bandwidth_override
    joint = np.concatenate([np.ravel(x), np.ravel(y)])
    if kernel.bandwidth_rule == "median_pairwise":
        diffs = np.abs(joint[:, None] - joint[None, :])
        bw = float(np.median(diffs[np.triu_indices(joint.size, k=1)]))
    else:
        pos = joint[joint > 0]
        bw = float(np.std(pos)) if pos.size > 1 else 0.0
    if bw <= 0:
        raise DegenerateInputError(
            f"bandwidth rule {kernel.bandwidth_rule!r} resolved to {bw}; "
            "input too degenerate (pass bandwidth_override)"
        )
    return bw


def _gram(x, bw):
    d = x[:, None] - x[None, :]
    return np.exp(-(d * d) / (2.0 * bw * bw))


def hsic(x, y, kernel=None):
    """Biased empirical HSIC between two length-B samples."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.size != y.size:
        raise ValueError("x and y must have equal length")
    b = x.size
    if b < 3:
        raise ValueError("need at least 3 samples")
    if kernel is None:
        kernel = default_kernel_for(x, y)
    bw = resolve_bandwidth(x, y, kernel)
    k = _gram(x, bw)
    l = _gram(y, bw)
    h = np.eye(b) - np.full((b, b), 1.0 / b)
    return float(np.trace(k @ h @ l @ h) / (b - 1) ** 2)


def nhsic(x, y, kernel=None):
    """HSIC(x, y) / sqrt(HSIC(x, x) HSIC(y, y)); equals 1 at y = x."""
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if kernel is None:
        kernel = default_kernel_for(x, y)
    hxx = hsic(x, x, kernel)
    hyy = hsic(y, y, kernel)
    if hxx <= 0 or hyy <= 0:
        raise DegenerateInputError("zero self-HSIC; normalized value undefined")
    return hsic(x, y, kernel) / np.sqrt(hxx * hyy)


def nhsic_offdiag_mean(z, kernel=None, return_excluded=False):
    """Mean nhsic over column pairs i < j; degenerate columns are excluded.

    With return_excluded=True also returns the indices of columns dropped for
    being constant (or otherwise bandwidth-degenerate).
    """
    z = np.atleast_2d(np.asarray(z, dtype=float))
    d = z.shape[1]
    if d < 2:
        raise ValueError("need at least 2 columns")
    cols, excluded = [], []
    for j in range(d):
        col = z[:, j]
        try:
            k = kernel if kernel is not None else default_kernel_for(col, col)
            resolve_bandwidth(col, col, k)
            cols.append(j)
        except DegenerateInputError:
            excluded.append(j)
    if len(cols) < 2:
        raise DegenerateInputError("fewer than 2 non-degenerate columns")
    vals = [
        nhsic(z[:, i], z[:, j], kernel)
        for a, i in enumerate(cols)
        for j in cols[a + 1:]
    ]
    mean = float(np.mean(vals))
    if return_excluded:
        return mean, excluded
    return mean
