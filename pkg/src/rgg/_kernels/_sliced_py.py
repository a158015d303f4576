"""Pure-numpy kernels for the sorted sliced-W2 loss and its gradient."""

import numpy as np

# Batch indices are packed into the low 16 bits of the sort keys, so the
# packed path only applies up to this batch size.
MAX_PACKED_BATCH = 1 << 16
_INDEX_MASK = np.uint64(MAX_PACKED_BATCH - 1)
_SIGN_BIT = np.uint64(1 << 63)


def sorted_w2_losses(zp, yp):
    """Per-projection losses (1/B) ||sort(zp[k]) - sort(yp[k])||^2.

    zp, yp: (N, B) arrays of projected samples, one row per projection.
    Returns a length-N array.
    """
    zs = np.sort(zp, axis=1)
    ys = np.sort(yp, axis=1)
    return np.mean((zs - ys) ** 2, axis=1)


def _packed_order(zp):
    """Sort permutation per row via one vectorized sort of packed keys.

    Doubles are mapped to uint64 keys by the usual order-preserving bit
    transform (flip all bits of negatives, set the sign bit of the rest); the
    low 16 mantissa bits are then replaced by the batch index.  Sorting the
    keys sorts the values, with ties -- exact duplicates, or values closer
    than ~2^-36 relative -- broken by original position, matching a stable
    argsort.  One vectorized sort replaces a scalar argsort per row.
    """
    b = zp.shape[1]
    bits = zp.view(np.uint64)
    keys = np.where(bits >> np.uint64(63) != 0, ~bits, bits | _SIGN_BIT)
    keys = (keys & ~_INDEX_MASK) | np.arange(b, dtype=np.uint64)
    return (np.sort(keys, axis=1) & _INDEX_MASK).astype(np.intp)


def sorted_w2_grad(zp, yp):
    """Losses plus the gradient of each loss with respect to zp.

    The gradient of (1/B) sum_i (sort(zp)_i - sort(yp)_i)^2 in zp scatters the
    sorted residual back through the sort permutation:
    g[k, argsort(zp[k])[i]] = (2/B) (sort(zp[k])_i - sort(yp[k])_i).
    Returns (losses, grad) with grad shaped like zp.
    """
    b = zp.shape[1]
    if b <= MAX_PACKED_BATCH:
        order = _packed_order(zp)
    else:
        order = np.argsort(zp, axis=1, kind="stable")
    zs = np.take_along_axis(zp, order, axis=1)
    ys = np.sort(yp, axis=1)
    resid = zs - ys
    losses = np.mean(resid**2, axis=1)
    grad = np.empty_like(zp)
    np.put_along_axis(grad, order, (2.0 / b) * resid, axis=1)
    return losses, grad
