"""Benchmark the compiled sliced-W2 kernels against the numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_sliced.py

The active backend is chosen at import time; both implementations are
imported directly here so a single process can time them side by side.
(Setting RGG_KERNEL=python flips the backend for the rest of the package.)
"""

import time

import numpy as np

import rgg._kernels as kernels
from rgg._kernels import _sliced_py

try:
    from rgg._kernels import _sliced_cy
except ImportError:
    _sliced_cy = None


def best_of(fn, repeats=30):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), float(np.median(times))


def main():
    print(f"active backend: {kernels.BACKEND}")
    rng = np.random.default_rng(0)
    shapes = [(64, 64), (512, 256), (1024, 256), (2048, 1024)]
    impls = [("numpy", _sliced_py)]
    if _sliced_cy is not None:
        impls.append(("cython", _sliced_cy))
    header = f"{'shape (N,B)':>14} {'kernel':>18}"
    for name, _ in impls:
        header += f" {name + ' min':>12} {name + ' med':>12}"
    print(header)
    for shape in shapes:
        zp = np.ascontiguousarray(rng.normal(size=shape))
        yp = np.ascontiguousarray(rng.normal(size=shape))
        for kernel_name in ("sorted_w2_losses", "sorted_w2_grad"):
            row = f"{str(shape):>14} {kernel_name:>18}"
            for name, mod in impls:
                fn = getattr(mod, kernel_name)
                fn(zp, yp)  # warm up
                mn, md = best_of(lambda: fn(zp, yp))
                row += f" {mn * 1e3:>9.2f} ms {md * 1e3:>9.2f} ms"
            print(row)
        if _sliced_cy is not None:
            l1, g1 = _sliced_py.sorted_w2_grad(zp, yp)
            l2, g2 = _sliced_cy.sorted_w2_grad(zp, yp)
            assert np.allclose(l1, l2, rtol=0, atol=1e-12)
            assert np.array_equal(g1, g2)


if __name__ == "__main__":
    main()
