"""Backend shoot-out for the two hot kernels.

Times the numba-compiled loops against their pure-numpy twins on
representative sizes and cross-checks that both backends agree. Run
with the default environment (numba active); under FRACHEAT_NO_NUMBA=1
only the numpy column is available and the script says so.

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from fracheat import _kernels


def best_of(fn, repeats=5):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    rng = np.random.default_rng(0x5EED)
    print(f"active backend: {_kernels.BACKEND}")
    if _kernels.duhamel_kernel_numba is None:
        print("numba twins unavailable (FRACHEAT_NO_NUMBA set or numba "
              "missing); nothing to compare")
        return
    _kernels.warmup()

    # elementwise kernel on a flat million-point batch
    n = 1_000_000
    xi = rng.uniform(-200, 200, n)
    xi1 = rng.uniform(-200, 200, n)
    a_np = _kernels.duhamel_kernel_numpy(xi, xi1, 0.3, 0.75)
    a_nb = _kernels.duhamel_kernel_numba(xi, xi1, 0.3, 0.75)
    gap = np.max(np.abs(a_np - a_nb)) / np.max(np.abs(a_np))
    t_np = best_of(lambda: _kernels.duhamel_kernel_numpy(xi, xi1, 0.3, 0.75))
    t_nb = best_of(lambda: _kernels.duhamel_kernel_numba(xi, xi1, 0.3, 0.75))
    print(f"duhamel_kernel   n={n:>9,}: numpy {t_np * 1e3:8.1f} ms   "
          f"numba {t_nb * 1e3:8.1f} ms   speedup {t_np / t_nb:5.2f}x   "
          f"rel gap {gap:.1e}")

    # quadrature kernel in its two working shapes: a wide scan against a
    # narrow data band (the cascade/classifier shape) and few targets
    # against a wide lattice (the dense-source shape)
    for n_t, n_n, label in ((32768, 40, "band scan"),
                            (512, 4096, "dense src")):
        targets = np.linspace(-8.0, 8.0, n_t)
        nodes = rng.uniform(-300, 300, n_n)
        w = rng.uniform(0.0, 1.0, (n_t, n_n))
        b_np = _kernels.second_iterate_numpy(targets, nodes, w,
                                             0.3, 0.75, 1.0)
        b_nb = _kernels.second_iterate_numba(targets, nodes, w,
                                             0.3, 0.75, 1.0)
        gap = np.max(np.abs(b_np - b_nb)) / np.max(np.abs(b_np))
        t_np = best_of(lambda: _kernels.second_iterate_numpy(
            targets, nodes, w, 0.3, 0.75, 1.0))
        t_nb = best_of(lambda: _kernels.second_iterate_numba(
            targets, nodes, w, 0.3, 0.75, 1.0))
        print(f"second_iterate {label} {n_t}x{n_n}: "
              f"numpy {t_np * 1e3:8.1f} ms   numba {t_nb * 1e3:8.1f} ms   "
              f"speedup {t_np / t_nb:5.2f}x   rel gap {gap:.1e}")


if __name__ == "__main__":
    main()
