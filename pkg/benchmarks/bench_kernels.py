"""Compare the compiled and pure-Python kernel backends.

Run:  python3 benchmarks/bench_kernels.py
"""
import time

import numpy as np

from bppsim.ising import Graph, IsingModel, exact_joint, glauber_sample
from bppsim.kernels import get_backend


def time_call(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(backend_name):
    import bppsim.kernels as K

    backend = get_backend(backend_name)
    K.config_energies = backend.config_energies
    K.glauber_chain = backend.glauber_chain

    g = Graph(18, tuple((i, (i + 1) % 18) for i in range(18)))
    model = IsingModel.uniform(g, 0.3)
    t_exact = time_call(lambda: exact_joint(model))

    g2 = Graph(500, tuple((i, (i + 1) % 500) for i in range(500)))
    model2 = IsingModel.uniform(g2, 0.3)
    rng = np.random.default_rng(0)
    t_glauber = time_call(lambda: glauber_sample(model2, n_samples=200, burn_in=200, rng=rng),
                          repeat=1)
    return t_exact, t_glauber


def main():
    results = {}
    for name in ("python", "cython"):
        try:
            results[name] = bench(name)
        except ImportError:
            print(f"{name:>7}: unavailable")
    print(f"{'backend':>7}  {'exact 2^18 (s)':>15}  {'glauber 500x400 sweeps (s)':>27}")
    for name, (t1, t2) in results.items():
        print(f"{name:>7}  {t1:15.4f}  {t2:27.4f}")
    if len(results) == 2:
        p, c = results["python"], results["cython"]
        print(f"speedup: exact x{p[0] / c[0]:.1f}, glauber x{p[1] / c[1]:.1f}")


if __name__ == "__main__":
    main()
