"""Benchmark the compiled kernels against the pure-Python fallback.

Run:  python3 benchmarks/bench_kernels.py
"""

import argparse
import time

import numpy as np

from solsta import _pycore

try:
    from solsta import _core
except ImportError:
    _core = None


def time_call(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_rk4(backend, n_steps):
    nodes = np.linspace(0.0, 10.0, n_steps + 1)
    mids = nodes[:-1] + 0.5 * (nodes[1] - nodes[0])
    g_nodes = 2.0 + np.tanh(nodes)
    g_mid = 2.0 + np.tanh(mids)
    zeros_n = np.zeros(n_steps + 1)
    zeros_m = np.zeros(n_steps)
    y0 = np.array([0.5, 0.0, 0.0, 0.0])
    dt = 10.0 / n_steps
    return time_call(lambda: backend.rk4_soliton(
        y0, g_nodes, g_mid, zeros_n, zeros_m, 0.04, 1.0, dt))


def bench_cn(backend, n_points, n_steps):
    x = np.linspace(-40.0, 40.0, n_points)
    dx = x[1] - x[0]
    psi0 = (np.sqrt(2.0) / np.cosh(x / 0.5)).astype(complex)
    g_mid = np.full(n_steps, 2.0)
    x0_mid = np.zeros(n_steps)

    def run():
        psi = psi0.copy()
        backend.cn_evolve(psi, x, 0.04, x0_mid, g_mid, dx, 1e-4)

    return time_call(run)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rk4-steps", type=int, default=100_000)
    parser.add_argument("--cn-points", type=int, default=8192)
    parser.add_argument("--cn-steps", type=int, default=2000)
    args = parser.parse_args()

    backends = [("python", _pycore)]
    if _core is not None:
        backends.insert(0, ("compiled", _core))
    else:
        print("compiled extension not available; benchmarking fallback only")

    results = {}
    print(f"\nRK4 width/center integrator, {args.rk4_steps} steps:")
    for name, mod in backends:
        t = bench_rk4(mod, args.rk4_steps)
        results[("rk4", name)] = t
        print(f"  {name:9s} {t * 1e3:10.2f} ms "
              f"({t / args.rk4_steps * 1e9:8.1f} ns/step)")

    print(f"\nCrank-Nicolson propagator, {args.cn_points} points x "
          f"{args.cn_steps} steps:")
    for name, mod in backends:
        t = bench_cn(mod, args.cn_points, args.cn_steps)
        results[("cn", name)] = t
        print(f"  {name:9s} {t:10.3f} s "
              f"({t / args.cn_steps * 1e6:8.1f} us/step)")

    if _core is not None:
        print("\nSpeedups (compiled vs python):")
        for kernel in ("rk4", "cn"):
            ratio = results[(kernel, "python")] / results[(kernel, "compiled")]
            print(f"  {kernel}: {ratio:.1f}x")


if __name__ == "__main__":
    main()
