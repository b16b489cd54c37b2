"""Compare the compiled and numpy Husimi kernels.

Times ``husimi_sample`` on the default polar grid for several amplitudes,
checks that both backends agree, and prints one line per case::

    python benchmarks/bench_kernels.py --alpha 1,3,5 --repeat 3
"""
import argparse
import time

import numpy as np

from idjcm import _kernels_py
from idjcm.model import ModelConfig, evolve_closed_form
from idjcm.phase_space import build_grid

try:
    from idjcm import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--alpha", default="1,3,5", help="comma-separated amplitudes")
    p.add_argument("--t", type=float, default=1.0, help="scaled time")
    p.add_argument("--n-r", type=int, default=200)
    p.add_argument("--n-theta", type=int, default=256)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    if _kernels_c is None:
        print("compiled extension not built; only the numpy backend is timed")
    print(f"{'alpha':>6} {'N':>4} {'nodes':>7} {'numpy_s':>9} {'cython_s':>9} {'speedup':>8} {'max_rel_diff':>12}")
    for a in (float(s) for s in args.alpha.split(",")):
        cfg = ModelConfig(alpha_mag=a)
        g = build_grid(cfg, args.n_r, args.n_theta)
        x1, x2 = (np.ascontiguousarray(c.ravel()) for c in g.cartesian())
        s = evolve_closed_form(cfg, args.t)
        t_py, ref = best_of(lambda: _kernels_py.husimi_sample(s.upper, s.lower, x1, x2), args.repeat)
        if _kernels_c is None:
            print(f"{a:6.2f} {s.n_max:4d} {x1.size:7d} {t_py:9.4f} {'-':>9} {'-':>8} {'-':>12}")
            continue
        t_c, got = best_of(lambda: _kernels_c.husimi_sample(s.upper, s.lower, x1, x2), args.repeat)
        scale = max(np.abs(ref[0]).max(), 1e-300)
        diff = max(np.abs(u - v).max() for u, v in zip(ref, got)) / scale
        print(f"{a:6.2f} {s.n_max:4d} {x1.size:7d} {t_py:9.4f} {t_c:9.4f} {t_py / t_c:8.1f} {diff:12.2e}")


if __name__ == "__main__":
    main()
