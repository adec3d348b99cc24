"""Compare the compiled Jacobi kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--sizes 50,100,200] [--repeat 3]
"""
import argparse
import time

import numpy as np

from spectral_ssr import _backend
from spectral_ssr.linalg import compact_svd, sym_eig


def best_time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="50,100,200")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"]
    if _backend.HAVE_EXTENSION:
        backends.insert(0, "cython")
    else:
        print("compiled extension not built; timing the fallback only")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<6} {'n':>5} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for n in map(int, args.sizes.split(",")):
        G = rng.standard_normal((n, n))
        S = G + G.T
        A = rng.standard_normal((n, n // 2))
        for name, fn in (("eig", lambda b: sym_eig(S, backend=b)),
                         ("svd", lambda b: compact_svd(A, backend=b))):
            times = [best_time(lambda: fn(b), args.repeat) for b in backends]
            speed = f"{times[-1] / times[0]:8.1f}x" if len(times) == 2 else ""
            print(f"{name:<6} {n:>5} " + " ".join(f"{t:10.4f}" for t in times) + f"   {speed}")


if __name__ == "__main__":
    main()
