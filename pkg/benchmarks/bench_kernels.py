"""Compare the compiled and pure-Python kernel backends.

Run with ``python3 benchmarks/bench_kernels.py``.
"""
import argparse
import timeit

import numpy as np

from relaychain import _kernels_py as pure

try:
    from relaychain import _kernels as compiled
except ImportError:
    compiled = None

ARGS = (100.0, 400.0, 400.0, 0.866, 0.1, -0.2)


def cases(n_grid):
    q = np.logspace(-4, 4, n_grid)
    m = np.array([[2.0, 0.5, 0.1], [0.5, 1.5, 0.2], [0.1, 0.2, 1.0]])
    big = np.cov(np.random.default_rng(0).standard_normal((200, 8)), rowvar=False)
    return {
        f"min_rate_grid {n_grid}x{n_grid}": lambda k: k.min_rate_grid(*ARGS, q, q),
        "log_det 3x3": lambda k: k.log_det(m, 1e-14),
        "log_det 8x8": lambda k: k.log_det(big, 1e-14),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--grid", type=int, default=129)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = {"python": pure}
    if compiled is not None:
        backends["compiled"] = compiled
    print(f"{'case':<26}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for name, fn in cases(args.grid).items():
        times = {}
        for b, mod in backends.items():
            number = 20 if "grid" in name else 20000
            t = min(timeit.repeat(lambda: fn(mod), number=number, repeat=args.repeat))
            times[b] = t / number
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{name:<26}" + "".join(f"{times[b] * 1e6:>12.2f}us" for b in backends)
              + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
