"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 4,8,16,32] [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from socle import _pykernels

try:
    from socle import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def _cases(n, rng):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return {
        "hessenberg": lambda k: k.hessenberg(m),
        "hqr_eigvals": lambda k: k.hqr_eigvals(m, 60 * n),
        "pivoted_qr": lambda k: k.pivoted_qr(m),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="4,8,16,32")
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    print(f"{'kernel':<12} {'n':>4} " + " ".join(f"{b + ' (ms)':>14}" for b in backends)
          + f" {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        for name, fn in _cases(n, rng).items():
            times = {b: min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)) * 1e3
                     for b, k in backends.items()}
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{name:<12} {n:>4} " + " ".join(f"{t:>14.3f}" for t in times.values())
                  + f" {speed:>7.1f}x")


if __name__ == "__main__":
    main()
