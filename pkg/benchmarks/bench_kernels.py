"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each case is timed on every available backend; the outputs are checked against
each other before the timings are reported.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from vilenkin import kernels
from vilenkin.core import RadixSystem


def _cases(quick: bool):
    rng = np.random.default_rng(0)
    walsh = RadixSystem.constant(2, 11 if quick else 14)
    mixed = RadixSystem((2, 3, 4, 5, 2, 3, 4) if quick else (2, 3, 4, 5, 2, 3, 4, 2))
    fej = RadixSystem((3, 4, 5, 2, 3) if quick else (3, 4, 5, 2, 3, 4))
    n_w, n_m, n_f = walsh.M[-1], mixed.M[-1], fej.M[-1]
    coeffs = rng.standard_normal(n_f) + 1j * rng.standard_normal(n_f)
    vec = rng.standard_normal(2 ** (16 if quick else 20))
    return [
        (f"lebesgue scan, Walsh M={n_w}",
         lambda b: kernels.stream_norms(walsh, walsh.depth, np.ones(n_w), 0, n_w, backend=b)),
        (f"lebesgue scan, mixed M={n_m}",
         lambda b: kernels.stream_norms(mixed, mixed.depth, np.ones(n_m), 0, n_m, backend=b)),
        (f"fejer sup, mixed M={n_f}",
         lambda b: kernels.fejer_sup(fej, fej.depth, coeffs, n_f, backend=b)),
        (f"fwht, n={vec.size}", lambda b: kernels.fwht(vec, backend=b)),
    ]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller problem sizes")
    args = ap.parse_args()
    backends = kernels.available_backends()
    if "c" not in backends:
        print("compiled backend not built; timing the numpy fallback only")
    print(f"{'case':<34}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, fn in _cases(args.quick):
        times, outputs = {}, {}
        for b in backends:
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                outputs[b] = fn(b)
                best = min(best, time.perf_counter() - t0)
            times[b] = best
        ref = outputs["python"]
        for b, out in outputs.items():
            err = np.abs(out - ref).max() / max(1.0, np.abs(ref).max())
            if err > 1e-10:
                raise SystemExit(f"{name}: backend {b} disagrees by {err:.2e}")
        speedup = times["python"] / times["c"] if "c" in times else 1.0
        print(f"{name:<34}" + "".join(f"{times[b]:>11.4f}s" for b in backends) + f"{speedup:>9.1f}x")


if __name__ == "__main__":
    main()
