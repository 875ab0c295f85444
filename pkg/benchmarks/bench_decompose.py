"""Time the band-boundary scan on both kernel paths.

The scan is the only hot loop in a decomposition; everything around it
is FFT work that both paths share. Run as

    python3 benchmarks/bench_decompose.py --sizes 256,1024,4096 --repeats 5

Each cell reports the best of --repeats full decompositions of white
Gaussian noise, which produces the worst-case number of candidate
boundaries. The compiled path is warmed once before timing so jit
compilation does not land in the measurement.
"""

import argparse
import time

import numpy as np

from fdmkit import FdmConfig, Signal, decompose
from fdmkit._kernels import backends


def time_backend(backend, signals, config, repeats):
    decompose(signals[0], config, backend=backend)  # warm-up / jit
    best = []
    for s in signals:
        runs = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            decompose(s, config, backend=backend)
            runs.append(time.perf_counter() - t0)
        best.append(min(runs))
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="256,1024,4096,16384",
                    help="comma-separated signal lengths")
    ap.add_argument("--repeats", type=int, default=5,
                    help="timings per cell; the best is reported")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scan", choices=("lth", "htl"), default="lth")
    args = ap.parse_args()

    sizes = [int(v) for v in args.sizes.split(",") if v.strip()]
    rng = np.random.default_rng(args.seed)
    signals = [Signal(rng.standard_normal(n), 100.0) for n in sizes]
    config = FdmConfig(scan=args.scan)

    available = backends()
    results = {b: time_backend(b, signals, config, args.repeats)
               for b in available}
    if "numba" not in available:
        print("note: compiled path unavailable (numba missing or disabled "
              "via FDMKIT_NUMBA=0), timing the numpy path only")

    header = f"{'n':>8}" + "".join(f"{b + ' (s)':>14}" for b in available)
    if len(available) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for i, n in enumerate(sizes):
        row = f"{n:>8}" + "".join(f"{results[b][i]:>14.6f}" for b in available)
        if len(available) == 2:
            row += f"{results['numpy'][i] / results['numba'][i]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
