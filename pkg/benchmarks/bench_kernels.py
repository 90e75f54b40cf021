"""Compare the compiled kernels with the interpreted fallback.

Each path runs in its own interpreter because the switch is read at import
time (PCON_DISABLE_NUMBA). Timings exclude graph generation and, for the
compiled path, JIT compilation.

    python3 benchmarks/bench_kernels.py --n 2000 --degree 10
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time, warnings
warnings.simplefilter("ignore")
from pcon import _accel, bench
from pcon.diffusion import DiffusionParams
from pcon.generators import GenSpec

n, degree, repeats = int(sys.argv[1]), float(sys.argv[2]), int(sys.argv[3])
g, _, _ = bench.load_source(gen=GenSpec("ER", n, {"d": degree}, 0))
if _accel.ENABLE_NUMBA:
    bench.warmup()
params = DiffusionParams(alpha=0.01, eps=1.0 / g.m, t=10.0)
out = {"numba": _accel.ENABLE_NUMBA, "n": g.n, "m": g.m, "times": {}, "phi": {}}
for method in ("pcon_core", "pcon_de", "asc_sweep", "ppr", "hk"):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        res = bench._run_method(g, method, params, [0], 0)[0]
        best = min(best, time.perf_counter() - start)
    out["times"][method] = best
    out["phi"][method] = res.conductance_float
print(json.dumps(out))
"""


def run_path(disable: bool, n: int, degree: float, repeats: int) -> dict:
    env = dict(os.environ, PCON_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER, str(n), str(degree), str(repeats)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--n", type=int, default=2_000)
    ap.add_argument("--degree", type=float, default=10.0)
    ap.add_argument("--repeats", type=int, default=3, help="compiled path; the fallback is timed once")
    args = ap.parse_args(argv)

    fast = run_path(False, args.n, args.degree, args.repeats)
    slow = run_path(True, args.n, args.degree, 1)
    print(f"ER graph after LCC: n={fast['n']} m={fast['m']}")
    print(f"{'method':<10} {'numba_s':>10} {'python_s':>10} {'speedup':>8}  same_phi")
    for method, t_fast in fast["times"].items():
        t_slow = slow["times"][method]
        same = fast["phi"][method] == slow["phi"][method]
        print(f"{method:<10} {t_fast:>10.4f} {t_slow:>10.4f} {t_slow / t_fast:>7.1f}x  {same}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
