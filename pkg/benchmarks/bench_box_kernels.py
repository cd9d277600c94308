"""Timing comparison of the two box-oracle kernel backends.

The compiled loop backend and the vectorized numpy fallback compute identical
lattice sums; this script times both on the same arguments and prints a small
table. Run from the repo root:

    python3 benchmarks/bench_box_kernels.py --L 120 --eta 0.025 --repeats 5
"""

import argparse
import time

from becimpurity import BoxOracleConfig, SystemParams
from becimpurity import _kernels
from becimpurity.rates import _lattice_args


def _time(fn, args, repeats: int) -> tuple[float, float]:
    best = float("inf")
    value = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        value = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, value[0]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=float, default=120.0, help="box side length")
    ap.add_argument("--eta", type=float, default=0.025, help="Lorentzian width")
    ap.add_argument("--pcut", type=float, default=3.0, help="lattice momentum cap")
    ap.add_argument("--qi", type=float, default=2.0, help="impurity momentum")
    ap.add_argument("--repeats", type=int, default=5, help="timed repetitions (best of)")
    ns = ap.parse_args()

    params = SystemParams(g=1.0)
    cfg = BoxOracleConfig(L=ns.L, eta=ns.eta, p_cut=ns.pcut)
    args = _lattice_args(ns.qi, params, cfg)
    n_points = _kernels.lattice_points(args[0])
    full = args + (ns.eta,)

    if _kernels.ACTIVE_BACKEND != "numba":
        print("note: compiled backend inactive; both rows time the numpy fallback")

    # first call pays any compilation cost; keep it out of the timings
    _kernels._lorentzian_sums_impl(*full)
    _kernels._lorentzian_sums_numpy(*full)

    t_impl, v_impl = _time(_kernels._lorentzian_sums_impl, full, ns.repeats)
    t_np, v_np = _time(_kernels._lorentzian_sums_numpy, full, ns.repeats)
    rel = abs(v_impl - v_np) / max(abs(v_np), 1e-300)

    print(f"active backend: {_kernels.ACTIVE_BACKEND}")
    print(f"lattice: {n_points} points (L = {ns.L}, p_cut = {ns.pcut})")
    print(f"{'backend':<10} {'best time':>12} {'speedup':>9}")
    print(f"{_kernels.ACTIVE_BACKEND:<10} {t_impl:>11.4f}s {t_np / t_impl:>8.2f}x")
    print(f"{'numpy':<10} {t_np:>11.4f}s {'1.00x':>9}")
    print(f"backend agreement: {rel:.3e} relative")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
