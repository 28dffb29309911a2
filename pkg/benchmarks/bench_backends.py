#!/usr/bin/env python3
"""Compare the two rational backends on the hot kernels.

The heavy inner loops are exact rational arithmetic: series convolution,
series inversion, and full identity checks.  The compiled backend is
gmpy2.mpq; the pure fallback is fractions.Fraction.  This script re-executes
itself under each backend (selection happens at import) and prints a table.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

KERNELS = ("theta_product", "series_inverse", "numerator", "identity_sweep")


def run_kernel(name, repeat):
    from thetaq._rational import rat
    from thetaq.identities import run_identity
    from thetaq.numerators import clear_cache, numerator_half
    from thetaq.thetalib import theta_jm

    best = None
    for _ in range(repeat):
        clear_cache()
        t0 = time.perf_counter()
        if name == "theta_product":
            a = theta_jm(rat(1, 2), 3, 30)
            b = theta_jm(rat(3, 2), 2, 30)
            for _ in range(5):
                _ = a * b
        elif name == "series_inverse":
            th = theta_jm(rat(-1, 2), 1, 24)
            for _ in range(5):
                _ = th.inverse()
        elif name == "numerator":
            _ = numerator_half(5, 2, 6)
        elif name == "identity_sweep":
            for cid in ("S2.mumford.item1", "S2.squares.item1",
                        "S3.prod.K2xK2.case1", "S5.UeqV.m3.half"):
                r = run_identity(cid)
                assert r.status == "pass", cid
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best


def child(backend, repeat):
    env = dict(os.environ, THETAQ_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, __file__, "--child", "--repeat", str(repeat)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true")
    args = ap.parse_args()

    if args.child:
        from thetaq._rational import BACKEND

        times = {name: run_kernel(name, args.repeat) for name in KERNELS}
        print(json.dumps({"backend": BACKEND, "times": times}))
        return

    results = {}
    for backend in ("gmp", "fraction"):
        try:
            results[backend] = child(backend, args.repeat)
        except subprocess.CalledProcessError as exc:
            print(f"{backend}: unavailable ({exc.stderr.strip().splitlines()[-1]})")
    if not results:
        return

    width = max(len(k) for k in KERNELS)
    header = f"{'kernel':<{width}}"
    for backend in results:
        header += f"  {results[backend]['backend']:>12}"
    if len(results) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    for name in KERNELS:
        row = f"{name:<{width}}"
        vals = []
        for backend in results:
            t = results[backend]["times"][name]
            vals.append(t)
            row += f"  {t * 1000:>10.1f}ms"
        if len(vals) == 2 and vals[0] > 0:
            row += f"  {vals[1] / vals[0]:>7.2f}x"
        print(row)


if __name__ == "__main__":
    main()
