#!/usr/bin/env python3
# Copyright 2026 The edgeroof Authors.
# SPDX-License-Identifier: Apache-2.0
"""Synthesize a microbenchmark measurement CSV from known device coefficients.

GEMM kernels stand in for compute samples, ReLU/transpose sweeps for memory
samples. Runtime follows the time roofline and power follows the energy
model, each with multiplicative noise.

Usage: gen_measurements.py OUT.csv [--peak-tflops 14.7] [--peak-gbps 164.4]
       [--eps-flop-pj 3.86] [--eps-mop-pj 141.38] [--static-w 17.9]
       [--noise 0.01] [--runs 10] [--seed 1]
"""
import argparse
import random


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--peak-tflops", type=float, default=14.7)
    ap.add_argument("--peak-gbps", type=float, default=164.4)
    ap.add_argument("--eps-flop-pj", type=float, default=3.86)
    ap.add_argument("--eps-mop-pj", type=float, default=141.38)
    ap.add_argument("--static-w", type=float, default=17.9)
    ap.add_argument("--noise", type=float, default=0.01)
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=1)
    a = ap.parse_args()

    rng = random.Random(a.seed)
    peak, bw = a.peak_tflops * 1e12, a.peak_gbps * 1e9
    ef, em, p0 = a.eps_flop_pj * 1e-12, a.eps_mop_pj * 1e-12, a.static_w

    def jitter() -> float:
        return 1.0 + rng.uniform(-a.noise, a.noise)

    rows = []
    run = 0
    for _ in range(a.runs):
        rows.append((run, "idle", 0, 0, 0, 1.0, p0 * jitter()))
        run += 1
    # Smaller sizes under-utilise the device; the largest reaches the peak.
    for kind, sizes in (("compute", (1024, 2048, 4096, 8192)), ("memory", (1 << 22, 1 << 24, 1 << 26, 1 << 28))):
        for i, n in enumerate(sizes):
            util = (0.6, 0.8, 0.93, 1.0)[i]
            if kind == "compute":
                w, q = 2 * n**3, 3 * 4 * n * n
                t_ideal = w / (peak * util)
            else:
                w, q = n, 2 * 4 * n
                t_ideal = q / (bw * util)
            for _ in range(a.runs):
                t = t_ideal * jitter()
                e = ef * w + em * q + p0 * t
                rows.append((run, kind, n, w, q, t, e / t * jitter()))
                run += 1

    with open(a.out, "w") as f:
        f.write("# synthetic: peak_tflops=%g peak_gbps=%g eps_flop_pj=%g eps_mop_pj=%g static_w=%g noise=%g seed=%d\n"
                % (a.peak_tflops, a.peak_gbps, a.eps_flop_pj, a.eps_mop_pj, a.static_w, a.noise, a.seed))
        f.write("run_id,kind,size,flop,mop_bytes,time_s,power_w\n")
        for r in rows:
            f.write("%d,%s,%d,%d,%d,%.9g,%.9g\n" % r)


if __name__ == "__main__":
    main()
