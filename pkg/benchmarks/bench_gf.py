#!/usr/bin/env python3
"""Throughput comparison of the finite-field stream kernels.

Runs the same GF(256) matrix-stream products through the pure-Python
loop and, when built, the compiled extension, for code shapes the three
codecs actually use.  Invoke as `python3 benchmarks/bench_gf.py`.
"""

import random
import time

from smdc.gf import GF256, matmul_python

try:
    from smdc import _gfcore
except ImportError:
    _gfcore = None

SHAPES = [
    # (rows, cols, stream length): encoder fan-out and decode shapes
    (5, 3, 1 << 12),
    (5, 3, 1 << 16),
    (10, 4, 1 << 16),
    (50, 10, 1 << 14),
]


def run(kernel, mat, rows, cols, src, n, repeats):
    start = time.perf_counter()
    for _ in range(repeats):
        kernel(mat, rows, cols, src, n, GF256.exp, GF256.log)
    elapsed = time.perf_counter() - start
    processed = repeats * rows * n / 1e6
    return processed / elapsed, elapsed


def main():
    rng = random.Random(0)
    print(f"{'shape':>16}  {'pure MB/s':>10}  {'compiled MB/s':>14}  {'speedup':>8}")
    for rows, cols, n in SHAPES:
        mat = bytes(rng.randrange(256) for _ in range(rows * cols))
        src = bytes(rng.randrange(256) for _ in range(cols * n))
        pure_repeats = max(1, (1 << 20) // (rows * n))
        pure_rate, _ = run(matmul_python, mat, rows, cols, src, n, pure_repeats)
        label = f"{rows}x{cols}x{n}"
        if _gfcore is None:
            print(f"{label:>16}  {pure_rate:>10.1f}  {'(not built)':>14}  {'-':>8}")
            continue
        fast_repeats = max(1, (1 << 26) // (rows * n))
        fast_rate, _ = run(_gfcore.matmul, mat, rows, cols, src, n, fast_repeats)
        print(
            f"{label:>16}  {pure_rate:>10.1f}  {fast_rate:>14.1f}"
            f"  {fast_rate / pure_rate:>7.1f}x"
        )
    out = matmul_python(b"\x02", 1, 1, b"\x80", 1, GF256.exp, GF256.log)
    assert out == b"\x1d"
    if _gfcore is not None:
        assert _gfcore.matmul(b"\x02", 1, 1, b"\x80", 1, GF256.exp, GF256.log) == b"\x1d"


if __name__ == "__main__":
    main()
