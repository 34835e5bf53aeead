#!/usr/bin/env python3
"""Compares the compiled scan kernel against its pure-Python twin.

Usage: python3 benchmarks/bench_lexer.py [size_kb ...]
"""

import random
import sys
import time

sys.path.insert(0, "tests")

from proofdock import _scan_py
from proofdock.lexer import DEFAULT_KEYWORDS

from genvalues import random_proof_script

try:
    from proofdock import _scan
except ImportError:
    _scan = None


def bench(kernel, data, kwset, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        tokens = kernel.scan(data, kwset)
        best = min(best, time.perf_counter() - t0)
    return best, len(tokens)


def main():
    sizes_kb = [int(s) for s in sys.argv[1:]] or [10, 100, 1000]
    kwset = frozenset(k.encode() for k in DEFAULT_KEYWORDS)
    rng = random.Random(0)
    print(f"{'size':>8}  {'tokens':>8}  {'pure':>10}  {'compiled':>10}  {'speedup':>8}")
    for kb in sizes_kb:
        data = random_proof_script(rng, kb * 1000).encode("utf-8")
        pure_t, ntok = bench(_scan_py, data, kwset)
        row = f"{len(data) // 1000:>6}kB  {ntok:>8}  {pure_t * 1e3:>8.2f}ms"
        if _scan is not None:
            fast_t, ntok2 = bench(_scan, data, kwset)
            assert _scan.scan(data, kwset) == _scan_py.scan(data, kwset)
            row += f"  {fast_t * 1e3:>8.2f}ms  {pure_t / fast_t:>7.1f}x"
        else:
            row += "  (compiled kernel not built)"
        print(row)


if __name__ == "__main__":
    main()
