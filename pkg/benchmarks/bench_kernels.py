"""Time the string-corpus checks under the numba kernel and the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [max_len]
"""
import sys
import time

from foliated_adjoint._kernels import check_block, corpus_block, corpus_check


def timed(use_numba, max_len):
    t0 = time.perf_counter()
    count, fails = corpus_check(max_len=max_len, use_numba=use_numba)
    return time.perf_counter() - t0, count, fails


def main():
    max_len = int(sys.argv[1]) if len(sys.argv) > 1 else 8
    # compile outside the timed region
    check_block(corpus_block(2, 0, 4), use_numba=True)
    rows = []
    for label, flag in (("numba", True), ("numpy", False)):
        secs, count, fails = timed(flag, max_len)
        rows.append((label, secs, count, sum(fails.values())))
    for label, secs, count, bad in rows:
        print(f"{label:6s} {secs:8.3f}s  strings={count}  failures={bad}")
    print(f"speedup numpy/numba: {rows[1][1] / rows[0][1]:.2f}x")


if __name__ == "__main__":
    main()
