"""
Dynamic programming versus enumeration
======================================

The grouping step can be solved by trying every way of cutting n
fragments into m contiguous groups, C(n-1, m-1) of them. The dynamic
program scores at most n*n*m candidate groups instead.
"""

import math
import random
import time

from wordalign import SubSegment, align, brute_force_align

rng = random.Random(0)
print(f"{'n':>3} {'m':>3} {'partitions':>11} {'DP updates':>11} {'brute ms':>9} {'DP ms':>7}")
for n in (4, 6, 8, 10, 12):
    m = n // 2
    pieces = ["".join(rng.choice("abc") for _ in range(2)) for _ in range(n)]
    words = ["".join(rng.choice("abc") for _ in range(3)) for _ in range(m)]
    subs = [SubSegment(p, i, i + 1, 0, 3 * i) for i, p in enumerate(pieces)]
    t0 = time.perf_counter()
    bf = brute_force_align(subs, words)
    t1 = time.perf_counter()
    dp = align(subs, words)
    t2 = time.perf_counter()
    assert dp.total_cost == bf.total_cost
    print(f"{n:3d} {m:3d} {math.comb(n - 1, m - 1):11d} {dp.evaluations:11d} "
          f"{(t1 - t0) * 1e3:9.2f} {(t2 - t1) * 1e3:7.2f}")

# %%
# Beyond a dozen fragments enumeration is refused; the DP keeps going.
subs = [SubSegment("ab", i, i + 1, 0, 3 * i) for i in range(60)]
res = align(subs, ["abab"] * 30)
print("60 fragments, 30 words:", res.total_cost, "cost,", res.evaluations, "updates")
