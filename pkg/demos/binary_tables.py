"""Random search for small cutting sets and higgledy-piggledy line sets of PG(N,2).

    python3 demos/binary_tables.py [N_MAX] [BUDGET]

Walks down from the published sizes until plain random search stops
succeeding within the budget.  N_MAX defaults to 6.
"""

import sys
import time

from pgblock import search

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 6
budget = int(sys.argv[2]) if len(sys.argv) > 2 else 20000

print("N  points(ref)  lines(ref)  union(ref)  seconds")
for N in range(2, n_max + 1):
    t0 = time.perf_counter()
    p = search.smallest_found(N, "points", budget=budget)
    line = search.smallest_found(N, "lines", budget=budget, collect=8)
    print(
        f"{N:<2} {p.found!s:>6}({p.reference:>2})  {line.found!s:>6}({line.reference:>2})"
        f"  {line.union_size!s:>6}({search.REFERENCE_HPUNIONS[N]:>2})  {time.perf_counter() - t0:7.1f}"
    )
