"""Empirical success rate of random line sets against the first-moment lower bound.

    python3 demos/random_lines_vs_bound.py
"""

from pgblock import bounds, search

cases = [(3, 2, 6), (3, 2, 8), (4, 3, 8), (6, 3, 12), (6, 3, 14)]
print("N q  m   lower bound   estimate  +-stderr")
for N, q, m in cases:
    try:
        low = float(bounds.success_prob_lower(N, q, m))
    except bounds.RegimeViolation:
        low = float("nan")
    p, se = search.estimate_success_probability(N, q, m, trials=2048, seed=1)
    print(f"{N} {q} {m:2d}   {low:11.5f}   {p:8.4f}  {se:.4f}")

# in PG(2,2) the probability is exact by enumeration
print("PG(2,2), 3 lines, exact:", search.exact_success_probability(2, 2, 3))
