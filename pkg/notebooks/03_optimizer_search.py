"""
Searching for optimal tori
==========================

Sequential linear programming from random starts, followed by LLL reduction
and rational reconstruction of the optimal Gram matrix.
"""

import math

import numpy as np

from flattori.candidates import closed_form_lambda
from flattori.lattice import Basis
from flattori.optimizer import matches_candidate, multi_start, optimize, recover_form

# from the square lattice the first step has no first-order gain; the probe
# step still finds the way to the hexagonal torus
state = optimize(2, 1, Basis.identity(2))
print(state.status, state.iteration, state.lam, 8 * math.pi ** 2 / math.sqrt(3))
for rec in state.trace:
    print(rec["iter"], round(rec["lambda"], 6), round(rec["beta"], 4), rec["accepted"])

rg = recover_form(state)
print(rg.gram.entries, matches_candidate(rg.gram, 1, 2))

# multi-start statistics: most runs reach the candidate value
for d, k in [(2, 3), (3, 1), (4, 3)]:
    runs = multi_start(d, k, 20, seed=1)
    lams = np.array([r.lam for r in runs])
    ref = closed_form_lambda(k, d)
    hit = np.abs(lams / ref - 1) <= 1e-5
    print(f"d={d} k={k}  reached {hit.sum()}/20  best={lams.max():.4f}  candidate={ref:.4f}")
    print("  other local maxima:", sorted({round(float(x), 3) for x in lams[~hit]}))
