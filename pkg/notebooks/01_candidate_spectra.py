"""
Spectra of the laminated candidate tori
=======================================

Build the dual Gram matrices G_{k,d}, enumerate their spectra exactly and
compare the k-th normalized eigenvalue with the closed form and with Weyl's law.
"""

import math

import numpy as np

from flattori.candidates import candidate_gram, closed_form_lambda, hermite_check
from flattori.enumeration import Enumerator, enumerate_up_to
from flattori.lattice import normalized_eigenvalue_from_form, weyl_constants

# the d=2 member is the equilateral family [[2 kappa^2, -4], [-4, 8]]
for k in (1, 3, 5):
    print(k, candidate_gram(k, 2).gram.entries)

# first eigenvalue level of each candidate: the classical densest lattices
for d in range(1, 9):
    h = hermite_check(d)
    print(f"d={d}  Lambda_1={h.lambda_value:.4f}  kissing={h.multiplicity}  density={h.density:.4f}")

# a few levels of the d=4 candidate at k=7, with their normalized eigenvalues
g = candidate_gram(7, 4).gram
for e in enumerate_up_to(g, 2 * 8 ** 2).entries[:6]:
    print(e.q_value, e.multiplicity, round(normalized_eigenvalue_from_form(g, e.q_value), 3))

# enumeration against the closed form, and the gain over Weyl's law
ks = np.unique(np.geomspace(1, 10 ** 4, 12).astype(int))
for d in (2, 4, 8):
    e = None
    rows = []
    for k in ks:
        g = candidate_gram(int(k), d).gram
        q, _ = Enumerator(g).kth_value(int(k))
        lam = normalized_eigenvalue_from_form(g, q)
        weyl = weyl_constants(d).g_d * math.pi ** 2 * k ** (2 / d)
        rows.append((int(k), lam, abs(lam / closed_form_lambda(int(k), d) - 1), lam / weyl))
    print(f"d={d}")
    for k, lam, rel, gain in rows:
        print(f"  k={k:6d}  Lambda={lam:10.3f}  rel.err={rel:.1e}  Lambda/Weyl={gain:.3f}")
