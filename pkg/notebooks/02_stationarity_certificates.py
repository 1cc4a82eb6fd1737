"""
Exact stationarity certificates
===============================

Each catalog vector v_j of the k-th level gives a direction
M_j = v_j v_j^t - (q/d) G^{-1}; the candidate is stationary when a nonnegative
combination of the M_j vanishes.  Everything here is exact rational arithmetic.
"""

from flattori.candidates import candidate_gram, catalog_vectors
from flattori.enumeration import enumerate_up_to
from flattori.lattice import IntGramMatrix
from flattori.stationarity import (
    candidate_directions, closed_form_certificate, gordan_stationarity_test,
    min_norm_certificate, perturbation_directions, spanning_check,
)

# d=3, k=3: the six level vectors and the closed-form coefficients
print(catalog_vectors(3, 3).vectors())
cert = closed_form_certificate(3, 3)
print(cert.as_strings(), "residual zero:", cert.is_zero)

# the outer products of the spanning set have |det F| = kappa^2 / 4
for d in (2, 5, 8):
    print(d, [str(spanning_check(k, d).det_value) for k in (1, 3, 5, 7)])

# certificates are not unique for d >= 4, yet the minimum-norm one turns out
# to be the closed form rescaled to c_1 = 1
for d in (4, 6, 8):
    g = candidate_gram(3, d).gram
    qp = min_norm_certificate(g, candidate_directions(3, d)).coefficients
    cf = closed_form_certificate(3, d).coefficients
    print(d, [str(c) for c in cf[:6]], [str(c) for c in qp[:6]],
          "proportional:", all(a / cf[0] == b for a, b in zip(cf, qp)))

# Gordan's alternative on a form that is not stationary: an improving dG exists
g = IntGramMatrix([[3, 1], [1, 5]])
level = enumerate_up_to(g, 3).entries[0]
res = gordan_stationarity_test(perturbation_directions(g, level.representatives))
print("stationary:", res.stationary, "witness:", res.witness)
