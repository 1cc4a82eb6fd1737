"""LLL reduction driven by a Gram matrix.

Works in exact rationals when handed an integer Gram matrix and in floating
point otherwise.  Only the Gram matrix and the accumulated unimodular
transform are updated, so the same routine reduces either a basis (via
``B^t B``) or a quadratic form directly.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .lattice import Basis, IntGramMatrix


def _gso(g, n):
    """Gram-Schmidt coefficients ``mu`` and squared norms from a Gram matrix."""
    mu = [[0] * n for _ in range(n)]
    bstar = [0] * n
    for i in range(n):
        for j in range(i):
            s = g[i][j]
            for m in range(j):
                s -= mu[j][m] * mu[i][m] * bstar[m]
            mu[i][j] = s / bstar[j]
        s = g[i][i]
        for m in range(i):
            s -= mu[i][m] * mu[i][m] * bstar[m]
        bstar[i] = s
    return mu, bstar


def _nearest(x) -> int:
    return math.floor(x + Fraction(1, 2)) if isinstance(x, Fraction) else int(math.floor(x + 0.5))


def lll_gram(gram, delta: float = 0.99, max_swaps: int = 100_000):
    """Reduce the form ``gram``; return ``(reduced_gram, U)`` with ``U^t G U``.

    ``gram`` is a square list-like of ints (exact path) or floats.  ``U`` is an
    integer matrix (list of lists) with determinant +-1; its columns express the
    reduced basis in the original coordinates.
    """
    n = len(gram)
    exact = all(isinstance(x, (int, np.integer, Fraction)) for r in gram for x in r)
    if exact:
        g = [[Fraction(int(x)) if not isinstance(x, Fraction) else x for x in r] for r in gram]
        dl = Fraction(delta).limit_denominator(10 ** 6)
    else:
        g = [[float(x) for x in r] for r in gram]
        dl = float(delta)
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def reduce_column(k, mu):
        for j in range(k - 1, -1, -1):
            r = _nearest(mu[k][j])
            if r:
                rowk = [g[k][i] - r * g[j][i] for i in range(n)]
                # G' = E^t G E with E = I - r e_j e_k^t
                gkk = g[k][k] - 2 * r * g[j][k] + r * r * g[j][j]
                for i in range(n):
                    g[k][i] = rowk[i]
                    g[i][k] = rowk[i]
                g[k][k] = gkk
                for i in range(n):
                    u[i][k] -= r * u[i][j]
                for m in range(j + 1):
                    mu[k][m] -= r * (mu[j][m] if m < j else 1)

    k, swaps = 1, 0
    while k < n:
        mu, bstar = _gso(g, n)
        reduce_column(k, mu)
        mu, bstar = _gso(g, n)
        if bstar[k] >= (dl - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            g[k], g[k - 1] = g[k - 1], g[k]
            for r in g:
                r[k], r[k - 1] = r[k - 1], r[k]
            for r in u:
                r[k], r[k - 1] = r[k - 1], r[k]
            k = max(k - 1, 1)
            swaps += 1
            if swaps > max_swaps:
                raise RuntimeError("LLL did not terminate; input is numerically degenerate")
    if exact:
        g = [[int(x) for x in r] for r in g]
    return g, u


def lll_reduce_form(g: IntGramMatrix, delta: float = 0.99) -> tuple[IntGramMatrix, list[list[int]]]:
    reduced, u = lll_gram(g.entries, delta)
    return IntGramMatrix(reduced), u


def lll_reduce(b: Basis, delta: float = 0.99) -> tuple[Basis, np.ndarray]:
    """LLL-reduce the columns of ``b``.

    Returns the reduced basis ``B U`` and the unimodular ``U``.
    """
    if not 0.25 < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    m = b.entries
    _, u = lll_gram((m.T @ m).tolist(), delta)
    u = np.array(u, dtype=np.int64)
    return Basis(m @ u), u


def is_lll_reduced(b: Basis, delta: float = 0.99, tol: float = 1e-9) -> bool:
    """Check size reduction and the Lovasz condition on the columns of ``b``."""
    m = b.entries
    n = m.shape[1]
    mu, bstar = _gso((m.T @ m).tolist(), n)
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > 0.5 + tol:
                return False
    return all(bstar[i] >= (delta - mu[i][i - 1] ** 2) * bstar[i - 1] - tol * abs(bstar[i - 1])
               for i in range(1, n))
