"""Recover an integer Gram matrix from a floating-point one.

Optimal forms are rational up to scale: after dividing by the smallest
nonzero entry every entry is a small-denominator rational.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lattice import IntGramMatrix

MAX_DENOMINATOR = 64


class NotRationalizableError(ValueError):
    def __init__(self, residual: float, message: str | None = None):
        super().__init__(message or f"matrix is not rational within tolerance (residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class RationalizedGram:
    """``g_float ~= scale * gram`` with ``gram`` primitive."""

    gram: IntGramMatrix
    scale: float
    residual: float


def rationalize_gram(g_float, tol: float = 1e-6, max_den: int = MAX_DENOMINATOR) -> RationalizedGram:
    """Integer matrix proportional to ``g_float``.

    Parameters
    ----------
    g_float : array_like
        Symmetric real matrix.
    tol : float
        Largest accepted deviation of a normalized entry from its rational.
    max_den : int
        Denominator bound of the continued-fraction approximants.

    Returns
    -------
    RationalizedGram

    Raises
    ------
    NotRationalizableError
        If some entry is farther than ``tol`` from every admissible rational.
    """
    g = np.asarray(g_float, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(g, g.T, rtol=0, atol=tol * np.abs(g).max()):
        raise ValueError("matrix must be symmetric")
    g = 0.5 * (g + g.T)
    mags = np.abs(g)
    nonzero = mags[mags > tol * mags.max()]
    unit = nonzero.min()
    norm = g / unit
    approx = [[Fraction(float(x)).limit_denominator(max_den) for x in row] for row in norm]
    residual = max(abs(float(a) - x) for arow, row in zip(approx, norm) for a, x in zip(arow, row))
    if residual > tol:
        raise NotRationalizableError(residual)
    den = math.lcm(*(a.denominator for row in approx for a in row))
    ints = [[int(a * den) for a in row] for row in approx]
    c = math.gcd(*(x for row in ints for x in row))
    ints = [[x // c for x in row] for row in ints]
    return RationalizedGram(IntGramMatrix(ints), float(unit * c / den), residual)
