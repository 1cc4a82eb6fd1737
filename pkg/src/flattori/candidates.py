"""The laminated candidate family of flat tori and its closed forms.

The 8x8 integer matrix ``script_g(k)`` depends on ``k`` only through
``kappa = 2 ceil(k/2)``.  Its lower-right ``d x d`` blocks are the dual Gram
matrices of the candidate tori in dimension ``d``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import _catalog
from .enumeration import kth_normalized_eigenvalue
from .lattice import (
    FOUR_PI_SQ,
    IntGramMatrix,
    _check_dim,
    kappa_of,
    unit_ball_volume,
    weyl_constants,
)

# a_d in Lambda / (h_d pi^2) = (kappa^4 / (kappa^2 - a_d))^(1/d)
_SHIFT = {2: Fraction(1), 3: Fraction(4, 3), 4: Fraction(2), 5: Fraction(2),
          6: Fraction(5, 2), 7: Fraction(8, 3), 8: Fraction(3)}

MULT_KAPPA2 = {1: 2, 2: 6, 3: 12, 4: 24, 5: 40, 6: 72, 7: 126, 8: 240}
MULT_GENERIC = {1: 2, 2: 6, 3: 12, 4: 22, 5: 38, 6: 62, 7: 106, 8: 182}


def _pattern(kk: int) -> list[list[int]]:
    K = kk
    return [
        [2 * K, K, K, 0, K, 0, K, -4],
        [K, 2 * K, 0, 0, 0, 0, K, -4],
        [K, 0, 2 * K, 0, K, 0, 0, 0],
        [0, 0, 0, 2 * K, -K, K, -K, 0],
        [K, 0, K, -K, 2 * K, 0, K, 0],
        [0, 0, 0, K, 0, 2 * K, -K, 0],
        [K, K, 0, -K, K, -K, 2 * K, -4],
        [-4, -4, 0, 0, 0, 0, -4, 8],
    ]


def script_g(k: int) -> IntGramMatrix:
    """The 8x8 matrix with ``kappa^2`` substituted."""
    kappa = kappa_of(k)
    return IntGramMatrix(_pattern(kappa * kappa))


def det_polynomial(k: int, d: int) -> int:
    """``|det G_{k,d}| / 8`` as an exact integer."""
    _check_dim(d)
    K = kappa_of(k) ** 2
    return {
        1: 1,
        2: 2 * (K - 1),
        3: K * (3 * K - 4),
        4: 4 * K ** 2 * (K - 2),
        5: 4 * K ** 3 * (K - 2),
        6: 2 * K ** 4 * (2 * K - 5),
        7: K ** 5 * (3 * K - 8),
        8: 2 * K ** 6 * (K - 3),
    }[d]


@dataclass(frozen=True)
class CandidateGram:
    k: int
    d: int
    gram: IntGramMatrix

    @property
    def kappa(self) -> int:
        return kappa_of(self.k)

    @property
    def level(self) -> int:
        """Form value ``2 kappa^2`` of every catalog vector."""
        return 2 * self.kappa ** 2


def candidate_gram(k: int, d: int) -> CandidateGram:
    """Lower-right ``d x d`` block of :func:`script_g`."""
    _check_dim(d)
    if k < 1:
        raise ValueError("k must be >= 1")
    K = kappa_of(k) ** 2
    rows = _pattern(K)
    return CandidateGram(k, d, IntGramMatrix([r[8 - d:] for r in rows[8 - d:]]))


def closed_form_lambda(k: int, d: int) -> float:
    """Closed-form k-th normalized eigenvalue of the candidate torus."""
    _check_dim(d)
    kappa = kappa_of(k)
    h = weyl_constants(d).h_d
    if d == 1:
        return math.pi ** 2 * kappa ** 2
    a = float(_SHIFT[d])
    return h * math.pi ** 2 * (kappa ** 4 / (kappa ** 2 - a)) ** (1.0 / d)


def lower_bound_lambda(k: int, d: int) -> float:
    """Eigenvalue of the test torus ``diag(1, ..., 1, kappa/2)``."""
    if k < 1 or d < 1:
        raise ValueError("k and d must be >= 1")
    return 2.0 ** (2 - 2.0 / d) * math.pi ** 2 * kappa_of(k) ** (2.0 / d)


def predicted_multiplicity(k: int, d: int) -> int:
    """Multiplicity of the k-th eigenvalue of the candidate torus.

    ``k = 2`` shares ``kappa = 2`` (and hence the whole level) with ``k = 1``.
    """
    _check_dim(d)
    return MULT_KAPPA2[d] if kappa_of(k) == 2 else MULT_GENERIC[d]


@dataclass(frozen=True)
class VectorCatalog:
    """Catalog rows usable in dimension ``d`` for one k-regime."""

    k: int
    d: int
    regime: str  # "k12" or "k3"
    rows: tuple  # (index, 8-vector)
    dim_breaks: tuple  # (dimension, first index of its block)
    red_indices: frozenset

    def vectors(self) -> list[tuple[int, ...]]:
        """Catalog vectors in the last ``d`` coordinates, in index order."""
        return [v[8 - self.d:] for _, v in self.rows]

    def indices(self) -> list[int]:
        return [i for i, _ in self.rows]


def _first_nonzero(v) -> int:
    return next(i for i, x in enumerate(v) if x)


def catalog_vectors(k: int, d: int) -> VectorCatalog:
    """Vectors of the k-th eigenvalue level of the candidate torus."""
    _check_dim(d)
    if k < 1:
        raise ValueError("k must be >= 1")
    half = kappa_of(k) // 2
    k12 = half == 1
    rows, breaks, seen = [], [], set()
    for i12, i3, vec in _catalog.ROWS:
        idx = i12 if k12 else i3
        if idx is None:
            continue
        v = tuple(half if x is None else x for x in vec)
        dim_first = 8 - _first_nonzero(v)
        if dim_first not in seen:
            seen.add(dim_first)
            breaks.append((dim_first, idx))
        if dim_first <= d:
            rows.append((idx, v))
    red = frozenset() if k12 else frozenset(i for i, _ in rows if i in _catalog.RED_INDICES)
    return VectorCatalog(k, d, "k12" if k12 else "k3", tuple(rows), tuple(breaks), red)


def spanning_vectors(k: int, d: int) -> list[tuple[int, ...]]:
    """Catalog vectors picked by the spanning index set, in dimension ``d``."""
    _check_dim(d)
    half = kappa_of(k) // 2
    by_index = {i3: vec for _, i3, vec in _catalog.ROWS if i3 is not None}
    out = []
    for idx in _catalog.SPANNING_INDICES[:d * (d + 1) // 2]:
        v = tuple(half if x is None else x for x in by_index[idx])
        assert not any(v[:8 - d]), idx
        out.append(v[8 - d:])
    return out


@dataclass(frozen=True)
class HermiteCheck:
    d: int
    lambda_over_4pi2: float
    density: float
    lambda_value: float
    multiplicity: int


def packing_density(lambda1: float, d: int) -> float:
    """Density of the dual-lattice ball packing implied by ``Lambda_1``."""
    return unit_ball_volume(d) * (lambda1 / (4.0 * FOUR_PI_SQ)) ** (d / 2.0)


def hermite_check(d: int) -> HermiteCheck:
    """Enumerated ``Lambda_1`` of the candidate torus and its packing density."""
    cg = candidate_gram(1, d)
    lam, entry = kth_normalized_eigenvalue(cg.gram, 1)
    return HermiteCheck(d, lam.value / FOUR_PI_SQ, packing_density(lam.value, d), lam.value,
                        entry.multiplicity)
