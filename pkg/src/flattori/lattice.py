"""Lattices, Gram matrices and volume-normalized eigenvalues of flat tori.

A flat torus ``R^d / B Z^d`` has Laplacian eigenvalues ``4 pi^2 |B^{-t} v|^2``
for integer ``v``.  Everything downstream works with the Gram matrix
``G = B^{-1} B^{-t}`` of the dual lattice, so that the squared dual length of
``v`` is the quadratic form ``v^t G v``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

MAX_DIM = 8
FOUR_PI_SQ = 4.0 * math.pi ** 2


class LatticeError(ValueError):
    """Base class for invalid lattice input."""


class SingularMatrixError(LatticeError):
    pass


class NotPositiveDefiniteError(LatticeError):
    def __init__(self, pivot: int, message: str | None = None):
        self.pivot = pivot
        super().__init__(message or f"matrix is not positive definite (pivot {pivot})")


class DimensionError(LatticeError):
    pass


def _check_dim(d: int, cap: int = MAX_DIM) -> None:
    if not 1 <= d <= cap:
        raise DimensionError(f"dimension must lie in [1, {cap}], got {d}")


@dataclass(frozen=True)
class Basis:
    """Real lattice basis; columns are the generators."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"basis must be square, got shape {m.shape}")
        _check_dim(m.shape[0])
        if not np.all(np.isfinite(m)):
            raise LatticeError("basis has non-finite entries")
        scale = max(1.0, float(np.abs(m).max())) ** m.shape[0]
        if abs(np.linalg.det(m)) < 1e-12 * scale:
            raise SingularMatrixError("basis matrix is singular")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, d: int) -> "Basis":
        return cls(np.eye(d))

    def __mul__(self, alpha: float) -> "Basis":
        return Basis(alpha * self.entries)

    __rmul__ = __mul__


def _as_int(x) -> int:
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("boolean entries are not allowed")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, str):
        return int(x)
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    if isinstance(x, (float, np.floating)) and float(x).is_integer():
        return int(x)
    raise TypeError(f"entry {x!r} is not an integer")


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    a = [[int(x) for x in r] for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def fraction_det(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant of a rational matrix (Gaussian elimination)."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        inv = 1 / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f:
                ri, rk = a[i], a[k]
                for j in range(k, n):
                    ri[j] -= f * rk[j]
    return det


def fraction_inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination over the rationals."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                rk = a[k]
                a[i] = [x - f * y for x, y in zip(a[i], rk)]
    return [r[n:] for r in a]


@dataclass(frozen=True)
class IntGramMatrix:
    """Symmetric positive-definite integer matrix, stored as nested tuples."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(_as_int(x) for x in r) for r in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionError("Gram matrix must be square and nonempty")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise LatticeError(f"Gram matrix is not symmetric at ({i}, {j})")
        for m in range(1, n + 1):
            if bareiss_det([r[:m] for r in rows[:m]]) <= 0:
                raise NotPositiveDefiniteError(m - 1)
        object.__setattr__(self, "entries", rows)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def det(self) -> int:
        return bareiss_det(self.entries)

    def form(self, v: Sequence[int]) -> int:
        """Exact value of ``v^t G v``."""
        v = [int(x) for x in v]
        return sum(vi * sum(gij * vj for gij, vj in zip(row, v))
                   for vi, row in zip(v, self.entries) if vi)

    def to_numpy(self, dtype=float) -> np.ndarray:
        return np.array(self.entries, dtype=dtype)

    def inverse(self) -> list[list[Fraction]]:
        return fraction_inverse(self.entries)

    def transform(self, u: Sequence[Sequence[int]]) -> "IntGramMatrix":
        """Return ``U^t G U`` for an integer matrix ``U``."""
        n = self.dim
        u = [[int(x) for x in r] for r in u]
        gu = [[sum(self.entries[i][m] * u[m][j] for m in range(n)) for j in range(n)]
              for i in range(n)]
        return IntGramMatrix([[sum(u[m][i] * gu[m][j] for m in range(n)) for j in range(n)]
                              for i in range(n)])

    def submatrix(self, size: int) -> "IntGramMatrix":
        """Lower-right ``size x size`` block."""
        off = self.dim - size
        return IntGramMatrix([r[off:] for r in self.entries[off:]])

    def content(self) -> int:
        """gcd of all entries."""
        return math.gcd(*(x for r in self.entries for x in r))

    def primitive(self) -> "IntGramMatrix":
        c = self.content()
        return IntGramMatrix([[x // c for x in r] for r in self.entries])

    @classmethod
    def identity(cls, d: int) -> "IntGramMatrix":
        return cls([[int(i == j) for j in range(d)] for i in range(d)])

    @classmethod
    def diag(cls, values: Sequence[int]) -> "IntGramMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def to_json(self, scale: Fraction = Fraction(1)) -> dict:
        return matrix_to_json(self.entries, scale)

    @classmethod
    def from_json(cls, obj) -> "IntGramMatrix":
        rows, scale = matrix_from_json(obj)
        return cls(rows)


def matrix_to_json(rows, scale: Fraction = Fraction(1)) -> dict:
    """Repo-wide matrix format; true matrix is ``scale_num/scale_den * entries``."""
    scale = Fraction(scale)
    out_rows = []
    for r in rows:
        out = []
        for x in r:
            x = int(x) if isinstance(x, (int, np.integer)) else x
            # large integers go out as decimal strings to survive JSON readers
            out.append(x if isinstance(x, int) and abs(x) < 2 ** 53 else str(x))
        out_rows.append(out)
    return {"dim": len(out_rows), "entries": out_rows,
            "scale_num": scale.numerator, "scale_den": scale.denominator}


def matrix_from_json(obj) -> tuple[list[list[int]], Fraction]:
    if isinstance(obj, str):
        obj = json.loads(obj)
    rows = [[int(x) for x in r] for r in obj["entries"]]
    if obj.get("dim", len(rows)) != len(rows):
        raise DimensionError("dim field does not match entries")
    scale = Fraction(int(obj.get("scale_num", 1)), int(obj.get("scale_den", 1)))
    return rows, scale


@dataclass(frozen=True)
class NormalizedEigenvalue:
    value: float
    k: int

    @property
    def kappa(self) -> int:
        return kappa_of(self.k)


def kappa_of(k: int) -> int:
    """Even index ``2 * ceil(k / 2)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2 * ((k + 1) // 2)


def dual_basis(b: Basis) -> Basis:
    """Inverse transpose ``B^{-t}``."""
    return Basis(np.linalg.inv(b.entries).T)


def gram_of_inverse(b: Basis) -> np.ndarray:
    """``G = B^{-1} B^{-t}``; the quadratic form of the dual lattice."""
    binv = np.linalg.inv(b.entries)
    g = binv @ binv.T
    return 0.5 * (g + g.T)


def cholesky(g: IntGramMatrix | np.ndarray) -> np.ndarray:
    """Lower-triangular ``L`` with ``L L^t = g``.

    Raises :class:`NotPositiveDefiniteError` naming the first failing pivot.
    """
    a = g.to_numpy() if isinstance(g, IntGramMatrix) else np.asarray(g, dtype=float)
    n = a.shape[0]
    low = np.zeros_like(a)
    for j in range(n):
        s = a[j, j] - low[j, :j] @ low[j, :j]
        if not s > 0:
            raise NotPositiveDefiniteError(j)
        low[j, j] = math.sqrt(s)
        for i in range(j + 1, n):
            low[i, j] = (a[i, j] - low[i, :j] @ low[j, :j]) / low[j, j]
    return low


def det_root(det: int, d: int) -> float:
    """``det ** (1/d)`` for possibly huge integers without float overflow."""
    if det <= 0:
        raise NotPositiveDefiniteError(d - 1, "determinant must be positive")
    return math.exp(math.log(det) / d)


def normalized_eigenvalue_from_form(g: IntGramMatrix, q_value: int) -> float:
    """``4 pi^2 (det g)^(-1/d) q``: the volume-normalized eigenvalue of a level."""
    if q_value <= 0:
        raise ValueError("q_value must be positive")
    return FOUR_PI_SQ * q_value / det_root(g.det(), g.dim)


def normalized_eigenvalue_float(gram: np.ndarray, q_value: float) -> float:
    d = gram.shape[0]
    return FOUR_PI_SQ * q_value / np.linalg.det(gram) ** (1.0 / d)


@dataclass(frozen=True)
class WeylConstants:
    g_d: float
    omega_d: float
    h_d: float

    @property
    def ratio(self) -> float:
        return self.h_d / self.g_d


def unit_ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1)


_H = {
    1: 1.0,
    2: 2.0,
    3: 4.0 * 3.0 ** (-1.0 / 3.0),
    4: 2.0 ** 1.75,
    5: 4.0,
    6: 2.0 ** (13.0 / 6.0),
    7: 4.0 * (16.0 / 3.0) ** (1.0 / 7.0),
    8: 2.0 ** 2.5,
}


def weyl_constants(d: int) -> WeylConstants:
    """Weyl-law constant ``g_d``, unit-ball volume and the constant ``h_d``.

    ``h_d pi^2 kappa^(2/d)`` is a lower bound for the eigenvalues of the
    candidate family, so ``h_d / g_d`` measures how far they beat Weyl's law.
    """
    _check_dim(d)
    omega = unit_ball_volume(d)
    return WeylConstants(g_d=4.0 * omega ** (-2.0 / d), omega_d=omega, h_d=_H[d])
