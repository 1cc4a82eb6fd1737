"""First-order perturbation theory and exact stationarity certificates.

All directions are stored with the common positive factor
``4 pi^2 (det G)^(-1/d)`` divided out, so for a level ``q = v^t G v``

    M_hat = v v^t - (q / d) G^{-1}

has rational entries and every certificate is checked in exact arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import nnls

from . import _catalog
from .candidates import candidate_gram, catalog_vectors, spanning_vectors
from .lattice import IntGramMatrix, _check_dim, fraction_det, kappa_of
from .simplex import LinearProgram, solve_lp

Matrix = list  # list[list[Fraction]]


class StationarityError(ArithmeticError):
    pass


class MixedLevelError(StationarityError):
    pass


class RankDeficientError(StationarityError):
    pass


class NonzeroResidualError(StationarityError):
    def __init__(self, residual, message: str = "certificate residual is not zero"):
        super().__init__(message)
        self.residual = residual


class InfeasibleCertificateError(StationarityError):
    pass


@dataclass(frozen=True)
class PerturbationDirection:
    index: int
    matrix: tuple  # d x d Fractions
    lattice_vector: tuple


@dataclass(frozen=True)
class StationarityCertificate:
    coefficients: tuple
    residual: tuple

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for row in self.residual for x in row)

    def as_strings(self) -> list[str]:
        return [str(c) for c in self.coefficients]


@dataclass(frozen=True)
class SpanningCertificate:
    selected_indices: tuple
    f_matrix: tuple
    det_value: Fraction


@dataclass(frozen=True)
class GordanResult:
    stationary: bool
    certificate: StationarityCertificate | None = None
    witness: tuple | None = None  # improving delta G when not stationary
    normalized_index: int | None = None


# -- small exact helpers ---------------------------------------------------

def _frac_matrix(a) -> Matrix:
    return [[Fraction(x) for x in row] for row in a]


def frobenius(a, b) -> Fraction:
    return sum((x * y for ra, rb in zip(a, b) for x, y in zip(ra, rb)), Fraction(0))


def upper_flatten(a) -> list:
    """Row-major upper triangle (``i <= j``); off-diagonals are not doubled."""
    n = len(a)
    return [a[i][j] for i in range(n) for j in range(i, n)]


def _outer(v) -> Matrix:
    return [[Fraction(x * y) for y in v] for x in v]


def _check_symmetric(a) -> None:
    n = len(a)
    if any(len(r) != n for r in a) or any(a[i][j] != a[j][i] for i in range(n) for j in range(i)):
        raise ValueError("matrix must be square and symmetric")


def _direction_matrix(g0: IntGramMatrix, ginv: Matrix, v) -> Matrix:
    d = g0.dim
    q = Fraction(g0.form(v), d)
    return [[v[i] * v[j] - q * ginv[i][j] for j in range(d)] for i in range(d)]


def _inverse(g0: IntGramMatrix) -> Matrix:
    # IntGramMatrix is positive definite by construction, hence invertible
    return g0.inverse()


# -- perturbation formulas -------------------------------------------------

def perturbation_simple(g0: IntGramMatrix, v: Sequence[int], dg) -> Fraction:
    """First-order change of a simple eigenvalue along ``dg`` (det-free units).

    The true derivative is this value times ``4 pi^2 (det G0)^(-1/d)``.
    """
    if not any(v):
        raise ValueError("v must be nonzero")
    dg = _frac_matrix(dg)
    _check_symmetric(dg)
    return frobenius(_direction_matrix(g0, _inverse(g0), v), dg)


def perturbation_directions(g0: IntGramMatrix, vectors: Sequence[Sequence[int]]) -> list[PerturbationDirection]:
    """Split directions ``M_hat_j`` of one degenerate level."""
    if not vectors:
        raise ValueError("at least one vector is required")
    levels = {g0.form(v) for v in vectors}
    if len(levels) != 1:
        raise MixedLevelError(f"vectors lie on different levels: {sorted(levels)}")
    ginv = _inverse(g0)
    out = []
    for j, v in enumerate(vectors, start=1):
        m = _direction_matrix(g0, ginv, v)
        out.append(PerturbationDirection(j, tuple(tuple(r) for r in m), tuple(int(x) for x in v)))
    return out


def combination(directions: Sequence[PerturbationDirection], coefficients) -> Matrix:
    """Exact ``sum_j c_j M_hat_j``."""
    d = len(directions[0].matrix)
    out = [[Fraction(0)] * d for _ in range(d)]
    for c, dirn in zip(coefficients, directions):
        if c:
            for i in range(d):
                for j in range(d):
                    out[i][j] += c * dirn.matrix[i][j]
    return out


def _certificate(directions, coefficients) -> StationarityCertificate:
    coefficients = tuple(Fraction(c) for c in coefficients)
    residual = combination(directions, coefficients)
    return StationarityCertificate(coefficients, tuple(tuple(r) for r in residual))


# -- spanning and closed-form certificates ---------------------------------

def spanning_check(k: int, d: int) -> SpanningCertificate:
    """Exact determinant of the outer-product matrix ``F_d`` of the spanning set."""
    _check_dim(d)
    if k < 1:
        raise ValueError("k must be >= 1")
    vecs = spanning_vectors(k, d)
    cols = [upper_flatten(_outer(v)) for v in vecs]
    f = [[cols[c][r] for c in range(len(cols))] for r in range(len(cols))]
    det = fraction_det(f)
    if det == 0:
        raise RankDeficientError(f"outer products do not span for k={k}, d={d}")
    n = d * (d + 1) // 2
    return SpanningCertificate(tuple(_catalog.SPANNING_INDICES[:n]), tuple(tuple(r) for r in f), det)


def table5_coefficients(k: int, d: int) -> tuple[Fraction, Fraction | None]:
    """``(a_{k,d}, b_{k,d})``; ``b`` is ``None`` when no red index exists (d <= 2)."""
    _check_dim(d)
    K = Fraction(kappa_of(k) ** 2)
    ab = {
        1: (Fraction(1), None),
        2: ((2 * K - 4) / K, None),
        3: ((3 * K - 8) / K, (2 * K - 4) / K),
        4: (4 * (K - 4) / K, 2 * (K - 4) / K),
        5: (6 * (K - 4) / K, 2 * (K - 3) / K),
        6: (8 * (K - 5) / K, 2 * (K - 4) / K),
        7: (4 * (3 * K - 16) / K, 2 * (K - 4) / K),
        8: (18 * (K - 6) / K, (2 * K - 9) / K),
    }
    return ab[d]


def closed_form_coefficients(k: int, d: int) -> list[Fraction]:
    """The coefficient vector ``c°`` in catalog order."""
    cat = catalog_vectors(k, d)
    if cat.regime == "k12":
        return [Fraction(1)] * len(cat.rows)
    a, b = table5_coefficients(k, d)
    out = []
    for idx, _ in cat.rows:
        if idx == 1:
            out.append(a)
        elif idx in cat.red_indices:
            out.append(b)
        else:
            out.append(Fraction(1))
    return out


def candidate_directions(k: int, d: int) -> list[PerturbationDirection]:
    return perturbation_directions(candidate_gram(k, d).gram, catalog_vectors(k, d).vectors())


def closed_form_certificate(k: int, d: int) -> StationarityCertificate:
    """Check ``sum_j c°_j M_hat_j = 0`` exactly for the candidate torus."""
    if k < 1:
        raise ValueError("k must be >= 1")
    cert = _certificate(candidate_directions(k, d), closed_form_coefficients(k, d))
    if not cert.is_zero:
        raise NonzeroResidualError(cert.residual)
    if any(c < 0 for c in cert.coefficients):
        raise StationarityError("closed-form coefficients are negative")
    return cert


# -- min-norm certificate ---------------------------------------------------

def _flat_system(directions) -> np.ndarray:
    return np.array([[float(x) for x in upper_flatten(dirn.matrix)] for dirn in directions]).T


def _ldp(gmat: np.ndarray, h: np.ndarray) -> np.ndarray | None:
    """Least-distance program ``min |x|`` s.t. ``G x >= h`` through NNLS.

    Returns ``None`` when the constraints are inconsistent.
    """
    n = gmat.shape[1]
    e = np.vstack([gmat.T, h[None, :]])
    f = np.zeros(n + 1)
    f[-1] = 1.0
    u, _ = nnls(e, f, maxiter=50 * e.shape[1])
    r = e @ u - f
    if np.linalg.norm(r) < 1e-10 or r[-1] > -1e-12:
        return None
    return -r[:n] / r[-1]


def _integer_row(row) -> list[int]:
    den = math.lcm(*(x.denominator for x in row))
    ints = [int(x * den) for x in row]
    g = math.gcd(*ints)
    return [x // g for x in ints] if g > 1 else ints


def _independent_rows(rows: list[list[int]]) -> list[int]:
    """Indices of a maximal independent subset of integer rows, greedily in order."""
    echelon, keep = [], []  # (pivot column, reduced integer row)
    for idx, row in enumerate(rows):
        r = list(row)
        for piv, b in echelon:
            if r[piv]:
                f, h = b[piv], r[piv]
                r = [f * x - h * y for x, y in zip(r, b)]
                g = math.gcd(*r)
                if g > 1:
                    r = [x // g for x in r]
        piv = next((i for i, x in enumerate(r) if x), None)
        if piv is None:
            continue
        echelon.append((piv, r))
        keep.append(idx)
    return keep


def _solve_exact(mat: list[list[int]], rhs: list[int]) -> list[Fraction]:
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(mat, rhs)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [aug[i][n] for i in range(n)]


def _min_norm_on_support(directions, support: list[int], norm_idx: int) -> list[Fraction]:
    """Exact minimum-norm solution of ``A_S c = 0, c_norm = 1`` on ``support``.

    Rows are scaled to integers, which keeps the row space (and so the
    minimum-norm solution) unchanged.
    """
    flat = [upper_flatten(directions[j].matrix) for j in support]
    rows = [_integer_row([flat[s][r] for s in range(len(support))]) for r in range(len(flat[0]))]
    rows = [r for r in rows if any(r)]
    rows.append([int(j == norm_idx) for j in support])
    rhs = [0] * (len(rows) - 1) + [1]
    keep = _independent_rows(rows)
    if len(rows) - 1 not in keep:
        raise InfeasibleCertificateError("normalization is implied to vanish on this support")
    p = [rows[i] for i in keep]
    b = [rhs[i] for i in keep]
    ppt = [[sum(x * y for x, y in zip(ri, rj)) for rj in p] for ri in p]
    w = _solve_exact(ppt, b)
    c = [sum((p[i][s] * w[i] for i in range(len(p))), Fraction(0)) for s in range(len(support))]
    # rows dropped as dependent must also be satisfied
    for row, val in zip(rows, rhs):
        if sum((x * y for x, y in zip(row, c)), Fraction(0)) != val:
            raise InfeasibleCertificateError("support system is inconsistent")
    return c


def min_norm_certificate(g0: IntGramMatrix, directions: Sequence[PerturbationDirection],
                         normalized_index: int = 0) -> StationarityCertificate:
    """Minimum-norm ``c >= 0`` with ``sum c_j M_hat_j = 0`` and ``c_norm = 1``.

    The quadratic program is solved in floating point as a least-distance
    problem (active-set NNLS); its support is then re-solved and verified in
    exact rational arithmetic.

    Parameters
    ----------
    g0 : IntGramMatrix
        Form the directions were computed on (used for a dimension check).
    directions : list of PerturbationDirection
        Split directions of one level.
    normalized_index : int
        0-based position of the coefficient fixed to 1.

    Raises
    ------
    InfeasibleCertificateError
        When no nonnegative combination with the chosen normalization vanishes.
    """
    if not directions:
        raise ValueError("directions must be nonempty")
    if len(directions[0].matrix) != g0.dim:
        raise ValueError("directions do not match the form dimension")
    return _min_norm(directions, normalized_index)


def _min_norm(directions, normalized_index: int) -> StationarityCertificate:
    n = len(directions)
    a = _flat_system(directions)
    scale = max(np.abs(a).max(), 1.0)
    a = a / scale
    e1 = np.zeros(n)
    e1[normalized_index] = 1.0
    gmat = np.vstack([np.eye(n), a, -a, e1, -e1])
    h = np.concatenate([np.zeros(n + 2 * a.shape[0]), [1.0, -1.0]])
    x = _ldp(gmat, h)
    if x is None:
        raise InfeasibleCertificateError("no nonnegative combination vanishes")
    cutoff = 1e-9 * max(x.max(), 1.0)
    support = sorted({j for j in range(n) if x[j] > cutoff} | {normalized_index})
    c_s = _min_norm_on_support(directions, support, normalized_index)
    if any(c < 0 for c in c_s):
        raise InfeasibleCertificateError("exact re-solve on the float support left the cone")
    coeffs = [Fraction(0)] * n
    for j, c in zip(support, c_s):
        coeffs[j] = c
    cert = _certificate(directions, coeffs)
    if not cert.is_zero:
        raise NonzeroResidualError(cert.residual)
    return cert


# -- Gordan alternative -----------------------------------------------------

def _improving_direction(directions) -> tuple | None:
    """Solve ``max t`` s.t. ``<M_hat_j, X> >= t``, ``|X_ij| <= 1``; verify exactly."""
    d = len(directions[0].matrix)
    pairs = [(i, j) for i in range(d) for j in range(i, d)]
    nv = len(pairs)
    a_ub = []
    for dirn in directions:
        row = [-(1.0 if i == j else 2.0) * float(dirn.matrix[i][j]) for i, j in pairs]
        a_ub.append(row + [1.0])
    lp = LinearProgram(np.r_[np.zeros(nv), 1.0], np.array(a_ub), np.zeros(len(directions)),
                       bounds=[(-1.0, 1.0)] * nv + [(None, 1.0)])
    res = solve_lp(lp)
    if res.x[-1] <= 1e-9:
        return None
    for limit in (10 ** 6, None):
        x = np.clip(res.x[:nv], -1.0, 1.0)
        vals = [Fraction(float(t)) if limit is None else Fraction(float(t)).limit_denominator(limit) for t in x]
        m = [[Fraction(0)] * d for _ in range(d)]
        for (i, j), t in zip(pairs, vals):
            m[i][j] = m[j][i] = t
        if all(frobenius(dirn.matrix, m) > 0 for dirn in directions):
            return tuple(tuple(r) for r in m)
    return None


def gordan_stationarity_test(directions: Sequence[PerturbationDirection]) -> GordanResult:
    """Decide stationarity of one level by Gordan's alternative.

    Either some nonnegative nonzero ``c`` annihilates the directions (returned
    as an exact certificate) or a symmetric ``dG`` raises every branch of the
    level to first order (returned as an exactly verified witness).
    """
    if not directions:
        raise ValueError("directions must be nonempty")
    witness = _improving_direction(directions)
    if witness is not None:
        return GordanResult(False, witness=witness)
    for idx in range(len(directions)):
        try:
            cert = _min_norm(directions, idx)
        except InfeasibleCertificateError:
            continue
        return GordanResult(True, certificate=cert, normalized_index=idx)
    raise StationarityError("neither a certificate nor an improving direction was found")
