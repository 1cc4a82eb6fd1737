"""Exact enumeration of short vectors of an integer quadratic form.

The form is first LLL-reduced.  A Fincke-Pohst depth-first search then walks
every coordinate except the innermost one, pruning with a floating-point
Cholesky factor that is deliberately widened.  At the innermost level the
admissible coordinate range is solved exactly from the integer quadratic
``a t^2 + 2 b t + c <= bound`` with ``math.isqrt``, so every value, count and
vector returned is exact.

Each innermost range is kept as a *leaf line* ``(b, c, tmin, rest)``.  Once
the lines for a bound are known, counting vectors below any smaller bound
costs one integer square root per line, which is what makes the k-th
eigenvalue search cheap even when the ellipsoid holds ~10^5 points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .lattice import (
    IntGramMatrix,
    NormalizedEigenvalue,
    cholesky,
    normalized_eigenvalue_from_form,
    unit_ball_volume,
)
from .lll import lll_gram

DEFAULT_CAP = 10 ** 7
# Relative widening of the floating bound at internal levels. Reduced forms of
# the candidate family reach condition numbers ~1e8, so 1e-9 is not enough.
_WIDEN = 1e-6
# Requests whose volume estimate exceeds the cap by this factor fail up front
# instead of after a long partial search.
_ESTIMATE_SLACK = 100


class EnumerationLimitError(RuntimeError):
    """Raised when an enumeration would exceed the configured candidate cap."""


def sign_normalize(v: Sequence[int]) -> tuple[int, ...]:
    """Representative of ``{v, -v}`` whose first nonzero coordinate is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


@dataclass(frozen=True)
class SpectrumEntry:
    q_value: int
    multiplicity: int
    representatives: tuple

    def __post_init__(self):
        reps = tuple(sorted(sign_normalize(tuple(int(x) for x in r)) for r in self.representatives))
        if len(set(reps)) != len(reps):
            raise ValueError("representatives must be distinct up to sign")
        if self.multiplicity != 2 * len(reps):
            raise ValueError("multiplicity must equal twice the number of representatives")
        object.__setattr__(self, "representatives", reps)

    def to_json(self) -> dict:
        return {"q": str(self.q_value), "mult": self.multiplicity,
                "reps": [list(r) for r in self.representatives]}

    @classmethod
    def from_json(cls, obj) -> "SpectrumEntry":
        return cls(int(obj["q"]), int(obj["mult"]), tuple(tuple(r) for r in obj["reps"]))


@dataclass(frozen=True)
class Spectrum:
    gram: IntGramMatrix
    entries: tuple
    covered_count: int = field(default=-1)

    def __post_init__(self):
        entries = tuple(self.entries)
        qs = [e.q_value for e in entries]
        if any(a >= b for a, b in zip(qs, qs[1:])):
            raise ValueError("spectrum entries must be strictly increasing")
        total = sum(e.multiplicity for e in entries)
        if self.covered_count not in (-1, total):
            raise ValueError("covered_count must equal the total multiplicity")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "covered_count", total)

    def values(self) -> list[int]:
        return [e.q_value for e in self.entries]

    def multiplicities(self) -> list[int]:
        return [e.multiplicity for e in self.entries]

    def restricted(self, bound: int) -> "Spectrum":
        return Spectrum(self.gram, tuple(e for e in self.entries if e.q_value <= bound))

    def flat_values(self) -> list[int]:
        """All eigenvalue levels repeated by multiplicity, ascending."""
        return [e.q_value for e in self.entries for _ in range(e.multiplicity)]

    def to_json(self) -> dict:
        return {"gram": self.gram.to_json(), "levels": [e.to_json() for e in self.entries]}

    @classmethod
    def from_json(cls, obj) -> "Spectrum":
        return cls(IntGramMatrix.from_json(obj["gram"]),
                   tuple(SpectrumEntry.from_json(e) for e in obj["levels"]))


def _group(gram: IntGramMatrix, pairs: Iterable[tuple[int, tuple[int, ...]]]) -> Spectrum:
    levels: dict[int, list] = {}
    for q, v in pairs:
        levels.setdefault(q, []).append(v)
    entries = tuple(SpectrumEntry(q, 2 * len(vs), tuple(vs)) for q, vs in sorted(levels.items()))
    return Spectrum(gram, entries)


class _LeafLines:
    """Innermost-coordinate lines of the reduced form below a fixed bound."""

    def __init__(self, a: int, lines: list, u: list, bound: int):
        self.a = a
        self.lines = lines
        self.u = u
        self.bound = bound

    def count(self, bound: int) -> int:
        """Number of nonzero vectors (both signs) with form value <= bound."""
        if bound > self.bound:
            raise ValueError("bound exceeds the bound the lines were built for")
        a, total, isqrt = self.a, 0, math.isqrt
        for b, c, tmin, _ in self.lines:
            disc = b * b - a * (c - bound)
            if disc < 0:
                continue
            s = isqrt(disc)
            hi = (s - b) // a
            lo = -((b + s) // a)
            if lo < tmin:
                lo = tmin
            if hi >= lo:
                total += hi - lo + 1
        return 2 * total

    def _to_original(self, x: Sequence[int]) -> tuple[int, ...]:
        u = self.u
        return sign_normalize([sum(u[i][j] * x[j] for j in range(len(x))) for i in range(len(u))])

    def at_level(self, q: int) -> list[tuple[int, ...]]:
        """Sign-normalized vectors (original coordinates) with form value exactly q."""
        a, out = self.a, []
        for b, c, tmin, rest in self.lines:
            disc = b * b - a * (c - q)
            if disc < 0:
                continue
            s = math.isqrt(disc)
            if s * s != disc:
                continue
            for num in {s - b, -s - b}:
                if num % a == 0 and num // a >= tmin:
                    out.append(self._to_original((num // a,) + rest))
        return sorted(out)

    def vectors(self, bound: int | None = None, cap: int = DEFAULT_CAP) -> list[tuple[int, tuple[int, ...]]]:
        bound = self.bound if bound is None else bound
        if self.count(bound) // 2 > cap:
            raise EnumerationLimitError(f"more than {cap} vectors below bound {bound}")
        a, out = self.a, []
        for b, c, tmin, rest in self.lines:
            disc = b * b - a * (c - bound)
            if disc < 0:
                continue
            s = math.isqrt(disc)
            lo = max(-((b + s) // a), tmin)
            for t in range(lo, (s - b) // a + 1):
                out.append((a * t * t + 2 * b * t + c, self._to_original((t,) + rest)))
        return out


class Enumerator:
    """Reusable short-vector enumerator for one integer form."""

    def __init__(self, g: IntGramMatrix, cap: int = DEFAULT_CAP):
        self.gram = g
        self.cap = cap
        red, u = lll_gram(g.entries)
        self.red = red
        self.u = u
        n = g.dim
        low = cholesky(np.array(red, dtype=float))
        self._diag = [low[i, i] ** 2 for i in range(n)]
        # q = sum_i D_i (x_i + sum_{j>i} m[i][j] x_j)^2
        self._m = [[low[j, i] / low[i, i] if j > i else 0.0 for j in range(n)] for i in range(n)]
        self._cover: tuple[int, _LeafLines] | None = None  # (count, lines) of the last covering

    def lines(self, bound: int) -> _LeafLines:
        n, red = self.gram.dim, self.red
        a = red[0][0]
        lines: list = []
        if n == 1:
            lines.append((0, 0, 1, ()))
            return _LeafLines(a, lines, self.u, bound)
        if self._log_estimate(bound) > math.log(_ESTIMATE_SLACK * self.cap):
            raise EnumerationLimitError(f"about {math.exp(self._log_estimate(bound)):.3g} vectors "
                                        f"below bound {bound} exceed cap {self.cap}")
        fbound = float(bound) * (1 + _WIDEN) + _WIDEN
        diag, m, cap = self._diag, self._m, self.cap
        x = [0] * n
        nodes = 0

        def leaf():
            rest = tuple(x[1:])
            b = sum(red[0][j] * x[j] for j in range(1, n))
            c = 0
            for i in range(1, n):
                if x[i]:
                    c += x[i] * sum(red[i][j] * x[j] for j in range(1, n))
            if all(v == 0 for v in rest):
                tmin = 1
            else:
                tmin = -(1 << 62)
            disc = b * b - a * (c - bound)
            if disc >= 0:
                lines.append((b, c, tmin, rest))

        def descend(i: int, partial: float, all_zero: bool):
            nonlocal nodes
            center = -sum(m[i][j] * x[j] for j in range(i + 1, n))
            room = fbound - partial
            if room < 0:
                return
            r = math.sqrt(room / diag[i])
            lo = math.ceil(center - r - _WIDEN)
            hi = math.floor(center + r + _WIDEN)
            if all_zero:
                lo = max(lo, 0)
            for xi in range(lo, hi + 1):
                nodes += 1
                if nodes > cap:
                    raise EnumerationLimitError(f"enumeration tree exceeded {cap} nodes")
                x[i] = xi
                p = partial + diag[i] * (xi - center) ** 2
                if i == 1:
                    leaf()
                else:
                    descend(i - 1, p, all_zero and xi == 0)
            x[i] = 0

        descend(n - 1, 0.0, True)
        return _LeafLines(a, lines, self.u, bound)

    def _log_estimate(self, bound: int) -> float:
        """Log of the ellipsoid-volume estimate of the number of vectors below ``bound``."""
        n = self.gram.dim
        if bound <= 0:
            return -math.inf
        return (math.log(unit_ball_volume(n)) + 0.5 * n * math.log(bound)
                - 0.5 * sum(math.log(x) for x in self._diag))

    def count(self, bound: int) -> int:
        return self.lines(bound).count(bound)

    def enumerate(self, bound: int) -> Spectrum:
        if bound < 0:
            raise ValueError("bound must be nonnegative")
        if bound == 0:
            return Spectrum(self.gram, ())
        return _group(self.gram, self.lines(bound).vectors(bound, self.cap))

    def covering_lines(self, k: int) -> _LeafLines:
        """Lines for a bound holding at least ``k`` nonzero vectors (doubling)."""
        if self._cover is not None and self._cover[0] >= k:
            return self._cover[1]
        bound = max(1, self.red[0][0])
        while True:
            lines = self.lines(bound)
            total = lines.count(bound)
            if total >= k:
                self._cover = (total, lines)
                return lines
            bound *= 2

    def kth_value(self, k: int) -> tuple[int, list[tuple[int, ...]]]:
        """Exact k-th smallest nonzero form value counted with multiplicity."""
        if k < 1:
            raise ValueError("k must be >= 1")
        lines = self.covering_lines(k)
        lo, hi = 0, lines.bound  # count(lo) < k <= count(hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if lines.count(mid) >= k:
                hi = mid
            else:
                lo = mid
        return hi, lines.at_level(hi)


def enumerate_up_to(g: IntGramMatrix, bound: int, cap: int = DEFAULT_CAP) -> Spectrum:
    """Every nonzero ``v`` (up to sign) with ``v^t g v <= bound``, grouped by value."""
    return Enumerator(g, cap).enumerate(bound)


def count_up_to(g: IntGramMatrix, bound: int, cap: int = DEFAULT_CAP) -> int:
    """Number of nonzero ``v`` (both signs) with ``v^t g v <= bound``."""
    if bound <= 0:
        return 0
    return Enumerator(g, cap).count(bound)


def kth_normalized_eigenvalue(g: IntGramMatrix, k: int, cap: int = DEFAULT_CAP
                              ) -> tuple[NormalizedEigenvalue, SpectrumEntry]:
    """k-th volume-normalized Laplacian eigenvalue of the torus with dual form g.

    Returns the value and the full spectrum level containing it.
    """
    q, reps = Enumerator(g, cap).kth_value(k)
    entry = SpectrumEntry(q, 2 * len(reps), tuple(reps))
    return NormalizedEigenvalue(normalized_eigenvalue_from_form(g, q), k), entry


def brute_force_oracle(g: IntGramMatrix, box_radius: int, cap: int = DEFAULT_CAP) -> Spectrum:
    """Every nonzero vector of the box ``[-r, r]^d``, by exhaustive loop.

    Values up to ``r^2 * lambda_min(g)`` are complete; see
    :func:`certified_bound`.
    """
    d, r = g.dim, box_radius
    if r < 0:
        raise ValueError("box radius must be nonnegative")
    if (2 * r + 1) ** d > cap:
        raise EnumerationLimitError(f"box of radius {r} in dimension {d} exceeds cap {cap}")
    if r == 0:
        return Spectrum(g, ())
    axes = np.arange(-r, r + 1, dtype=np.int64)
    pts = np.stack(np.meshgrid(*([axes] * d), indexing="ij"), axis=-1).reshape(-1, d)
    gm = np.array(g.entries, dtype=object)
    qs = np.einsum("ni,ij,nj->n", pts.astype(object), gm, pts.astype(object))
    levels: dict[int, set] = {}
    for p, q in zip(pts.tolist(), qs.tolist()):
        if q == 0:
            continue
        levels.setdefault(int(q), set()).add(sign_normalize(p))
    return Spectrum(g, tuple(SpectrumEntry(q, 2 * len(v), tuple(v)) for q, v in sorted(levels.items())))


def certified_bound(g: IntGramMatrix, box_radius: int) -> int:
    """Largest integer bound whose vectors provably lie in ``[-r, r]^d``.

    Any ``v`` outside the box has ``v^t g v >= lambda_min (r+1)^2``; the returned
    bound is ``floor(lambda_min * r^2)`` with a small safety margin on the
    floating eigenvalue.
    """
    lam = float(np.linalg.eigvalsh(g.to_numpy()).min())
    return max(0, math.floor(lam * (1 - 1e-9) * box_radius ** 2))


@dataclass(frozen=True)
class SuccessiveMinima:
    gamma: tuple
    witnesses: tuple
    squared: tuple  # exact integer form values gamma_i^2


def _rank(vectors: list[Sequence[int]]) -> int:
    from fractions import Fraction
    rows = [[Fraction(x) for x in v] for v in vectors]
    rank, ncol = 0, len(rows[0]) if rows else 0
    for c in range(ncol):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def successive_minima(g: IntGramMatrix, cap: int = DEFAULT_CAP) -> SuccessiveMinima:
    """Successive minima of the lattice with Gram matrix ``g``.

    The diagonal of the LLL-reduced form bounds ``gamma_d^2``, so one
    enumeration to that bound always contains ``d`` independent vectors.
    """
    e = Enumerator(g, cap)
    bound = max(e.red[i][i] for i in range(g.dim))
    spec = e.enumerate(bound)
    chosen: list = []
    squared: list = []
    for entry in spec.entries:
        for v in entry.representatives:
            if _rank(chosen + [v]) > len(chosen):
                chosen.append(v)
                squared.append(entry.q_value)
                if len(chosen) == g.dim:
                    break
        if len(chosen) == g.dim:
            break
    return SuccessiveMinima(tuple(math.sqrt(q) for q in squared), tuple(chosen), tuple(squared))
