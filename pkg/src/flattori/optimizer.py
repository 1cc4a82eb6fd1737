"""Sequential linear programming over lattice bases.

The iterate is the dual basis ``W = B^{-t}`` (columns span the dual lattice),
kept at unit determinant and LLL-reduced.  Each step linearizes the window
of eigenvalue branches at and above ``Lambda_k``

    Lambda_j((I + eps) W) ~ Lambda_j(W) + <Sigma_j, eps>

and maximizes their minimum over a box-shaped trust region.  Step acceptance
uses the true ``Lambda_k`` recomputed by enumeration.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .candidates import MULT_GENERIC, MULT_KAPPA2, candidate_gram
from .enumeration import Enumerator, enumerate_up_to
from .lattice import FOUR_PI_SQ, Basis, IntGramMatrix, SingularMatrixError, _check_dim
from .lll import lll_gram, lll_reduce  # noqa: F401  (lll_reduce is re-exported)
from .rational import NotRationalizableError, RationalizedGram, rationalize_gram
from .simplex import LinearProgram
from .simplex import solve_lp as _simplex

EIGHT_PI_SQ = 2.0 * FOUR_PI_SQ


@dataclass
class OptConfig:
    window: int | None = None  # K; None picks a per-dimension default
    beta0: float = 0.1
    beta_min: float = 1e-8
    beta_max: float = 0.5
    grow: float = 1.5
    shrink: float = 0.5
    grow_after: int = 2
    tol: float = 1e-10
    max_iter: int = 500
    gauge: bool = True  # pin eps symmetric and trace-free
    start_sigma: float = 0.2

    def window_for(self, d: int) -> int:
        if self.window is not None:
            return self.window
        return max(50, max(MULT_KAPPA2[d], MULT_GENERIC[d]) // 2 + 10)


@dataclass
class OptState:
    basis_inv_t: np.ndarray
    k: int
    beta: float
    iteration: int = 0
    active_vectors: list = field(default_factory=list)
    lambda_history: list = field(default_factory=list)
    status: str = "running"
    trace: list = field(default_factory=list)

    @property
    def d(self) -> int:
        return self.basis_inv_t.shape[0]

    @property
    def lam(self) -> float:
        return self.lambda_history[-1]

    @property
    def gram(self) -> np.ndarray:
        w = self.basis_inv_t
        g = w.T @ w
        return 0.5 * (g + g.T)


# -- float enumeration ----------------------------------------------------

def _fp_factor(a: np.ndarray):
    """``q(x) = sum_i r[i] * (x_i + sum_{j>i} mu[i, j] x_j)^2``."""
    n = a.shape[0]
    q = a.astype(float).copy()
    for i in range(n):
        for j in range(i + 1, n):
            q[j, i] = q[i, j]
            q[i, j] /= q[i, i]
        for kk in range(i + 1, n):
            for ll in range(kk, n):
                q[kk, ll] -= q[kk, i] * q[i, ll]
    if np.any(np.diag(q) <= 0):
        raise SingularMatrixError("form is not positive definite")
    return np.diag(q).copy(), np.triu(q, 1)


def _half_vectors(r, mu, bound: float) -> list[tuple[float, tuple]]:
    """Vectors with ``0 < q <= bound`` and last nonzero coordinate positive."""
    n = r.size
    out = []
    x = [0] * n

    def rec(i, rest, all_zero):
        c = -sum(mu[i, j] * x[j] for j in range(i + 1, n))
        half = math.sqrt(max(rest, 0.0) / r[i])
        lo, hi = math.ceil(c - half - 1e-12), math.floor(c + half + 1e-12)
        if all_zero:
            lo = max(lo, 0)
        for xi in range(lo, hi + 1):
            t = rest - r[i] * (xi + (-c)) ** 2
            if t < -1e-12 * bound:
                continue
            x[i] = xi
            zero = all_zero and xi == 0
            if i == 0:
                if not zero:
                    out.append((bound - t, tuple(x)))
            else:
                rec(i - 1, t, zero)
        x[i] = 0

    rec(n - 1, bound, True)
    return out


def shortest_pairs(gram: np.ndarray, n_pairs: int) -> list[tuple[float, tuple]]:
    """At least ``n_pairs`` shortest ``+-v`` pairs of a real form, by value.

    Returns ``(value, v)`` with ``v`` in the coordinates of ``gram``.
    """
    g = np.asarray(gram, dtype=float)
    d = g.shape[0]
    red, u = lll_gram(g.tolist())
    red = np.array(red)
    u = np.array(u, dtype=np.int64)
    r, mu = _fp_factor(red)
    # ball-volume estimate of the radius, then doubling
    vol = math.pi ** (d / 2) / math.gamma(d / 2 + 1)
    bound = max(red.diagonal().min(), (2 * n_pairs * math.sqrt(np.prod(r)) / vol) ** (2 / d))
    while True:
        pts = _half_vectors(r, mu, bound)
        if len(pts) >= n_pairs:
            break
        bound *= 2.0
    out = []
    for _, xr in pts:
        v = u @ np.array(xr, dtype=np.int64)
        out.append((float(v @ g @ v), tuple(int(t) for t in v)))
    out.sort()
    return out


def _lambda_scale(w: np.ndarray) -> float:
    d = w.shape[0]
    return float(FOUR_PI_SQ * abs(np.linalg.det(w)) ** (-2.0 / d))


def lambda_k(w: np.ndarray, k: int) -> float:
    """Normalized k-th eigenvalue of the torus with dual basis ``w``."""
    p = (k + 1) // 2
    pairs = shortest_pairs(w.T @ w, p)
    return _lambda_scale(w) * pairs[p - 1][0]


# -- linearization ------------------------------------------------------

def sigma_matrix(b0_inv_t, v, k: int | None = None) -> np.ndarray:
    """Gradient of the branch ``Lambda_v`` with respect to ``eps`` in ``(I + eps) W``.

    ``k`` only labels the branch; the value is computed from ``v``.
    """
    w = np.asarray(b0_inv_t, dtype=float)
    d = w.shape[0]
    det = np.linalg.det(w)
    if abs(det) < 1e-300:
        raise SingularMatrixError("singular basis")
    if not np.any(v):
        raise ValueError("v must be nonzero")
    wv = w @ np.asarray(v, dtype=float)
    scale = abs(det) ** (-2.0 / d)
    lam = FOUR_PI_SQ * scale * (wv @ wv)
    return EIGHT_PI_SQ * scale * np.outer(wv, wv) - (2.0 / d) * lam * np.eye(d)


def directional_derivative(w, v, eps) -> float:
    return float(np.sum(sigma_matrix(w, v) * np.asarray(eps)))


def _window(w: np.ndarray, k: int, size: int) -> list[tuple]:
    p = (k + 1) // 2
    pairs = shortest_pairs(w.T @ w, p + size - 1)
    return [v for _, v in pairs[p - 1:p - 1 + size]]


def build_lp(state: OptState, config: OptConfig | None = None) -> LinearProgram:
    """``max alpha`` s.t. ``Lambda_j + <Sigma_j, eps> >= alpha`` for the window.

    Variables are ``alpha`` followed by ``eps`` in row-major order.  Box
    bounds are ``|eps_ii| <= beta`` and ``|eps_ij| <= beta / (d - 1)``.
    """
    config = config or OptConfig()
    if not state.active_vectors:
        raise ValueError("active_vectors must be nonempty")
    w, d, beta = state.basis_inv_t, state.d, state.beta
    scale = _lambda_scale(w)
    rows, rhs = [], []
    for v in state.active_vectors:
        wv = w @ np.asarray(v, dtype=float)
        lam = scale * (wv @ wv)
        sig = sigma_matrix(w, v)
        rows.append(np.r_[1.0, -sig.ravel()])
        rhs.append(lam)
    off = beta / (d - 1) if d > 1 else 0.0
    bounds = [(None, None)]
    for i in range(d):
        for j in range(d):
            b = beta if i == j else off
            bounds.append((-b, b))
    a_eq = []
    if config.gauge:
        for i in range(d):
            for j in range(i + 1, d):
                row = np.zeros(1 + d * d)
                row[1 + i * d + j], row[1 + j * d + i] = 1.0, -1.0
                a_eq.append(row)
        row = np.zeros(1 + d * d)
        row[[1 + i * d + i for i in range(d)]] = 1.0
        a_eq.append(row)
    a_eq = np.array(a_eq) if a_eq else None
    b_eq = np.zeros(len(a_eq)) if a_eq is not None else None
    c = np.zeros(1 + d * d)
    c[0] = 1.0
    return LinearProgram(c, np.array(rows), np.array(rhs), a_eq, b_eq, bounds)


def solve_lp(lp: LinearProgram) -> tuple[float, np.ndarray]:
    """Optimal ``(alpha, eps)`` of an LP built by :func:`build_lp`."""
    d = math.isqrt(lp.num_variables - 1)
    res = _simplex(lp)
    return float(res.x[0]), res.x[1:].reshape(d, d)


# -- main loop ------------------------------------------------------------

def _normalize(w: np.ndarray) -> np.ndarray:
    d = w.shape[0]
    det = np.linalg.det(w)
    if det < 0:
        w = w.copy()
        w[:, 0] *= -1.0  # column sign change keeps the lattice
        det = -det
    w = w / det ** (1.0 / d)
    _, u = lll_gram((w.T @ w).tolist())
    u = np.array(u, dtype=float)
    if np.linalg.det(u) < 0:
        u[:, 0] *= -1.0
    return w @ u


def optimize(d: int, k: int, b_init: Basis, config: OptConfig | None = None,
             on_iter: Callable[[dict], None] | None = None) -> OptState:
    """Locally maximize ``Lambda_k`` starting from the basis ``b_init``.

    Parameters
    ----------
    d, k : int
        Dimension and eigenvalue number.
    b_init : Basis
        Starting primal basis ``B``.
    config : OptConfig, optional
    on_iter : callable, optional
        Receives each trace record as it is produced.

    Returns
    -------
    OptState
        Final (best) iterate; ``status`` is ``"converged"``, ``"stalled"``
        (trust region collapsed) or ``"max_iter"``.
    """
    _check_dim(d)
    if k < 1:
        raise ValueError("k must be >= 1")
    if b_init.dim != d:
        raise ValueError("basis dimension does not match d")
    config = config or OptConfig()
    size = config.window_for(d) + 2
    w = _normalize(np.linalg.inv(b_init.entries).T)
    state = OptState(w, k, config.beta0, active_vectors=_window(w, k, size))
    state.lambda_history.append(_branch_value(w, state.active_vectors[0]))
    streak = 0

    def record(alpha, step, accepted):
        rec = {"iter": state.iteration, "lambda": state.lam, "alpha": alpha, "beta": state.beta,
               "step_norm": step, "accepted": accepted}
        state.trace.append(rec)
        if on_iter:
            on_iter(rec)

    while state.iteration < config.max_iter:
        state.iteration += 1
        alpha, eps = solve_lp(build_lp(state, config))
        step = float(np.linalg.norm(eps) * np.linalg.norm(state.basis_inv_t))
        lam0 = state.lam
        if step < config.tol:
            record(alpha, step, False)
            state.status = "converged"
            return state
        # no first-order gain: the step is only a probe for second-order ascent
        # (e.g. off the square lattice), and a failed probe means a stationary point
        probe = alpha - lam0 <= 1e-14 * lam0
        m = np.eye(d) + eps
        if np.linalg.det(m) <= 0:
            accepted = False
        else:
            w_new = _normalize(m @ state.basis_inv_t)
            lam_new = lambda_k(w_new, k)
            accepted = lam_new > lam0
        if accepted:
            state.basis_inv_t = w_new
            state.active_vectors = _window(w_new, k, size)
            state.lambda_history.append(lam_new)
            streak += 1
            if streak >= config.grow_after:
                state.beta = min(state.beta * config.grow, config.beta_max)
                streak = 0
            record(alpha, step, True)
        else:
            streak = 0
            record(alpha, step, False)
            if probe:
                state.status = "converged"
                return state
            state.beta *= config.shrink
            if state.beta < config.beta_min:
                state.beta = config.beta_min
                state.status = "stalled"
                return state
    state.status = "max_iter"
    return state


def _branch_value(w, v) -> float:
    wv = w @ np.asarray(v, dtype=float)
    return _lambda_scale(w) * float(wv @ wv)


def random_start(d: int, rng: np.random.Generator, sigma: float = 0.2) -> Basis:
    """``I + sigma * U[-1, 1]`` with positive determinant."""
    b = np.eye(d) + sigma * rng.uniform(-1.0, 1.0, size=(d, d))
    if np.linalg.det(b) < 0:
        if d == 1:
            b = -b
        else:
            b[:, [0, 1]] = b[:, [1, 0]]
    return Basis(b)


# -- recovery of integer forms ------------------------------------------------

def recover_form(state: OptState, tol: float = 1e-6) -> RationalizedGram:
    """LLL-reduce the final Gram matrix and rationalize it."""
    red, _ = lll_gram(state.gram.tolist())
    return rationalize_gram(np.array(red), tol)


def matches_candidate(gram: IntGramMatrix, k: int, d: int) -> bool:
    """Equal determinant and spectrum (through eigenvalue ``k + 2``) as the candidate."""
    ref = candidate_gram(k, d).gram.primitive()
    got = gram.primitive()
    if got.det() != ref.det():
        return False
    q, _ = Enumerator(ref).kth_value(k + 2)
    a, b = enumerate_up_to(ref, q), enumerate_up_to(got, q)
    return a.values() == b.values() and a.multiplicities() == b.multiplicities()


@dataclass
class RunSummary:
    seed: int
    lam: float
    status: str
    iterations: int
    gram: dict | None  # matrix JSON of the rationalized form
    trace: list

    def final_record(self) -> dict:
        return {"seed": self.seed, "lambda": self.lam, "status": self.status,
                "iterations": self.iterations, "gram": self.gram}

    def to_jsonl(self) -> str:
        lines = [json.dumps(r) for r in self.trace]
        lines.append(json.dumps(self.final_record()))
        return "\n".join(lines) + "\n"


def _one_start(args) -> RunSummary:
    d, k, seed, config = args
    rng = np.random.default_rng(seed)
    state = optimize(d, k, random_start(d, rng, config.start_sigma), config)
    try:
        rg = recover_form(state)
        gram = rg.gram.to_json()
    except (NotRationalizableError, ValueError, ArithmeticError):
        gram = None
    return RunSummary(seed, state.lam, state.status, state.iteration, gram, state.trace)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("TORUS_THREADS", "1")))
    except ValueError:
        return 1


def multi_start(d: int, k: int, starts: int, seed: int = 0, config: OptConfig | None = None,
                threads: int | None = None) -> list[RunSummary]:
    """Independent runs from seeded random starts; ordered by start index."""
    config = config or OptConfig()
    seeds = [seed * 1_000_003 + i for i in range(starts)]
    jobs = [(d, k, s, config) for s in seeds]
    threads = threads or thread_count()
    if threads > 1 and starts > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(_one_start, jobs))
    return [_one_start(j) for j in jobs]
