import math

import numpy as np
import pytest

from flattori.candidates import candidate_gram
from flattori.enumeration import enumerate_up_to
from flattori.lattice import Basis, IntGramMatrix
from flattori.optimizer import (
    OptConfig, OptState, build_lp, directional_derivative, lambda_k, matches_candidate,
    multi_start, optimize, random_start, recover_form, shortest_pairs, sigma_matrix, solve_lp,
)

FOUR_PI_SQ = 4 * math.pi ** 2


def branch(w, v, eps):
    """Independent evaluation of Lambda_v at (I + eps) W."""
    d = w.shape[0]
    m = (np.eye(d) + eps) @ w
    x = m @ np.asarray(v, dtype=float)
    return FOUR_PI_SQ * abs(np.linalg.det(m)) ** (-2 / d) * (x @ x)


def test_sigma_examples():
    s = sigma_matrix(np.eye(2), (1, 0), k=1)
    assert np.allclose(s, np.diag([FOUR_PI_SQ, -FOUR_PI_SQ]))
    rng = np.random.default_rng(0)
    for d in range(1, 6):
        w = np.eye(d) + 0.3 * rng.standard_normal((d, d))
        v = rng.integers(-3, 4, size=d)
        v[0] = v[0] or 1
        assert abs(np.trace(sigma_matrix(w, v))) <= 1e-9 * FOUR_PI_SQ * np.abs(w).max() ** 2 * 10
    with pytest.raises(ValueError):
        sigma_matrix(np.eye(2), (0, 0))


@pytest.mark.parametrize("seed", range(10))
def test_sigma_against_finite_differences(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 5))
    w = np.eye(d) + 0.2 * rng.standard_normal((d, d))
    v = rng.integers(-2, 3, size=d)
    v[-1] = 1
    eps = rng.standard_normal((d, d))
    h = 1e-6
    fd = (branch(w, v, h * eps) - branch(w, v, -h * eps)) / (2 * h)
    assert directional_derivative(w, v, eps) == pytest.approx(fd, rel=1e-6, abs=1e-8)


def test_shortest_pairs_and_lambda():
    pairs = shortest_pairs(np.eye(2), 4)
    assert [q for q, _ in pairs[:4]] == [1.0, 1.0, 2.0, 2.0]
    g = candidate_gram(3, 3).gram
    w = np.linalg.cholesky(g.to_numpy()).T  # any W with W^t W = G
    spec = enumerate_up_to(g, 200)
    flat = spec.flat_values()
    for k in (1, 3, 7, 12):
        want = FOUR_PI_SQ * flat[k - 1] / g.det() ** (1 / 3)
        assert lambda_k(w, k) == pytest.approx(want, rel=1e-12)


def make_state(w, k, beta, size):
    from flattori.optimizer import _window
    return OptState(w, k, beta, active_vectors=_window(w, k, size))


def test_build_lp_counts():
    state = make_state(np.eye(2), 1, 0.1, 3)
    lp = build_lp(state, OptConfig(window=1))
    assert lp.num_variables == 5 and lp.a_ub.shape == (3, 5)
    finite = sum((lo is not None) + (hi is not None) for lo, hi in lp.bounds)
    assert finite == 8
    assert lp.a_eq.shape == (2, 5)
    assert build_lp(state, OptConfig(window=1, gauge=False)).a_eq.shape[0] == 0


def test_zero_trust_region():
    rng = np.random.default_rng(3)
    w = np.eye(3) + 0.1 * rng.standard_normal((3, 3))
    w /= np.linalg.det(w) ** (1 / 3)
    state = make_state(w, 2, 0.0, 6)
    alpha, eps = solve_lp(build_lp(state))
    branches = [branch(w, v, np.zeros((3, 3))) for v in state.active_vectors]
    assert alpha == pytest.approx(min(branches), rel=1e-10)
    assert np.allclose(eps, 0)


@pytest.mark.parametrize("beta", [0.01, 0.1, 0.4])
def test_lp_step_respects_box(beta):
    rng = np.random.default_rng(4)
    d = 3
    w = np.eye(d) + 0.1 * rng.standard_normal((d, d))
    state = make_state(w, 3, beta, 8)
    alpha, eps = solve_lp(build_lp(state))
    assert np.allclose(eps, eps.T) and abs(np.trace(eps)) < 1e-9
    assert np.all(np.abs(np.diag(eps)) <= beta + 1e-12)
    assert np.all(np.abs(eps).sum(axis=1) <= 2 * beta + 1e-12)


def test_converges_from_identity():
    state = optimize(2, 1, Basis.identity(2))
    assert state.lam == pytest.approx(8 * math.pi ** 2 / math.sqrt(3), abs=1e-6)
    assert state.status in ("converged", "stalled")
    hist = state.lambda_history
    assert all(b > a for a, b in zip(hist, hist[1:]))


def test_converges_d3():
    rng = np.random.default_rng(11)
    b = Basis(np.eye(3) + 0.05 * rng.uniform(-1, 1, size=(3, 3)))
    state = optimize(3, 1, b)
    assert state.lam == pytest.approx(4 * math.pi ** 2 * 2 ** (1 / 3), abs=1e-5)
    rg = recover_form(state)
    assert matches_candidate(rg.gram, 1, 3)


def test_max_iter_zero_returns_start():
    b = random_start(2, np.random.default_rng(5))
    state = optimize(2, 1, b, OptConfig(max_iter=0))
    assert state.iteration == 0 and state.status == "max_iter"
    w = np.linalg.inv(b.entries).T
    assert state.lam == pytest.approx(lambda_k(w, 1), rel=1e-12)


def test_trace_records_and_callback():
    seen = []
    state = optimize(2, 3, random_start(2, np.random.default_rng(2)), OptConfig(max_iter=15),
                     on_iter=seen.append)
    assert seen == state.trace and len(seen) == state.iteration
    accepted = [r["lambda"] for r in seen if r["accepted"]]
    assert accepted == sorted(accepted)
    for r in seen:
        assert set(r) == {"iter", "lambda", "alpha", "beta", "step_norm", "accepted"}


def test_multi_start_is_deterministic():
    a = multi_start(2, 1, 3, seed=4, threads=1)
    b = multi_start(2, 1, 3, seed=4, threads=1)
    assert [r.lam for r in a] == [r.lam for r in b]
    assert all(r.gram is not None for r in a)
    line = a[0].to_jsonl().strip().splitlines()[-1]
    assert '"seed"' in line


def test_matches_candidate_rejects_other_forms():
    assert matches_candidate(candidate_gram(3, 2).gram, 3, 2)
    assert not matches_candidate(IntGramMatrix.identity(2), 1, 2)
    # equal determinant, different spectrum
    assert not matches_candidate(IntGramMatrix([[2, 0], [0, 24]]), 1, 2)
