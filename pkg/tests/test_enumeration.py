import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from flattori.candidates import candidate_gram
from flattori.enumeration import (
    EnumerationLimitError, Enumerator, Spectrum, brute_force_oracle, certified_bound,
    count_up_to, enumerate_up_to, kth_normalized_eigenvalue, sign_normalize, successive_minima,
)
from flattori.lattice import IntGramMatrix


def box_levels(g, r):
    """Independent oracle: plain loop over the box, counting both signs."""
    rows = g.entries
    d = len(rows)
    out = {}
    for v in itertools.product(range(-r, r + 1), repeat=d):
        if not any(v):
            continue
        q = sum(v[i] * rows[i][j] * v[j] for i in range(d) for j in range(d))
        out[q] = out.get(q, 0) + 1
    return out


def random_form(rng, d, m=20):
    while True:
        a = rng.integers(-3, 4, size=(d, d))
        g = a @ a.T + np.diag(rng.integers(1, 4, size=d))
        if np.abs(g).max() <= m:
            return IntGramMatrix(g.tolist())


def test_identity_bound_one():
    s = enumerate_up_to(IntGramMatrix.identity(2), 1)
    assert s.values() == [1] and s.multiplicities() == [4]
    assert set(s.entries[0].representatives) == {(1, 0), (0, 1)}


def test_e8_kissing():
    s = enumerate_up_to(candidate_gram(1, 8).gram, 8)
    assert s.values() == [8] and s.multiplicities() == [240]


def test_hexagonal_level():
    s = enumerate_up_to(IntGramMatrix([[8, -4], [-4, 8]]), 8)
    assert s.values() == [8] and s.multiplicities() == [6]


def test_oracle_examples():
    s = brute_force_oracle(IntGramMatrix.identity(2), 2)
    assert s.values() == [1, 2, 4, 5, 8] and s.multiplicities() == [4, 4, 4, 8, 4]
    s = brute_force_oracle(IntGramMatrix.identity(3), 1)
    assert s.values() == [1, 2, 3] and s.multiplicities() == [6, 12, 8]
    assert brute_force_oracle(IntGramMatrix([[3, 1], [1, 2]]), 0).entries == ()


def test_oracle_cap():
    with pytest.raises(EnumerationLimitError):
        brute_force_oracle(IntGramMatrix.identity(8), 10, cap=10 ** 6)


def test_zero_bound_is_empty():
    assert enumerate_up_to(IntGramMatrix.identity(3), 0).entries == ()
    assert count_up_to(IntGramMatrix.identity(3), 0) == 0


def test_kth_examples():
    lam, entry = kth_normalized_eigenvalue(IntGramMatrix.identity(1), 3)
    assert math.isclose(lam.value, math.pi ** 2 * 16, rel_tol=1e-12) and lam.kappa == 4
    assert round(lam.value, 3) == 157.914 and entry.multiplicity == 2
    lam, _ = kth_normalized_eigenvalue(candidate_gram(5, 3).gram, 5)
    assert round(lam.value, 3) == 91.527
    lam, _ = kth_normalized_eigenvalue(candidate_gram(19, 8).gram, 19)
    assert round(lam.value, 3) == 118.179
    with pytest.raises(ValueError):
        kth_normalized_eigenvalue(IntGramMatrix.identity(2), 0)


def test_spectrum_invariants():
    g = IntGramMatrix([[5, 2, -1], [2, 6, 1], [-1, 1, 4]])
    s = enumerate_up_to(g, 40)
    for e in s.entries:
        assert e.multiplicity % 2 == 0
        for v in e.representatives:
            assert g.form(v) == e.q_value and sign_normalize(v) == v
    assert s.covered_count == count_up_to(g, 40)
    assert s.values() == sorted(set(s.values()))
    assert Spectrum.from_json(s.to_json()) == s


@pytest.mark.parametrize("seed", range(25))
def test_matches_independent_oracle(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 5))
    g = random_form(rng, d)
    r = 3 if d <= 3 else 2
    bound = certified_bound(g, r)
    want = {q: m for q, m in box_levels(g, r).items() if q <= bound}
    got = enumerate_up_to(g, bound)
    assert dict(zip(got.values(), got.multiplicities())) == want


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10 ** 6), st.integers(0, 60))
def test_fast_equals_box_oracle(d, seed, bound_extra):
    g = random_form(np.random.default_rng(seed), d)
    r = 2
    bound = min(certified_bound(g, r), bound_extra)
    a, b = enumerate_up_to(g, bound), brute_force_oracle(g, r).restricted(bound)
    assert a == b


@pytest.mark.parametrize("seed", range(8))
def test_unimodular_invariance(seed):
    rng = np.random.default_rng(50 + seed)
    d = int(rng.integers(2, 5))
    g = random_form(rng, d)
    u = np.eye(d, dtype=int)
    for _ in range(6):
        i, j = rng.choice(d, 2, replace=False)
        u[:, i] += int(rng.integers(-2, 3)) * u[:, j]
    h = g.transform(u.tolist())
    s1, s2 = enumerate_up_to(g, 30), enumerate_up_to(h, 30)
    assert s1.values() == s2.values() and s1.multiplicities() == s2.multiplicities()


def test_kth_value_monotone_and_consistent():
    g = candidate_gram(7, 4).gram
    e = Enumerator(g)
    qs = [e.kth_value(k)[0] for k in range(1, 40)]
    assert qs == sorted(qs)
    for k, q in enumerate(qs, start=1):
        assert count_up_to(g, q) >= k > count_up_to(g, q - 1)


def test_successive_minima():
    m = successive_minima(IntGramMatrix.identity(4))
    assert m.squared == (1, 1, 1, 1) and m.gamma == (1.0,) * 4
    m = successive_minima(IntGramMatrix([[1, 0], [0, 9]]))
    assert m.gamma == (1.0, 3.0)


@pytest.mark.parametrize("k,d", [(1, 2), (3, 3), (8, 5), (11, 8)])
def test_candidate_successive_minima(k, d):
    kappa = 2 * math.ceil(k / 2)
    m = successive_minima(candidate_gram(k, d).gram)
    assert m.squared == (8,) + (2 * kappa ** 2,) * (d - 1)
    assert m.witnesses[0] == (0,) * (d - 1) + (1,)
