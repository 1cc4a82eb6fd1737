import math

import pytest

from flattori.candidates import (
    candidate_gram, catalog_vectors, closed_form_lambda, det_polynomial, hermite_check,
    lower_bound_lambda, packing_density, predicted_multiplicity, script_g, spanning_vectors,
)
from flattori.enumeration import Enumerator, kth_normalized_eigenvalue
from flattori.lattice import IntGramMatrix, bareiss_det


def test_script_g_entries():
    g1 = script_g(1)
    assert g1[0, 0] == 8 and g1[0, 7] == -4 and g1[7, 7] == 8
    assert script_g(2) == g1
    assert script_g(3)[0, 0] == 32


def test_candidate_examples():
    cg = candidate_gram(1, 2)
    assert cg.gram.entries == ((8, -4), (-4, 8)) and cg.gram.det() == 48 == 8 * 2 * (4 - 1)
    k2 = 36
    assert candidate_gram(5, 3).gram.entries == ((2 * k2, -k2, 0), (-k2, 2 * k2, -4), (0, -4, 8))
    kappa = 4
    assert candidate_gram(3, 8).gram.det() == 8 * 2 * kappa ** 12 * (kappa ** 2 - 3)
    assert cg.kappa == 2 and cg.level == 8


@pytest.mark.parametrize("d", range(1, 9))
def test_determinant_polynomial(d):
    for k in range(1, 40, 3):
        g = candidate_gram(k, d).gram
        assert bareiss_det(g.entries) == 8 * det_polynomial(k, d)


@pytest.mark.parametrize("d", range(1, 8))
def test_laminated_nesting(d):
    for k in (1, 3, 10):
        small = candidate_gram(k, d).gram.entries
        big = candidate_gram(k, d + 1).gram.entries
        assert tuple(r[1:] for r in big[1:]) == small


def test_closed_form_examples():
    assert math.isclose(closed_form_lambda(1, 2), 8 * math.pi ** 2 / math.sqrt(3), rel_tol=1e-12)
    assert round(closed_form_lambda(7, 4), 3) == 94.644
    assert round(closed_form_lambda(9, 6), 3) == 95.873
    for k in range(1, 30):
        kappa = 2 * math.ceil(k / 2)
        ref = 2 * math.pi ** 2 * kappa ** 2 / math.sqrt(kappa ** 2 - 1)
        assert math.isclose(closed_form_lambda(k, 2), ref, rel_tol=1e-13)
        assert math.isclose(closed_form_lambda(k, 1), math.pi ** 2 * kappa ** 2, rel_tol=1e-13)


@pytest.mark.parametrize("d", range(1, 9))
def test_closed_form_matches_enumeration(d):
    for k in (1, 3, 6, 13, 40):
        lam, _ = kth_normalized_eigenvalue(candidate_gram(k, d).gram, k)
        assert math.isclose(lam.value, closed_form_lambda(k, d), rel_tol=1e-12)


def test_catalog_examples():
    c = catalog_vectors(1, 1)
    assert c.vectors() == [(1,)] and predicted_multiplicity(1, 1) == 2
    assert len(catalog_vectors(3, 8).vectors()) == 91
    assert len(catalog_vectors(1, 4).vectors()) == 12
    assert predicted_multiplicity(1, 8) == 240
    assert predicted_multiplicity(3, 7) == 106
    assert predicted_multiplicity(5, 2) == 6


@pytest.mark.parametrize("d", range(1, 9))
def test_catalog_is_the_level(d):
    for k in (1, 2, 3, 4, 9):
        cg = candidate_gram(k, d)
        vecs = catalog_vectors(k, d).vectors()
        assert 2 * len(vecs) == predicted_multiplicity(k, d)
        assert len(set(vecs)) == len(vecs)
        for v in vecs:
            assert cg.gram.form(v) == cg.level
        q, reps = Enumerator(cg.gram).kth_value(k)
        assert q == cg.level and set(reps) == set(vecs)


@pytest.mark.parametrize("d", range(1, 9))
def test_spanning_vectors_on_level(d):
    cg = candidate_gram(3, d)
    vs = spanning_vectors(3, d)
    assert len(vs) == d * (d + 1) // 2
    assert all(cg.gram.form(v) == cg.level for v in vs)


def test_lower_bound():
    assert math.isclose(lower_bound_lambda(1, 1), 4 * math.pi ** 2)
    assert math.isclose(lower_bound_lambda(1, 2), 4 * math.pi ** 2)
    assert lower_bound_lambda(1, 2) < closed_form_lambda(1, 2)
    assert math.isfinite(lower_bound_lambda(9, 10))
    # the bound is attained by the test torus diag(1, ..., 1, kappa/2)
    for d in (2, 3, 5):
        for k in (3, 8):
            kappa = 2 * math.ceil(k / 2)
            assert lower_bound_lambda(k, d) <= closed_form_lambda(k, d)
            g = IntGramMatrix.diag([kappa ** 2] * (d - 1) + [4])
            lam, _ = kth_normalized_eigenvalue(g, k)
            assert math.isclose(lam.value, lower_bound_lambda(k, d), rel_tol=1e-12)


def test_hermite_densities():
    assert math.isclose(hermite_check(2).density, math.pi / (2 * math.sqrt(3)), rel_tol=1e-12)
    assert math.isclose(hermite_check(8).density, math.pi ** 4 / 384, rel_tol=1e-12)
    assert math.isclose(hermite_check(1).density, 1.0, rel_tol=1e-12)
    assert hermite_check(8).multiplicity == 240
    assert packing_density(4 * math.pi ** 2, 1) == pytest.approx(1.0)
