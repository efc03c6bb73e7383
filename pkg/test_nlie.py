#------------------------------------------------------------
# To run the unit tests, type "py.test" at the command line.
#------------------------------------------------------------

import numpy as np
import pytest

import fixtures
from errors import ArityMismatch, FundamentalIdentityError
from leibniz import leibniz_check
from multilinear import Endo, WedgeVector, basis_vector
from nlie import (
    NLieAlgebra, action_identity_check, ad, ad_derivation_check, bracket_eval, derivations, fi_check,
    fo_compose, induced_leibniz, is_derivation, perturb, random_skew_map, require_fi,
)

CORPUS = fixtures.corpus()


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_satisfies_fi(name):
    g = CORPUS[name]
    report = fi_check(g)
    assert report.passed
    assert report.witness is None


def test_broken_fixture_fails_with_witness():
    report = fi_check(fixtures.fix_c_broken())
    assert report.failed
    assert set(report.witness) == {"u", "v", "defect"}
    assert report.witness["defect"]
    with pytest.raises(FundamentalIdentityError) as info:
        require_fi(fixtures.fix_c_broken())
    assert info.value.code == "E_FI"


def test_single_sign_flip_stays_in_the_family():
    assert fi_check(fixtures.fix_c_flipped()).passed


def test_known_fi_defect_of_broken_fixture():
    g = fixtures.fix_c_broken()
    e = [basis_vector(4, i) for i in range(4)]
    u, v = (e[2], e[3]), (e[0], e[1], e[2])
    lhs = bracket_eval(g, *u, bracket_eval(g, *v))
    rhs = sum((bracket_eval(g, *v[:i], bracket_eval(g, *u, v[i]), *v[i + 1:]) for i in range(3)),
              np.zeros(4, dtype=object))
    assert list(rhs - lhs) == [0, 0, 0, 1]


def test_bracket_is_skew():
    g = fixtures.fix_b()
    e = [basis_vector(4, i) for i in range(4)]
    assert list(bracket_eval(g, e[0], e[1], e[2])) == [0, 0, 0, 1]
    assert list(bracket_eval(g, e[1], e[0], e[2])) == [0, 0, 0, -1]
    assert not any(bracket_eval(g, e[0], e[0], e[2]))
    with pytest.raises(ArityMismatch):
        bracket_eval(g, e[0], e[1])


def test_ad_on_fix_c():
    A = ad(fixtures.fix_c(), WedgeVector.basis(4, (1, 2)))
    assert list(A.column(0)) == [0, 0, 0, 1]      # [e2,e3,e1] = e4
    assert list(A.column(3)) == [-1, 0, 0, 0]     # [e2,e3,e4] = -e1


def test_fundamental_object_composition():
    g = fixtures.fix_b()
    u = WedgeVector.basis(4, (0, 1))
    assert fo_compose(g, u, WedgeVector.basis(4, (0, 2))).to_json() == {"e1^e4": "1"}
    assert fo_compose(g, u, WedgeVector.basis(4, (2, 3))).is_zero()


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_ad_is_a_derivation_and_acts(name):
    g = CORPUS[name]
    assert ad_derivation_check(g).passed
    assert action_identity_check(g).passed


def test_broken_fixture_fails_the_ad_checks():
    g = fixtures.fix_c_broken()
    assert ad_derivation_check(g).failed
    assert action_identity_check(g).failed


@pytest.mark.parametrize("name, expected", [("heisenberg", 6), ("sl2", 3), ("abelian_2_3", 9)])
def test_derivation_dimensions(name, expected):
    g = CORPUS[name]
    basis = derivations(g)
    assert len(basis) == expected
    assert all(is_derivation(g, D) for D in basis)


def test_non_derivation():
    assert not is_derivation(fixtures.sl2(), Endo.identity(3))


@pytest.mark.parametrize("name", ["heisenberg", "sl2", "fix_b", "fix_c"])
def test_induced_leibniz_algebra(name):
    L = induced_leibniz(CORPUS[name])
    assert leibniz_check(L).passed


def test_induced_leibniz_needs_fi():
    with pytest.raises(FundamentalIdentityError):
        induced_leibniz(fixtures.fix_c_broken())
    L = induced_leibniz(fixtures.fix_c_broken(), check=False)
    assert L.dim == 6
    assert L.labels[0] == "e1^e2"


def test_constructor_validation():
    with pytest.raises(ArityMismatch):
        NLieAlgebra(1, 3)
    with pytest.raises(ArityMismatch):
        NLieAlgebra(3, 4, {(0, 1): {2: 1}})
    with pytest.raises(ValueError):
        NLieAlgebra(2, 3, {(1, 0): {2: 1}})
    g = NLieAlgebra(2, 3, {(0, 1): {2: 0}})
    assert g.is_abelian()


def test_to_json_is_one_based():
    assert fixtures.heisenberg().to_json() == {
        "n": 2, "dim": 3, "name": "heisenberg",
        "brackets": [{"args": [1, 2], "value": {"3": "1"}}],
    }


def test_rescaling_keeps_the_verdict():
    for g in CORPUS.values():
        assert fi_check(g.scaled(-2)).passed


def test_random_generators_are_seeded():
    a = random_skew_map(np.random.default_rng(5), 3, 4)
    b = random_skew_map(np.random.default_rng(5), 3, 4)
    assert a.to_json() == b.to_json()
    p = perturb(np.random.default_rng(5), fixtures.fix_c())
    assert p.n == 3 and p.dim == 4


def test_fundamental_identity_matches_the_induced_leibniz_algebra():
    rng = np.random.default_rng(2024)
    algebras = list(CORPUS.values())
    for k in range(100):
        g = perturb(rng, algebras[k % len(algebras)])
        fi = fi_check(g)
        leibniz = leibniz_check(induced_leibniz(g, check=False))
        assert action_identity_check(g).passed == fi.passed
        if fi.passed:
            assert leibniz.passed
        else:
            assert leibniz.failed or action_identity_check(g).failed
