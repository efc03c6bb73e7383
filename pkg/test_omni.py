#------------------------------------------------------------
# To run the unit tests, type "py.test" at the command line.
#------------------------------------------------------------

import numpy as np
import pytest

import fixtures
from errors import DimensionMismatch, FundamentalIdentityError
from multilinear import Endo, TensorPairValue, WedgeVector, commutator
from nlie import fi_check, perturb, random_skew_map
from omni import (
    PAIRING_NOTE, OmniElement, carrier_basis, carrier_dim, carrier_labels, deformation_identity_check,
    derivation_correction_check, graph_test, nonabelian_bracket, nonabelian_compat_check,
    nonabelian_table, omni_bracket, omni_compat_check, omni_leibniz_check, omni_nijenhuis_check,
    omni_pairing, omni_table, rho_v, square_check,
)

CORPUS = fixtures.corpus()
SMALL = ["abelian_2_3", "abelian_3_4", "heisenberg", "sl2", "fix_b", "fix_c", "euclidean_2"]


def E(m, a, b, n):
    return OmniElement.from_endo(Endo.elementary(m, a, b), n)


def w(m, *idx):
    return OmniElement.from_wedge(WedgeVector.basis(m, idx))


def test_carrier():
    assert carrier_dim(3, 3) == 12
    assert carrier_labels(2, 2) == ("E11", "E12", "E21", "E22", "e1", "e2")
    basis = carrier_basis(3, 2)
    assert len(basis) == carrier_dim(3, 2)
    assert basis[1].endo == Endo.elementary(3, 0, 1)


def test_omni_bracket_on_basis():
    # {E_21, e1} = L_{E_21} e1 = e2
    x = omni_bracket(E(2, 1, 0, 2), w(2, 0))
    assert x.endo.is_zero()
    assert x.wedge == WedgeVector.basis(2, (1,))
    # not skew: {e1, E_21} = 0
    assert omni_bracket(w(2, 0), E(2, 1, 0, 2)).is_zero()


def test_pairing_is_symmetric():
    rng = np.random.default_rng(2)
    for _ in range(10):
        x = OmniElement(Endo.random(rng, 3), WedgeVector(3, 2, {(0, 1): 1, (1, 2): -1}))
        y = OmniElement(Endo.random(rng, 3), WedgeVector(3, 2, {(0, 2): 2}))
        assert omni_pairing(x, y) == omni_pairing(y, x)


def test_pairing_of_endo_and_wedge():
    # (E_31, e1^e2)_+ = E_31 e1 (x) e2 - E_31 e2 (x) e1 = e3 (x) e2
    value = omni_pairing(E(3, 2, 0, 3), w(3, 0, 1))
    assert value == TensorPairValue(3, 1, {(2, (1,)): 1})


def test_rho_v_is_the_derivation_action():
    w0 = TensorPairValue(2, 0, {(0, ()): 1})
    assert rho_v(E(2, 1, 0, 2))(w0) == TensorPairValue(2, 0, {(1, ()): 1})


@pytest.mark.parametrize("m, n", [(2, 2), (3, 2), (3, 3)])
def test_omni_leibniz_and_compatibility(m, n):
    assert omni_leibniz_check(m, n).passed
    assert omni_compat_check(m, n).passed


def test_compatibility_catches_a_mutated_bracket():
    report = omni_compat_check(2, 2, bracket=lambda x, y: OmniElement(
        commutator(x.endo, y.endo), WedgeVector.zero(x.dim, x.n - 1)))
    assert report.failed
    assert set(report.witness) >= {"defect"}


def test_mixed_dimensions_are_rejected():
    with pytest.raises(DimensionMismatch):
        omni_bracket(E(2, 0, 0, 2), E(3, 0, 0, 2))


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_graph_criterion_on_corpus(name):
    g = CORPUS[name]
    assert graph_test(g).passed == fi_check(g).passed


def test_graph_criterion_on_broken_fixture():
    g = fixtures.fix_c_broken()
    assert graph_test(g).failed
    assert fi_check(g).failed


def test_graph_criterion_agrees_with_fi_on_random_maps():
    rng = np.random.default_rng(42)
    disagreements = []
    for k in range(100):
        n = 2 + k % 2
        m = int(rng.integers(n, 5))
        F = random_skew_map(rng, n, m, density=0.3)
        if k % 5 == 0:
            F = perturb(rng, CORPUS["fix_c"] if n == 3 else CORPUS["sl2"])
        if graph_test(F).passed != fi_check(F).passed:
            disagreements.append(F.to_json())
    assert disagreements == []


def test_nonabelian_bracket_example():
    g = fixtures.heisenberg()
    # {e1, e2}_g = e1 o e2 = e3
    x = nonabelian_bracket(g, w(3, 0), w(3, 1))
    assert x.endo.is_zero()
    assert x.wedge == WedgeVector.basis(3, (2,))
    # {E_11, e2}_g = [E_11, ad_e2] = E_31
    y = nonabelian_bracket(g, E(3, 0, 0, 2), w(3, 1))
    assert y.endo == Endo.elementary(3, 2, 0)
    assert y.wedge.is_zero()


def test_nonabelian_bracket_needs_fi():
    g = fixtures.fix_c_broken()
    with pytest.raises(FundamentalIdentityError):
        nonabelian_bracket(g, E(4, 0, 0, 3), w(4, 0, 1))
    with pytest.raises(FundamentalIdentityError):
        nonabelian_compat_check(g)


@pytest.mark.parametrize("name", ["abelian_2_3", "abelian_3_4"])
def test_abelian_algebras_give_the_omni_bracket(name):
    g = CORPUS[name]
    assert nonabelian_table(g) == omni_table(g.dim, g.n)


@pytest.mark.parametrize("name", SMALL)
def test_nonabelian_structure(name):
    g = CORPUS[name]
    compat = nonabelian_compat_check(g)
    assert compat.passed
    assert PAIRING_NOTE in compat.notes
    assert derivation_correction_check(g).passed
    assert square_check(g).passed
    assert omni_nijenhuis_check(g).passed
    assert deformation_identity_check(g).passed


def test_uncorrected_compatibility_fails_off_derivations():
    # E_11 is not a derivation of sl2, so the correction terms are needed
    g = fixtures.sl2()
    report = nonabelian_compat_check(g)
    assert report.part("nonabelian.compat.corrected").passed
    assert report.part("nonabelian.compat.derivations").passed
    x, y = E(3, 0, 0, 2), w(3, 1)
    assert not (nonabelian_bracket(g, x, y) == omni_bracket(x, y))
