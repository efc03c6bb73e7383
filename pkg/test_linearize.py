#------------------------------------------------------------
# To run the unit tests, type "py.test" at the command line.
#------------------------------------------------------------

import itertools
from math import comb

import numpy as np
import pytest

import fixtures
from config import SuiteConfig
from errors import DimensionMismatch, FundamentalIdentityError, PreconditionError
from linearize import (
    LinModel, _pairs, check_linearization, lemma41_suite, lemma64_suite, linear_np, thm42_suite, thm65_suite,
)
from multilinear import Endo, TensorPairValue, WedgeVector
from omni import OmniElement, omni_bracket
from polycalc import GenSection, PolyForm, PolyMultiVec, PolyVecField, ext_d, interior_vec, vf_bracket

EXHAUSTIVE = SuiteConfig()
RANDOM = SuiteConfig(mode="random", samples=6, seed=11)


class TransposedModel(LinModel):
    """Linearizes A by its transpose: an anti-homomorphism"""

    def hat_endo(self, A):
        return super().hat_endo(A.transpose())


def test_hat_maps():
    model = LinModel(3, 2)
    S = model.space
    y1, y2, y3 = S.gens
    # E_21 sends e1 to e2, so its hat is y2 d1
    assert model.hat_endo(Endo.elementary(3, 1, 0)) == PolyVecField(S, [y2, 0, 0])
    assert model.hat_wedge(WedgeVector.basis(3, (2,))) == PolyForm.basis(S, (2,))
    w = TensorPairValue(3, 0, {(1, ()): 3})
    assert model.bar_tensor(w) == PolyForm.function(S, 3 * y2)


def test_phi_inverse():
    model = LinModel(2, 2)
    S = model.space
    y1, y2 = S.gens
    x = OmniElement(Endo.elementary(2, 0, 1) * 2, WedgeVector.basis(2, (1,)))
    assert model.phi_inverse(model.phi(x)) == x
    with pytest.raises(PreconditionError):
        model.phi_inverse(GenSection(PolyVecField(S, [y1 ** 2, 0]), PolyForm.zero(S, 1)))
    with pytest.raises(PreconditionError):
        model.phi_inverse(GenSection(PolyVecField.zero(S), PolyForm(S, 1, {(0,): y2})))


def test_model_checks_dimensions():
    with pytest.raises(DimensionMismatch):
        LinModel(3, 2, algebra=fixtures.fix_b())
    with pytest.raises(DimensionMismatch):
        LinModel(3, 2).hat_endo(Endo.identity(2))


@pytest.mark.parametrize("m, n", [(2, 2), (3, 2), (3, 3), (4, 3)])
def test_standard_linearization_exhaustive(m, n):
    model = LinModel(m, n)
    lemma = lemma41_suite(model, EXHAUSTIVE)
    assert lemma.passed
    assert lemma.checked == 3 * m ** 2 * comb(m, n - 1) + m ** 4
    assert "exhaustive" in lemma.notes[0]
    assert thm42_suite(model, EXHAUSTIVE).passed


def test_standard_linearization_random():
    model = LinModel(5, 3)
    report = thm42_suite(model, RANDOM)
    assert report.passed
    assert "random, 6 samples" in report.notes[0]
    assert lemma41_suite(model, RANDOM).passed


def test_transposed_hat_breaks_the_commutator():
    report = lemma41_suite(TransposedModel(2, 2), EXHAUSTIVE)
    assert report.failed
    assert report.part("linearize.lemma41.form4").failed


def test_dropping_the_lie_derivative_breaks_the_bracket():
    def mutated(s, t):
        return GenSection(vf_bracket(s.vec, t.vec), -interior_vec(t.vec, ext_d(s.form)))

    report = thm42_suite(LinModel(2, 2), EXHAUSTIVE, bracket=mutated)
    assert report.failed
    assert report.part("linearize.thm42.ind2").failed
    assert set(report.part("linearize.thm42.ind2").witness) == {"x", "y", "defect"}


def test_linear_nambu_poisson_tensors():
    pi = linear_np(fixtures.fix_b())
    y4 = pi.space.gens[3]
    assert pi == PolyMultiVec(pi.space, 3, {(0, 1, 2): y4})

    pi = linear_np(fixtures.heisenberg())
    assert pi == PolyMultiVec(pi.space, 2, {(0, 1): pi.space.gens[2]})

    assert linear_np(fixtures.abelian(2, 3)).is_zero()
    with pytest.raises(FundamentalIdentityError):
        linear_np(fixtures.fix_c_broken())


@pytest.mark.parametrize("name", ["heisenberg", "sl2", "fix_b", "euclidean_2", "fix_c"])
def test_twisted_linearization(name):
    g = fixtures.corpus()[name]
    lemma = lemma64_suite(g, EXHAUSTIVE)
    assert lemma.passed
    assert lemma.parts[0].suite == "polycalc.nambu_poisson"
    assert thm65_suite(g, EXHAUSTIVE).passed


def test_twisted_linearization_needs_the_algebra_bracket():
    def untwisted(g, x, y):
        return omni_bracket(x, y)

    report = thm65_suite(fixtures.fix_c(), RANDOM, algebra_bracket=untwisted)
    assert report.failed
    assert report.part("linearize.thm65.ind22").failed


@pytest.mark.parametrize("name", ["abelian_2_3", "abelian_3_4"])
def test_abelian_algebras_degenerate(name):
    report = thm65_suite(fixtures.corpus()[name], EXHAUSTIVE)
    assert report.passed
    assert report.part("linearize.thm65.degeneration").passed


def test_check_linearization_order():
    reports = check_linearization(fixtures.heisenberg(), RANDOM)
    assert [r.suite for r in reports] == [
        "linearize.lemma41", "linearize.thm42", "linearize.lemma64", "linearize.thm65"]
    assert all(r.passed for r in reports)


def test_full_range_sweeps_beyond_the_default_dimensions():
    model = LinModel(4, 2)
    assert not EXHAUSTIVE.exhaustive_in_range(4, 2)
    report = lemma41_suite(model, SuiteConfig(full_range=True))
    assert report.passed
    assert "exhaustive" in report.notes[0]
    assert report.checked == 3 * 4 ** 2 * comb(4, 1) + 4 ** 4


def test_random_pairs_are_drawn_from_the_product():
    cfg = SuiteConfig(mode="random", samples=40, seed=3)
    model = LinModel(5, 3)
    first = [(f"a{i}", i) for i in range(3)]
    second = [(f"b{i}", i) for i in range(3)]
    pairs = _pairs(first, second, cfg, model, np.random.default_rng(cfg.seed))
    assert len(pairs) == 40
    assert set(pairs) <= set(itertools.product(first, second))
    assert len(set(pairs)) > 3
    assert pairs == _pairs(first, second, cfg, model, np.random.default_rng(cfg.seed))
