#------------------------------------------------------------
# To run the unit tests, type "py.test" at the command line.
#------------------------------------------------------------

import numpy as np
import pytest

from checks import Status
from errors import ArityMismatch, DegreeOverflowError, NambuPoissonError, PreconditionError
from polycalc import (
    GenSection, PolyForm, PolyMultiVec, PolySpace, PolyVecField, auxiliary_sign, calculus_suite,
    certify_nambu_poisson, closed_form, cor63_suite, ext_d, interior_vec, lie_form, lie_form_components,
    lie_multivec, nambu_poisson_check, np_generators, pi_courant, psi, psi_inverse, random_section, sharp,
    std_courant, thm62_suite, vf_bracket,
)


@pytest.fixture
def q3():
    return PolySpace(3)


@pytest.fixture
def q4():
    return PolySpace(4)


def test_exterior_derivative(q3):
    y1, y2, y3 = q3.gens
    w = PolyForm(q3, 1, {(2,): y1 * y2})
    assert ext_d(w) == PolyForm(q3, 2, {(0, 2): y2, (1, 2): y1})
    assert ext_d(ext_d(w)).is_zero()


def test_interior_product_uses_the_first_slot(q3):
    y1, y2, _ = q3.gens
    d2 = PolyVecField.basis(q3, 1)
    assert interior_vec(d2, PolyForm.basis(q3, (0, 1))) == PolyForm(q3, 1, {(0,): -1})
    X = PolyVecField.basis(q3, 0, y1)
    assert interior_vec(X, PolyForm(q3, 1, {(0,): y2})).as_function() == y1 * y2
    with pytest.raises(PreconditionError):
        interior_vec(X, PolyForm.function(q3, y1))


def test_lie_derivative_of_a_form(q3):
    y1 = q3.gens[0]
    d1 = PolyVecField.basis(q3, 0)
    assert lie_form(d1, PolyForm(q3, 1, {(1,): y1})) == PolyForm.basis(q3, (1,))
    assert lie_form(d1, PolyForm.function(q3, y1 ** 2)).as_function() == 2 * y1


def test_cartan_formula_matches_components(q3):
    rng = np.random.default_rng(1)
    for k in range(4):
        w = PolyForm(q3, k, {J: q3.random_poly(rng, 2) for J in [(0, 1, 2)[:k]]})
        X = PolyVecField(q3, [q3.random_poly(rng, 2) for _ in range(3)])
        assert lie_form(X, w) == lie_form_components(X, w)


def test_vector_field_bracket(q3):
    y1, y2, _ = q3.gens
    X = PolyVecField.basis(q3, 1, y1)
    Y = PolyVecField.basis(q3, 0, y2)
    assert vf_bracket(X, Y) == PolyVecField(q3, [y1, -y2, 0])
    assert vf_bracket(Y, X) == -vf_bracket(X, Y)


def test_lie_derivative_of_a_multivector(q3):
    y2 = q3.gens[1]
    X = PolyVecField.basis(q3, 0, y2)
    assert lie_multivec(X, PolyMultiVec.basis(q3, (0, 1))).is_zero()
    # L_{y1 d1} d1 = -d1
    X = PolyVecField.basis(q3, 0, q3.gens[0])
    assert lie_multivec(X, PolyMultiVec.basis(q3, (0,))) == -PolyMultiVec.basis(q3, (0,))


def test_sharp(q3):
    pi = PolyMultiVec.basis(q3, (0, 1, 2))
    assert sharp(pi, PolyForm.basis(q3, (0, 1))) == PolyVecField.basis(q3, 2)
    assert sharp(pi, PolyForm.basis(q3, (0, 2))) == PolyVecField.basis(q3, 1, -1)
    with pytest.raises(ArityMismatch):
        sharp(pi, PolyForm.basis(q3, (0,)))


def test_degree_cap():
    S = PolySpace(2, max_degree=3)
    with pytest.raises(DegreeOverflowError) as info:
        PolyForm.function(S, S.gens[0] ** 4)
    assert info.value.code == "E_DEGREE"


def test_generators_start_with_coordinates(q3):
    functions = np_generators(q3, seed=3, extra=2)
    assert functions[:3] == list(q3.gens)
    assert len(functions) == 5
    assert all(not f.is_ground for f in functions)


def test_nambu_poisson_examples(q3, q4):
    y1, y4 = q4.gens[0], q4.gens[3]
    passing = [
        PolyMultiVec.basis(q3, (0, 1, 2)),
        PolyMultiVec(q4, 3, {(0, 1, 2): y4}),
        PolyMultiVec(q4, 2, {(0, 1): y1 ** 2 + 1, (2, 3): 1}),
    ]
    for pi in passing:
        report = nambu_poisson_check(pi)
        assert report.passed
        assert any(note.startswith("verified on a generator set") for note in report.notes)


def test_non_poisson_bivector_is_rejected(q3):
    y2 = q3.gens[1]
    pi = PolyMultiVec(q3, 2, {(1, 2): y2, (0, 1): 1})
    report = nambu_poisson_check(pi)
    assert report.failed
    assert set(report.witness) == {"functions", "defect"}
    with pytest.raises(NambuPoissonError):
        certify_nambu_poisson(pi)


def test_twisted_bracket_needs_a_certificate(q3):
    pi = PolyMultiVec.basis(q3, (0, 1))
    s = GenSection.zero(q3, 2)
    with pytest.raises(NambuPoissonError):
        pi_courant(pi, s, s)


def test_zero_structure_gives_the_standard_bracket(q3):
    cert = certify_nambu_poisson(PolyMultiVec.zero(q3, 2))
    rng = np.random.default_rng(4)
    for _ in range(5):
        s, t = random_section(rng, q3, 2), random_section(rng, q3, 2)
        assert pi_courant(cert, s, t) == std_courant(s, t)


def test_psi_is_invertible(q4):
    pi = PolyMultiVec(q4, 3, {(0, 1, 2): q4.gens[3]})
    rng = np.random.default_rng(5)
    s = random_section(rng, q4, 3)
    assert psi_inverse(pi, psi(pi, s)) == s


def fix_b_structure(space):
    return certify_nambu_poisson(PolyMultiVec(space, 3, {(0, 1, 2): space.gens[3]}))


def test_twisted_structure_on_a_linear_nambu_poisson_tensor(q4):
    report = thm62_suite(fix_b_structure(q4), samples=3, seed=7)
    assert report.passed
    assert [p.suite.rsplit(".", 1)[1] for p in report.parts] == [
        "leibniz", "module", "square", "compat", "psi", "psi_pairing", "psi_inverse"]


def test_twisted_structure_on_a_poisson_bivector(q3):
    y1, y2, y3 = q3.gens
    # the linear Poisson structure of sl2
    pi = PolyMultiVec(q3, 2, {(0, 1): 2 * y2, (0, 2): -2 * y3, (1, 2): y1})
    assert thm62_suite(certify_nambu_poisson(pi), samples=3, seed=8).passed


def test_twisted_structure_detects_a_dropped_term(q4):
    cert = fix_b_structure(q4)

    def mutated(pi, s, t):
        dropped = sharp(pi.pi, interior_vec(t.vec, ext_d(s.form)))
        return pi_courant(pi, s, t) - GenSection.from_vec(dropped, s.n)

    report = thm62_suite(cert, samples=5, seed=7, bracket=mutated)
    assert report.failed
    assert report.part("polycalc.thm62.psi").failed


def test_closed_forms_are_closed(q4):
    rng = np.random.default_rng(9)
    for index in range(6):
        assert ext_d(closed_form(rng, q4, 2, index)).is_zero()


def test_hamiltonian_sections_with_closed_forms(q4):
    report = cor63_suite(fix_b_structure(q4), samples=4, seed=3)
    assert report.passed
    aux = report.part("polycalc.cor63.aux_sign")
    assert aux.notes[0].startswith("sign=")


def test_auxiliary_sign_values(q4):
    pi = PolyMultiVec(q4, 3, {(0, 1, 2): q4.gens[3]})
    rng = np.random.default_rng(2)
    xi = PolyForm(q4, 2, {(0, 1): q4.random_poly(rng, 1)})
    eta = PolyForm(q4, 2, {(1, 2): q4.random_poly(rng, 1)})
    assert auxiliary_sign(pi, xi, eta) in (1, -1, 0, None)
    assert auxiliary_sign(PolyMultiVec.zero(q4, 3), xi, eta) == 0


@pytest.mark.parametrize("m, n", [(2, 2), (3, 2), (3, 3)])
def test_calculus_suite(m, n):
    report = calculus_suite(m, n, samples=8, seed=1)
    assert report.passed
    assert len(report.parts) == 4


def test_linear_functions_accept_numpy_integers(q3):
    y1, y2, y3 = q3.gens
    rng = np.random.default_rng(0)
    vec = rng.integers(-3, 4, size=3)
    assert q3.linear(vec) == sum((int(c) * y for c, y in zip(vec, q3.gens)), q3.zero)
    assert q3.linear(np.array([2, 0, -1], dtype=np.int64)) == 2 * y1 - y3
    assert q3.const(np.int64(5)) == 5 * q3.one


def test_auxiliary_sign_on_a_linear_nambu_poisson_tensor(q4):
    aux = cor63_suite(fix_b_structure(q4), samples=6, seed=3).part("polycalc.cor63.aux_sign")
    assert aux.passed
    assert aux.notes[0] == "sign=+1"


def test_undetermined_auxiliary_sign_is_skipped(q3):
    report = cor63_suite(certify_nambu_poisson(PolyMultiVec.zero(q3, 2)), samples=3, seed=1)
    aux = report.part("polycalc.cor63.aux_sign")
    assert aux.status is Status.SKIP
    assert aux.notes[0] == "sign=undetermined"
    assert report.passed


def _skew(pi, s, t):
    return pi_courant(pi, s, t) - pi_courant(pi, t, s)


def _without_vector_bracket(pi, s, t):
    return pi_courant(pi, s, t) - GenSection.from_vec(vf_bracket(s.vec, t.vec), s.n)


def _without_contraction(pi, s, t):
    return pi_courant(pi, s, t) + GenSection.from_form(interior_vec(t.vec, ext_d(s.form)))


def _doubled_lie_derivative(pi, s, t):
    return pi_courant(pi, s, t) + GenSection.from_form(lie_form(s.vec, t.form))


@pytest.mark.parametrize("mutated, part", [
    (_skew, "leibniz"),
    (_without_vector_bracket, "module"),
    (_without_contraction, "square"),
    (_doubled_lie_derivative, "compat"),
])
def test_each_bracket_identity_catches_a_mutation(q4, mutated, part):
    report = thm62_suite(fix_b_structure(q4), samples=5, seed=7, bracket=mutated)
    assert report.failed
    assert report.part(f"polycalc.thm62.{part}").failed
