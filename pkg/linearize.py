import itertools
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

import config
from checks import Report, serialize, sweep, timed
from errors import DimensionMismatch, NambuPoissonError, PreconditionError
from multilinear import (
    Endo, TensorPairValue, WedgeVector, endo_derivation, random_vector, random_wedge, tensor_basis, wedge_basis,
    wedge_label,
)
from nlie import NLieAlgebra, ad, fo_compose, require_fi
from omni import (
    OmniElement, carrier_basis, carrier_labels, nonabelian_bracket, omni_bracket, omni_pairing, rho_g, rho_v,
)
from polycalc import (
    GenSection, PolyForm, PolyMultiVec, PolySpace, PolyVecField, certify_nambu_poisson, ext_d,
    interior_vec, lie_form, np_form_bracket, pi_courant, rho_pi, sharp, std_courant, std_pairing,
    to_fraction, vf_bracket,
)

log = logging.getLogger(__name__)

"""
Linearization: V (or an n-Lie algebra g) is read as the space of linear
functions on V*, y_i being the linear function of e_i. Then

    A in gl(V)          ->  A^ = sum_i l_{A e_i} d/dy_i      (linear vector field)
    u in wedge^{n-1} V  ->  u^ = sum_J u_J dy_J              (constant form)
    v (x) w             ->  bar(v (x) w) = l_v w^            (linear (n-2)-form)
    [e_1..e_n]_g        ->  pi_g = sum_I l_{[e_I]} d_I       (linear n-vector)

and the algebraic identities of the omni and nonabelian omni n-Lie algebras
become identities of the Cartan calculus, the higher Courant bracket and its
pi_g-twisted version.
"""


@dataclass(frozen=True, eq=False)
class LinModel:
    """V = Q^m with the coordinate space V*; `algebra` is set for the twisted (n-Lie) side"""

    m: int
    n: int
    algebra: NLieAlgebra = None
    max_degree: int = config.max_degree

    def __post_init__(self):
        if self.algebra is not None and (self.algebra.dim, self.algebra.n) != (self.m, self.n):
            raise DimensionMismatch("LinModel", (self.m, self.n), (self.algebra.dim, self.algebra.n))

    @classmethod
    def of(cls, g, max_degree=config.max_degree):
        return cls(g.dim, g.n, g, max_degree)

    @cached_property
    def space(self):
        return PolySpace(self.m, self.max_degree)

    def _check(self, dim, what):
        if dim != self.m:
            raise DimensionMismatch(what, self.m, dim)

    def hat_endo(self, A):
        self._check(A.dim, "hat_endo")
        return PolyVecField(self.space, [self.space.linear(A.column(i)) for i in range(self.m)])

    def hat_wedge(self, u):
        self._check(u.dim, "hat_wedge")
        return PolyForm(self.space, u.grade, {J: c for J, c in u.terms()})

    def bar_tensor(self, w):
        self._check(w.dim, "bar_tensor")
        S = self.space
        return PolyForm.from_terms(S, w.grade, [(J, S.coord(i) * S.const(c)) for (i, J), c in w.terms()])

    def phi(self, x):
        """A + u -> A^ + u^"""
        return GenSection(self.hat_endo(x.endo), self.hat_wedge(x.wedge))

    def phi_inverse(self, s):
        """Read A and u back off a linear vector field plus a constant form"""
        S, m = self.space, self.m
        entries = np.empty((m, m), dtype=object)
        for i, p in enumerate(s.vec.comps):
            for k in range(m):
                entries[k, i] = to_fraction(p.coeff(S.coord(k)))
            if p != S.linear(entries[:, i]):
                raise PreconditionError(f"component d{i + 1} = {p.as_expr()} is not linear")
        coeffs = {}
        for J, p in s.form.terms():
            if not p.is_ground:
                raise PreconditionError(f"coefficient of {s.form.label(J)} = {p.as_expr()} is not constant")
            coeffs[J] = to_fraction(p.LC)
        return OmniElement(Endo(entries), WedgeVector(m, s.form.grade, coeffs))


def linear_np(g, max_degree=config.max_degree):
    """pi_g = sum over increasing I of l_{[e_I]} d_I; g must satisfy the Fundamental Identity"""
    require_fi(g)
    S = LinModel.of(g, max_degree).space
    return PolyMultiVec(S, g.n, {V: S.linear(vec) for V, vec in g.constants.items()})


## Case generation

def _endos(model, cfg, rng):
    if cfg.exhaustive_in_range(model.m, model.n):
        return [(f"E{a + 1}{b + 1}", Endo.elementary(model.m, a, b))
                for a in range(model.m) for b in range(model.m)]
    return [(f"random{i}", Endo.random(rng, model.m)) for i in range(cfg.samples)]


def _wedges(model, cfg, rng, k):
    if cfg.exhaustive_in_range(model.m, model.n):
        return [(wedge_label(U), WedgeVector.basis(model.m, U)) for U in wedge_basis(model.m, k)]
    return [(f"random{i}", random_wedge(rng, model.m, k)) for i in range(cfg.samples)]


def _tensors(model, cfg, rng):
    if cfg.exhaustive_in_range(model.m, model.n):
        return [(TensorPairValue.label(key), TensorPairValue(model.m, model.n - 2, {key: 1}))
                for key in tensor_basis(model.m, model.n)]
    out = []
    for i in range(cfg.samples):
        v = random_vector(rng, model.m)
        w = random_wedge(rng, model.m, model.n - 2)
        out.append((f"random{i}", TensorPairValue.from_terms(
            model.m, model.n - 2, [((k, J), c * a) for k, c in enumerate(v) for J, a in w.terms()])))
    return out


def _elements(model, cfg, rng):
    if cfg.exhaustive_in_range(model.m, model.n):
        return list(zip(carrier_labels(model.m, model.n), carrier_basis(model.m, model.n)))
    return [(f"random{i}", OmniElement(Endo.random(rng, model.m), random_wedge(rng, model.m, model.n - 1)))
            for i in range(cfg.samples)]


def _pairs(first, second, cfg, model, rng):
    """All pairs in exhaustive mode, cfg.samples seeded draws from the product otherwise"""
    if cfg.exhaustive_in_range(model.m, model.n):
        return list(itertools.product(first, second))
    i = rng.integers(len(first), size=cfg.samples)
    j = rng.integers(len(second), size=cfg.samples)
    return [(first[a], second[b]) for a, b in zip(i, j)]


def _check(suite, pairs, defect, names, cfg):
    def describe(case, d):
        out = {name: {"label": label, "value": serialize(value)} for name, (label, value) in zip(names, case)}
        out["defect"] = serialize(d)
        return out

    return sweep(suite, pairs, lambda case: defect(*(value for _, value in case)), describe,
                 collect_all=cfg.collect_all, seed=cfg.seed)


def _notes(model, cfg):
    mode = "exhaustive" if cfg.exhaustive_in_range(model.m, model.n) else f"random, {cfg.samples} samples"
    return [f"m={model.m}, n={model.n}, {mode}"]


## Linearization of the standard structure

@timed
def lemma41_suite(model, cfg=config.DEFAULT, suite="linearize.lemma41"):
    """
    form1  (A^, u^)_+ = bar((A, u)_+)
    form2  d(A^, u^)_+ = (L_A u)^
    form3  L_{A^} u^ = (L_A u)^
    form4  [A^, B^] = ([A, B])^
    """
    rng = np.random.default_rng(cfg.seed)
    endos = _endos(model, cfg, rng)
    wedges = _wedges(model, cfg, rng, model.n - 1)
    with_wedges = _pairs(endos, wedges, cfg, model, rng)
    endo_pairs = _pairs(endos, endos, cfg, model, rng)
    n = model.n

    def form1(A, u):
        x, y = OmniElement.from_endo(A, n), OmniElement.from_wedge(u)
        return std_pairing(model.phi(x), model.phi(y)) - model.bar_tensor(omni_pairing(x, y))

    def form2(A, u):
        return ext_d(interior_vec(model.hat_endo(A), model.hat_wedge(u))) - model.hat_wedge(endo_derivation(A, u))

    def form3(A, u):
        return lie_form(model.hat_endo(A), model.hat_wedge(u)) - model.hat_wedge(endo_derivation(A, u))

    def form4(A, B):
        return vf_bracket(model.hat_endo(A), model.hat_endo(B)) - model.hat_endo(A @ B - B @ A)

    parts = [
        _check(f"{suite}.form1", with_wedges, form1, ("A", "u"), cfg),
        _check(f"{suite}.form2", with_wedges, form2, ("A", "u"), cfg),
        _check(f"{suite}.form3", with_wedges, form3, ("A", "u"), cfg),
        _check(f"{suite}.form4", endo_pairs, form4, ("A", "B"), cfg),
    ]
    return Report.combine(suite, parts, notes=_notes(model, cfg), seed=cfg.seed)


@timed
def thm42_suite(model, cfg=config.DEFAULT, bracket=std_courant, suite="linearize.thm42"):
    """
    phi    Phi^{-1} Phi = id on the carrier
    ind1   (Phi x, Phi y)_+ = bar((x, y)_+)
    ind2   [[Phi x, Phi y]] = Phi {x, y}
    ind3   bar(rho_V(x) w) = L_{rho(Phi x)} bar(w)
    """
    rng = np.random.default_rng(cfg.seed)
    elements = _elements(model, cfg, rng)
    tensors = _tensors(model, cfg, rng)
    pairs = _pairs(elements, elements, cfg, model, rng)
    actions = _pairs(elements, tensors, cfg, model, rng)

    def roundtrip(x):
        return model.phi_inverse(model.phi(x)) - x

    def ind1(x, y):
        return std_pairing(model.phi(x), model.phi(y)) - model.bar_tensor(omni_pairing(x, y))

    def ind2(x, y):
        return bracket(model.phi(x), model.phi(y)) - model.phi(omni_bracket(x, y))

    def ind3(x, w):
        return model.bar_tensor(rho_v(x)(w)) - lie_form(model.phi(x).vec, model.bar_tensor(w))

    parts = [
        _check(f"{suite}.phi", [(e,) for e in elements], roundtrip, ("x",), cfg),
        _check(f"{suite}.ind1", pairs, ind1, ("x", "y"), cfg),
        _check(f"{suite}.ind2", pairs, ind2, ("x", "y"), cfg),
        _check(f"{suite}.ind3", actions, ind3, ("x", "w"), cfg),
    ]
    return Report.combine(suite, parts, notes=_notes(model, cfg), seed=cfg.seed)


## Linear Nambu-Poisson structures

def np_gate(g, cfg, suite):
    """(certificate, None) when pi_g passes the Nambu-Poisson check, else (None, SKIP report)"""
    try:
        return certify_nambu_poisson(linear_np(g, cfg.max_degree), seed=cfg.seed), None
    except NambuPoissonError as e:
        return None, Report.skip(suite, f"pi_g is not Nambu-Poisson: {e}", seed=cfg.seed)


@timed
def lemma64_suite(g, cfg=config.DEFAULT, suite="linearize.lemma64"):
    """
    t2  pi_g#(u^) = (ad_u)^
    t4  [u^, v^]_{pi_g} = (u o v)^
    t6  pi_g#(L_{A^} u^) = (ad_{L_A u})^
    """
    cert, skipped = np_gate(g, cfg, suite)
    if skipped:
        return skipped
    model = LinModel.of(g, cfg.max_degree)
    pi = cert.pi
    rng = np.random.default_rng(cfg.seed)
    wedges = _wedges(model, cfg, rng, g.n - 1)
    endos = _endos(model, cfg, rng)

    def t2(u):
        return sharp(pi, model.hat_wedge(u)) - model.hat_endo(ad(g, u))

    def t4(u, v):
        return np_form_bracket(pi, model.hat_wedge(u), model.hat_wedge(v)) - model.hat_wedge(fo_compose(g, u, v))

    def t6(A, u):
        return (sharp(pi, lie_form(model.hat_endo(A), model.hat_wedge(u)))
                - model.hat_endo(ad(g, endo_derivation(A, u))))

    parts = [
        _check(f"{suite}.t2", [(u,) for u in wedges], t2, ("u",), cfg),
        _check(f"{suite}.t4", _pairs(wedges, wedges, cfg, model, rng), t4, ("u", "v"), cfg),
        _check(f"{suite}.t6", _pairs(endos, wedges, cfg, model, rng), t6, ("A", "u"), cfg),
    ]
    return Report.combine(suite, [cert.report] + parts, notes=_notes(model, cfg), seed=cfg.seed)


@timed
def thm65_suite(g, cfg=config.DEFAULT, algebra_bracket=nonabelian_bracket, suite="linearize.thm65"):
    """
    ind12  (Phi x, Phi y)_+ = bar((x, y)_+)
    ind22  [[Phi x, Phi y]]_{pi_g} = Phi {x, y}_g
    ind32  bar(rho_g(x) w) = L_{rho_pi(Phi x)} bar(w)
    For abelian g also the degeneration to the untwisted correspondence, case by case.
    """
    cert, skipped = np_gate(g, cfg, suite)
    if skipped:
        return skipped
    model = LinModel.of(g, cfg.max_degree)
    pi = cert.pi
    rng = np.random.default_rng(cfg.seed)
    elements = _elements(model, cfg, rng)
    tensors = _tensors(model, cfg, rng)
    pairs = _pairs(elements, elements, cfg, model, rng)
    actions = _pairs(elements, tensors, cfg, model, rng)

    def ind12(x, y):
        return std_pairing(model.phi(x), model.phi(y)) - model.bar_tensor(omni_pairing(x, y))

    def ind22(x, y):
        return pi_courant(cert, model.phi(x), model.phi(y)) - model.phi(algebra_bracket(g, x, y))

    def ind32(x, w):
        return model.bar_tensor(rho_g(g, x)(w)) - lie_form(rho_pi(pi, model.phi(x)), model.bar_tensor(w))

    parts = [
        _check(f"{suite}.ind12", pairs, ind12, ("x", "y"), cfg),
        _check(f"{suite}.ind22", pairs, ind22, ("x", "y"), cfg),
        _check(f"{suite}.ind32", actions, ind32, ("x", "w"), cfg),
    ]
    if g.is_abelian():
        def degeneration(x, y):
            twisted = pi_courant(cert, model.phi(x), model.phi(y)) - std_courant(model.phi(x), model.phi(y))
            algebraic = algebra_bracket(g, x, y) - omni_bracket(x, y)
            return [twisted, algebraic]
        parts.append(_check(f"{suite}.degeneration", pairs, degeneration, ("x", "y"), cfg))
    return Report.combine(suite, [cert.report] + parts, notes=_notes(model, cfg), seed=cfg.seed)


def check_linearization(g, cfg=config.DEFAULT):
    """All four linearization suites for the n-Lie algebra g, in canonical order"""
    model = LinModel(g.dim, g.n, max_degree=cfg.max_degree)
    return [lemma41_suite(model, cfg), thm42_suite(model, cfg), lemma64_suite(g, cfg), thm65_suite(g, cfg)]
