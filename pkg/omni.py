import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from checks import Report, sweep, tensor_report, timed
from errors import ArityMismatch, DimensionMismatch
from leibniz import (
    BracketTable, EndoOnLeibniz, deformed_bracket, leibniz_check, morphism_check, torsion_check,
)
from multilinear import (
    Endo, TensorPairValue, WedgeVector, commutator, endo_derivation, endo_derivation_tensor,
    exact_eval, rational_array, tensor_basis, wedge_basis, wedge_label, zeros,
)
from nlie import ad, derivations, fo_compose, require_fi

log = logging.getLogger(__name__)

"""
The omni n-Lie algebra gl(V) + wedge^{n-1} V and the nonabelian omni n-Lie
algebra gl(g) + wedge^{n-1} g of an n-Lie algebra g.

The carrier is materialized with the basis E_ab (a*m + b, sending e_b to e_a)
followed by the canonical wedge basis, so every statement about the brackets
becomes a statement about a BracketTable.
"""

PAIRING_NOTE = ("the nonabelian pairing is taken g (x) wedge^{n-2} g valued, as in the omni "
                "pairing; a g (x) wedge^{n-1} g valued pairing cannot be formed from it")


@dataclass(frozen=True)
class OmniElement:
    endo: Endo
    wedge: WedgeVector

    def __post_init__(self):
        if self.endo.dim != self.wedge.dim:
            raise DimensionMismatch("OmniElement", self.endo.dim, self.wedge.dim)

    @property
    def dim(self):
        return self.endo.dim

    @property
    def n(self):
        return self.wedge.grade + 1

    @classmethod
    def zero(cls, m, n):
        return cls(Endo.zero(m), WedgeVector.zero(m, n - 1))

    @classmethod
    def from_endo(cls, A, n):
        return cls(A, WedgeVector.zero(A.dim, n - 1))

    @classmethod
    def from_wedge(cls, u):
        return cls(Endo.zero(u.dim), u)

    @classmethod
    def from_array(cls, m, n, arr):
        A = Endo(np.asarray(arr[:m * m], dtype=object).reshape(m, m))
        return cls(A, WedgeVector.from_array(m, n - 1, arr[m * m:]))

    def to_array(self):
        return np.concatenate([self.endo.to_array(), self.wedge.to_array()])

    def is_zero(self):
        return self.endo.is_zero() and self.wedge.is_zero()

    def _check(self, other, what):
        if not isinstance(other, OmniElement):
            return False
        if (other.dim, other.n) != (self.dim, self.n):
            raise DimensionMismatch(what, (self.dim, self.n), (other.dim, other.n))
        return True

    def __add__(self, other):
        if not self._check(other, "OmniElement.add"):
            return NotImplemented
        return OmniElement(self.endo + other.endo, self.wedge + other.wedge)

    def __sub__(self, other):
        if not self._check(other, "OmniElement.sub"):
            return NotImplemented
        return OmniElement(self.endo - other.endo, self.wedge - other.wedge)

    def __neg__(self):
        return OmniElement(-self.endo, -self.wedge)

    def __mul__(self, scalar):
        return OmniElement(self.endo * scalar, self.wedge * scalar)

    __rmul__ = __mul__

    def to_json(self):
        return {"endo": self.endo.to_json(), "wedge": self.wedge.to_json()}


def _same_space(x, y, what):
    if (x.dim, x.n) != (y.dim, y.n):
        raise DimensionMismatch(what, (x.dim, x.n), (y.dim, y.n))


def _check_algebra(g, x, what):
    if x.dim != g.dim:
        raise DimensionMismatch(what, g.dim, x.dim)
    if x.n != g.n:
        raise ArityMismatch(f"{what}: element of arity {x.n} for an {g.n}-Lie algebra")


## Carrier

@lru_cache(maxsize=None)
def carrier_labels(m, n):
    endo = [f"E{a + 1}{b + 1}" if m < 10 else f"E{a + 1},{b + 1}" for a in range(m) for b in range(m)]
    return tuple(endo + [wedge_label(U) for U in wedge_basis(m, n - 1)])


def carrier_dim(m, n):
    return m * m + len(wedge_basis(m, n - 1))


def carrier_basis(m, n):
    """E_ab in row-major order, then the wedge basis"""
    elements = [OmniElement.from_endo(Endo.elementary(m, a, b), n) for a in range(m) for b in range(m)]
    elements += [OmniElement.from_wedge(WedgeVector.basis(m, U)) for U in wedge_basis(m, n - 1)]
    return elements


def tabulate(m, n, bracket):
    """The BracketTable of a bilinear bracket on the carrier"""
    basis = carrier_basis(m, n)
    return BracketTable.from_function(
        len(basis), lambda i, j: bracket(basis[i], basis[j]).to_array(), carrier_labels(m, n))


## The omni n-Lie algebra

def omni_bracket(x, y):
    """{A+u, B+v} = [A,B] + L_A v"""
    _same_space(x, y, "omni_bracket")
    return OmniElement(commutator(x.endo, y.endo), endo_derivation(x.endo, y.wedge))


def _pairing_half(A, v):
    # sum_r (-1)^r A v_r (x) v_1 ^ .. ^v_r^ .. ^ v_{n-1}   (0-based r)
    terms = []
    for idx, c in v.terms():
        for r, i in enumerate(idx):
            rest = idx[:r] + idx[r + 1:]
            for k, a in enumerate(A.column(i)):
                if a:
                    terms.append(((k, rest), (-1) ** r * c * a))
    return TensorPairValue.from_terms(v.dim, v.grade - 1, terms)


def omni_pairing(x, y):
    """(A+u, B+v)_+ in V (x) wedge^{n-2} V"""
    _same_space(x, y, "omni_pairing")
    return _pairing_half(x.endo, y.wedge) + _pairing_half(y.endo, x.wedge)


def rho_v(x):
    """rho_V(A+u) = L_A acting on V (x) wedge^{n-2} V"""
    return lambda w: endo_derivation_tensor(x.endo, w)


def omni_table(m, n):
    return tabulate(m, n, omni_bracket)


@timed
def omni_leibniz_check(m, n, collect_all=False, seed=None):
    return leibniz_check(omni_table(m, n), collect_all, seed, suite="omni.leibniz")


## Compatibility of pairing, bracket and anchor, vectorized over the carrier

def pairing_tensor(m, n):
    """P[i, j] = coordinates of (b_i, b_j)_+ on the basis of V (x) wedge^{n-2} V"""
    basis = carrier_basis(m, n)
    P = zeros((len(basis), len(basis), len(tensor_basis(m, n))))
    for i, j in itertools.product(range(len(basis)), repeat=2):
        P[i, j] = omni_pairing(basis[i], basis[j]).to_array()
    return P


def anchor_tensor(m, n, anchor):
    """R[a] = matrix of anchor(b_a) on V (x) wedge^{n-2} V; R[a, s, t] is coordinate s of the image of t"""
    basis = carrier_basis(m, n)
    keys = tensor_basis(m, n)
    R = zeros((len(basis), len(keys), len(keys)))
    for a, b in enumerate(basis):
        act = anchor(b)
        for t, (i, J) in enumerate(keys):
            R[a, :, t] = act(TensorPairValue.from_terms(m, n - 2, [((i, J), 1)])).to_array()
    return R


def _compat_terms(B, Pl, Pr, Pss, Rs):
    lhs1 = np.tensordot(B, Pl, axes=([2], [0]))
    lhs2 = np.tensordot(B, Pr, axes=([2], [1])).transpose(0, 2, 1, 3)
    rhs = np.tensordot(Rs, Pss, axes=([2], [2])).transpose(0, 2, 3, 1)
    return lhs1 + lhs2 - rhs


def compat_defect(table, P, R, S=None):
    """
    ({x,y}, z)_+ + (y, {x,z})_+ - rho(x)(y, z)_+ for x, y, z running over the rows
    of S (carrier coordinates; the whole carrier basis when S is None).
    """
    D = table.dim
    if S is None:
        Bs, Pl, Pr, Pss, Rs = table.table, P, P, P, R
    else:
        S = rational_array(S)
        Bs = np.tensordot(np.tensordot(S, table.table, axes=([1], [0])), S, axes=([1], [1])).transpose(0, 2, 1)
        Pl = np.tensordot(P, S, axes=([1], [1])).transpose(0, 2, 1)     # (D, k, T)
        Pr = np.tensordot(S, P, axes=([1], [0]))                         # (k, D, T)
        Pss = np.tensordot(S, Pl, axes=([1], [0]))                       # (k, k, T)
        Rs = np.tensordot(S, R, axes=([1], [0]))                         # (k, T, T)
    return exact_eval(_compat_terms, [Bs, Pl, Pr, Pss, Rs], 2, 2 * D + P.shape[2])


def _carrier_triple_witness(labels, m, n):
    def describe(case, defect):
        return {"triple": [labels[i] for i in case],
                "defect": TensorPairValue.from_array(m, n - 2, defect).to_json()}
    return describe


@timed
def omni_compat_check(m, n, bracket=omni_bracket, collect_all=False, seed=None, suite="omni.compat"):
    """({x,y},z)_+ + (y,{x,z})_+ = rho_V(x)(y,z)_+ on all basis triples of the carrier"""
    table = tabulate(m, n, bracket)
    defect = compat_defect(table, pairing_tensor(m, n), anchor_tensor(m, n, rho_v))
    return tensor_report(suite, defect, 3, _carrier_triple_witness(carrier_labels(m, n), m, n),
                         collect_all=collect_all, seed=seed)


## Graphs of skew maps

def sharp(F, u):
    """F#(u)(v) = F(u, v)"""
    return ad(F, u)


@timed
def graph_test(F, collect_all=False, seed=None, suite="omni.graph"):
    """
    The graph {F#(u) + u} is closed under the omni bracket iff
    [F#(u), F#(v)] = F#(L_{F#(u)} v) on all basis pairs.
    """
    bases = wedge_basis(F.dim, F.n - 1)
    objects = [WedgeVector.basis(F.dim, U) for U in bases]
    images = [sharp(F, u) for u in objects]

    def defect(case):
        i, j = case
        bracket = omni_bracket(OmniElement(images[i], objects[i]), OmniElement(images[j], objects[j]))
        return (bracket.endo - sharp(F, bracket.wedge)).entries

    def describe(case, d):
        i, j = case
        return {"u": wedge_label(bases[i]), "v": wedge_label(bases[j]),
                "defect": [[str(c) for c in row] for row in d]}

    return sweep(suite, itertools.product(range(len(objects)), repeat=2), defect, describe,
                 collect_all=collect_all, seed=seed)


## The nonabelian omni n-Lie algebra

def nonabelian_bracket(g, x, y, check=True):
    """{A+u, B+v}_g = [A,B] + [A,ad_v] + [ad_u,B] - ad_{L_A v} + L_A v + u o v"""
    if check:
        require_fi(g)
    _check_algebra(g, x, "nonabelian_bracket")
    _check_algebra(g, y, "nonabelian_bracket")
    A, u, B, v = x.endo, x.wedge, y.endo, y.wedge
    ad_u, ad_v = ad(g, u), ad(g, v)
    la_v = endo_derivation(A, v)
    endo = commutator(A, B) + commutator(A, ad_v) + commutator(ad_u, B) - ad(g, la_v)
    return OmniElement(endo, la_v + fo_compose(g, u, v))


def correction(g, x, y):
    """[A, ad_v] - ad_{L_A v}, vanishing when A is a derivation of g"""
    A, v = x.endo, y.wedge
    return OmniElement.from_endo(commutator(A, ad(g, v)) - ad(g, endo_derivation(A, v)), g.n)


def rho_g(g, x):
    """rho_g(A+u) = L_{A + ad_u} acting on g (x) wedge^{n-2} g"""
    A = x.endo + ad(g, x.wedge)
    return lambda w: endo_derivation_tensor(A, w)


def nonabelian_table(g, check=True):
    if check:
        require_fi(g)
    return tabulate(g.dim, g.n, lambda x, y: nonabelian_bracket(g, x, y, check=False))


def derivation_subspace(g):
    """Carrier coordinates of a basis of Der(g) + wedge^{n-1} g"""
    rows = [OmniElement.from_endo(A, g.n).to_array() for A in derivations(g)]
    D = carrier_dim(g.dim, g.n)
    for k in range(g.dim * g.dim, D):
        row = zeros(D)
        row[k] = 1
        rows.append(row)
    return np.array(rows, dtype=object).reshape(len(rows), D)


@timed
def derivation_correction_check(g, seed=None, suite="nonabelian.derivation_correction"):
    """[A, ad_v] - ad_{L_A v} = 0 for A in a basis of Der(g) and every basis v"""
    ders = derivations(g)
    objects = [WedgeVector.basis(g.dim, U) for U in wedge_basis(g.dim, g.n - 1)]

    def defect(case):
        i, j = case
        return correction(g, OmniElement.from_endo(ders[i], g.n), OmniElement.from_wedge(objects[j])).endo.entries

    def describe(case, d):
        i, j = case
        return {"derivation": ders[i].to_json(), "v": objects[j].to_json(),
                "defect": [[str(c) for c in row] for row in d]}

    return sweep(suite, itertools.product(range(len(ders)), range(len(objects))), defect, describe, seed=seed)


@timed
def nonabelian_compat_check(g, collect_all=False, seed=None, suite="nonabelian.compat"):
    """
    rho_g(x)(y,z)_+ = ({x,y}_g - corr(x,y), z)_+ + (y, {x,z}_g - corr(x,z))_+ on all basis
    triples, and the uncorrected identity for x, y, z in Der(g) + wedge^{n-1} g.
    """
    require_fi(g)
    m, n = g.dim, g.n
    labels = carrier_labels(m, n)
    P = pairing_tensor(m, n)
    R = anchor_tensor(m, n, lambda x: rho_g(g, x))
    table = nonabelian_table(g, check=False)
    corrected = table - tabulate(m, n, lambda x, y: correction(g, x, y))

    full = tensor_report(f"{suite}.corrected", compat_defect(corrected, P, R), 3,
                         _carrier_triple_witness(labels, m, n), collect_all=collect_all, seed=seed)

    S = derivation_subspace(g)
    der_labels = [f"d{i + 1}" for i in range(len(S) - len(wedge_basis(m, n - 1)))] \
        + [wedge_label(U) for U in wedge_basis(m, n - 1)]
    restricted = tensor_report(f"{suite}.derivations", compat_defect(table, P, R, S), 3,
                               _carrier_triple_witness(der_labels, m, n), collect_all=collect_all, seed=seed,
                               notes=[f"Der(g) has dimension {len(S) - len(wedge_basis(m, n - 1))}"])
    parts = [full, restricted, derivation_correction_check(g, seed=seed)]
    return Report.combine(suite, parts, notes=[PAIRING_NOTE], seed=seed)


@timed
def square_check(g, seed=None, suite="nonabelian.square"):
    """{x, x}_g = -ad_{L_A u} + L_A u + u o u for x = b_i + b_j over all carrier basis pairs i <= j"""
    require_fi(g)
    basis = carrier_basis(g.dim, g.n)
    labels = carrier_labels(g.dim, g.n)

    def defect(case):
        i, j = case
        x = basis[i] + basis[j]
        la_u = endo_derivation(x.endo, x.wedge)
        expected = OmniElement(-ad(g, la_u), la_u + fo_compose(g, x.wedge, x.wedge))
        return (nonabelian_bracket(g, x, x, check=False) - expected).to_array()

    def describe(case, d):
        return {"x": [labels[i] for i in case], "defect": [str(c) for c in d]}

    cases = itertools.combinations_with_replacement(range(len(basis)), 2)
    return sweep(suite, cases, defect, describe, seed=seed)


## Nijenhuis deformation

def omni_nijenhuis(g):
    """N(A+u) = ad_u on the carrier gl(g) + wedge^{n-1} g"""
    require_fi(g)
    m, n = g.dim, g.n
    D = carrier_dim(m, n)
    N = zeros((D, D))
    for k, U in enumerate(wedge_basis(m, n - 1)):
        N[:m * m, m * m + k] = ad(g, WedgeVector.basis(m, U)).to_array()
    return EndoOnLeibniz(N)


@timed
def omni_nijenhuis_check(g, seed=None, suite="nonabelian.nijenhuis"):
    """The torsion of N(A+u) = ad_u vanishes for the omni bracket, and N{x,y}_N = {Nx, Ny}"""
    N = omni_nijenhuis(g)
    table = omni_table(g.dim, g.n)
    parts = [torsion_check(table, N, seed=seed, suite=f"{suite}.torsion"),
             morphism_check(table, N, seed=seed, suite=f"{suite}.image")]
    return Report.combine(suite, parts, seed=seed)


@timed
def deformation_identity_check(g, collect_all=False, seed=None, suite="nonabelian.deformation"):
    """{.,.}_g = {.,.} + {.,.}_N on all basis pairs, and {.,.}_g is a Leibniz bracket"""
    N = omni_nijenhuis(g)
    omni = omni_table(g.dim, g.n)
    table = nonabelian_table(g, check=False)
    labels = carrier_labels(g.dim, g.n)
    defect = table.table - (omni + deformed_bracket(omni, N)).table

    def describe(case, d):
        return {"pair": [labels[i] for i in case], "defect": table.vector_json(d)}

    parts = [tensor_report(f"{suite}.sum", defect, 2, describe, collect_all=collect_all, seed=seed),
             leibniz_check(table, collect_all, seed, suite=f"{suite}.leibniz")]
    return Report.combine(suite, parts, seed=seed)
