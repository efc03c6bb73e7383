import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType

import numpy as np
import sympy

from checks import sweep, tensor_report, timed
from errors import ArityMismatch, DimensionMismatch, FundamentalIdentityError
from leibniz import BracketTable
from multilinear import (
    Endo, WedgeVector, basis_vector, endo_derivation, permutation_sign, rational,
    rational_array, wedge_basis, wedge_label, zeros,
)

log = logging.getLogger(__name__)

# BRIEF SUMMARY OF NAMES
# n: arity of the bracket
# dim (m): dimension of the carrier g
# constants: increasing n-tuple of basis indices -> coordinate vector of the bracket
# tensor: the dense, fully skew table of shape (m,)*n + (m,)
# U: increasing (n-1)-tuple (a basis fundamental object), V: increasing n-tuple


@dataclass(frozen=True, eq=False)
class NLieAlgebra:
    """
    A skew-symmetric n-ary bracket on Q^dim given by structure constants on
    increasing index tuples. The Fundamental Identity is NOT enforced here:
    fi_check decides it, and the same class serves as the skew map F of the
    graph criterion.
    """

    n: int
    dim: int
    constants: dict = field(default_factory=dict)
    name: str = ""
    basis: tuple = None

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 2):
            raise ArityMismatch(f"the arity must be an int >= 2, got {self.n!r}")
        if not (isinstance(self.dim, int) and self.dim >= 1):
            raise DimensionMismatch("NLieAlgebra", "dim >= 1", self.dim)
        clean = {}
        for args, value in self.constants.items():
            args = tuple(int(a) for a in args)
            if len(args) != self.n:
                raise ArityMismatch(f"bracket arguments {args} do not have length {self.n}")
            if any(a >= b for a, b in zip(args, args[1:])) or not all(0 <= a < self.dim for a in args):
                raise ValueError(f"bracket arguments {args} are not increasing indices in 0..{self.dim - 1}")
            vec = self._vector(value)
            if np.any(vec != 0):
                clean[args] = vec
        object.__setattr__(self, "constants", MappingProxyType(clean))
        if self.basis is not None:
            if len(self.basis) != self.dim:
                raise DimensionMismatch("basis names", self.dim, len(self.basis))
            object.__setattr__(self, "basis", tuple(self.basis))

    def _vector(self, value):
        if isinstance(value, dict):
            vec = zeros(self.dim)
            for k, c in value.items():
                vec[int(k)] = rational(c)
            return vec
        vec = rational_array(value)
        if vec.shape != (self.dim,):
            raise DimensionMismatch("bracket value", self.dim, vec.shape)
        return vec

    @property
    def labels(self):
        return self.basis or tuple(f"e{i + 1}" for i in range(self.dim))

    @cached_property
    def tensor(self):
        m, n = self.dim, self.n
        T = zeros((m,) * n + (m,))
        for args, vec in self.constants.items():
            for perm in itertools.permutations(range(n)):
                key = tuple(args[p] for p in perm)
                T[key] = vec if permutation_sign(perm) > 0 else -vec
        T.flags.writeable = False
        return T

    @cached_property
    def fi_report(self):
        return fi_check(self)

    def is_abelian(self):
        return not self.constants

    def vector_json(self, v):
        return {self.labels[k]: str(c) for k, c in enumerate(v) if c}

    def with_bracket(self, args, value):
        """Copy with the bracket on one increasing tuple replaced"""
        constants = dict(self.constants)
        constants[tuple(args)] = self._vector(value)
        return NLieAlgebra(self.n, self.dim, constants, self.name, self.basis)

    def scaled(self, c):
        c = rational(c)
        return NLieAlgebra(self.n, self.dim, {k: v * c for k, v in self.constants.items()},
                           self.name, self.basis)

    def to_json(self):
        """Instance-file encoding, 1-based indices"""
        d = {"n": self.n, "dim": self.dim, "brackets": [
            {"args": [a + 1 for a in args],
             "value": {str(k + 1): str(c) for k, c in enumerate(vec) if c}}
            for args, vec in sorted(self.constants.items())
        ]}
        if self.name:
            d["name"] = self.name
        if self.basis is not None:
            d["basis"] = list(self.basis)
        return d

    def __repr__(self):
        return f"NLieAlgebra(n={self.n}, dim={self.dim}, name={self.name!r}, brackets={len(self.constants)})"


def bracket_eval(g, *args):
    if len(args) != g.n:
        raise ArityMismatch(f"an {g.n}-bracket takes {g.n} arguments, got {len(args)}")
    result = g.tensor
    for v in args:
        if len(v) != g.dim:
            raise DimensionMismatch("bracket_eval", g.dim, len(v))
        result = np.tensordot(v, result, axes=([0], [0]))
    return result


def _check_object(g, u):
    if u.dim != g.dim:
        raise DimensionMismatch("fundamental object", g.dim, u.dim)
    if u.grade != g.n - 1:
        raise ArityMismatch(f"a fundamental object of an {g.n}-Lie algebra has grade {g.n - 1}, got {u.grade}")


def ad(g, u):
    """ad_u v = [u_1, ..., u_{n-1}, v], extended linearly in u"""
    _check_object(g, u)
    entries = zeros((g.dim, g.dim))
    for J, c in u.terms():
        entries = entries + c * g.tensor[J].T
    return Endo(entries)


def fo_compose(g, u, v):
    """u o v = sum_i v_1 ^ ... ^ ad_u v_i ^ ... ^ v_{n-1}"""
    _check_object(g, v)
    return endo_derivation(ad(g, u), v)


def _basis_objects(g):
    return [WedgeVector.basis(g.dim, U) for U in wedge_basis(g.dim, g.n - 1)]


@timed
def fi_check(g, collect_all=False, seed=None, suite="nlie.fi"):
    """
    Fundamental Identity on basis tuples, straight from the definition:
        [u_1..u_{n-1}, [v_1..v_n]] = sum_i [v_1.., [u_1..u_{n-1}, v_i], ..v_n]
    Cases are (increasing (n-1)-tuple, increasing n-tuple) in lexicographic order.
    """
    e = [basis_vector(g.dim, i) for i in range(g.dim)]

    def defect(case):
        U, V = case
        us = [e[i] for i in U]
        vs = [e[i] for i in V]
        lhs = bracket_eval(g, *us, bracket_eval(g, *vs))
        rhs = zeros(g.dim)
        for i in range(g.n):
            inner = bracket_eval(g, *us, vs[i])
            rhs = rhs + bracket_eval(g, *vs[:i], inner, *vs[i + 1:])
        return lhs - rhs

    def describe(case, d):
        U, V = case
        return {"u": [g.labels[i] for i in U], "v": [g.labels[i] for i in V],
                "defect": g.vector_json(d)}

    cases = itertools.product(wedge_basis(g.dim, g.n - 1), wedge_basis(g.dim, g.n))
    return sweep(suite, cases, defect, describe, collect_all=collect_all, seed=seed)


def require_fi(g):
    """Raise FundamentalIdentityError carrying the witness unless g satisfies FI"""
    report = g.fi_report
    if not report.passed:
        raise FundamentalIdentityError(report)
    return report


def derivation_defect(g, A):
    """A[x_1..x_n] - sum_i [x_1..A x_i..x_n] on every basis tuple, shape (m,)*n + (m,)"""
    if A.dim != g.dim:
        raise DimensionMismatch("derivation_defect", g.dim, A.dim)
    T, M = g.tensor, A.entries
    out = np.tensordot(T, M, axes=([g.n], [1]))
    for i in range(g.n):
        out = out - np.moveaxis(np.tensordot(M, T, axes=([0], [i])), 0, i)
    return out


def is_derivation(g, A):
    return not np.any(derivation_defect(g, A) != 0)


@timed
def ad_derivation_check(g, collect_all=False, seed=None, suite="nlie.ad_derivation"):
    """Every ad_U (U a basis fundamental object) is a derivation of the n-bracket"""
    bases = wedge_basis(g.dim, g.n - 1)
    increasing = wedge_basis(g.dim, g.n)
    defects = zeros((len(bases), len(increasing), g.dim))
    for i, u in enumerate(_basis_objects(g)):
        D = derivation_defect(g, ad(g, u))
        for j, V in enumerate(increasing):
            defects[i, j] = D[V]

    def describe(case, d):
        i, j = case
        return {"u": wedge_label(bases[i]), "v": [g.labels[k] for k in increasing[j]],
                "defect": g.vector_json(d)}

    return tensor_report(suite, defects, 2, describe, collect_all=collect_all, seed=seed)


@timed
def action_identity_check(g, collect_all=False, seed=None, suite="nlie.action_identity"):
    """[ad_u, ad_v] = ad_{u o v} on all pairs of basis fundamental objects"""
    objects = _basis_objects(g)
    ads = [ad(g, u) for u in objects]
    idx = range(len(objects))

    def defect(case):
        i, j = case
        return (ads[i] @ ads[j] - ads[j] @ ads[i] - ad(g, fo_compose(g, objects[i], objects[j]))).entries

    def describe(case, d):
        i, j = case
        return {"u": objects[i].to_json(), "v": objects[j].to_json(),
                "defect": [[str(c) for c in row] for row in d]}

    return sweep(suite, itertools.product(idx, idx), defect, describe, collect_all=collect_all, seed=seed)


def induced_leibniz(g, check=True):
    """
    The Leibniz algebra (wedge^{n-1} g, o) as a BracketTable on the canonical
    wedge basis. With check=False the table is built even when FI fails.
    """
    if check:
        require_fi(g)
    objects = _basis_objects(g)
    labels = [wedge_label(U) for U in wedge_basis(g.dim, g.n - 1)]
    return BracketTable.from_function(
        len(objects), lambda i, j: fo_compose(g, objects[i], objects[j]).to_array(), labels)


def _fraction(x):
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def derivations(g):
    """Basis of Der(g): the exact nullspace of the linear system 'A is a derivation'"""
    m, n = g.dim, g.n
    T = g.tensor
    rows = []
    for V in wedge_basis(m, n):
        for c in range(m):
            row = [0] * (m * m)
            for q in range(m):
                row[c * m + q] += T[V][q]
            for i, vi in enumerate(V):
                for a in range(m):
                    W = V[:i] + (a,) + V[i + 1:]
                    row[a * m + vi] -= T[W][c]
            if any(row):
                rows.append([sympy.Rational(x.numerator, x.denominator) if x else 0 for x in row])
    system = sympy.Matrix(rows) if rows else sympy.zeros(1, m * m)
    basis = []
    for vec in system.nullspace():
        entries = [_fraction(x) for x in vec]
        basis.append(Endo(np.array(entries, dtype=object).reshape(m, m)))
    log.debug("Der(%s) has dimension %d", g.name or g, len(basis))
    return basis


## Random structure constants

def random_skew_map(rng, n, m, coeff_range=3, density=0.5, name="random"):
    constants = {}
    for V in wedge_basis(m, n):
        if rng.random() < density:
            constants[V] = rng.integers(-coeff_range, coeff_range + 1, size=m)
    return NLieAlgebra(n, m, constants, name)


def perturb(rng, g, coeff_range=3):
    """
    Half the time a rescaling by a nonzero integer (the Fundamental Identity is
    homogeneous, so the verdict is kept), otherwise one structure constant is
    replaced by noise.
    """
    if rng.random() < 0.5:
        c = 0
        while c == 0:
            c = int(rng.integers(-coeff_range, coeff_range + 1))
        return g.scaled(c)
    V = wedge_basis(g.dim, g.n)[int(rng.integers(len(wedge_basis(g.dim, g.n))))]
    return g.with_bracket(V, rng.integers(-coeff_range, coeff_range + 1, size=g.dim))
