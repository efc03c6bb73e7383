import itertools

import numpy as np

from checks import Report, sweep, tensor_report, timed
from errors import DimensionMismatch
from multilinear import Endo, basis_vector, exact_eval, rational, rational_array, zeros

"""
Finite dimensional LEFT Leibniz algebras given by their bracket tables:
    x o (y o z) = (x o y) o z + y o (x o z)
and the Nijenhuis operator machinery (deformed bracket, torsion, the three
consequences of a vanishing torsion).
"""


class BracketTable:
    """table[i, j] is the coordinate vector of [x_i, x_j]"""

    __slots__ = ("table", "labels")

    def __init__(self, table, labels=None):
        arr = rational_array(table)
        if arr.ndim != 3 or not arr.shape[0] == arr.shape[1] == arr.shape[2]:
            raise ValueError(f"a bracket table needs shape (d, d, d), got {arr.shape}")
        arr.flags.writeable = False
        self.table = arr
        self.labels = tuple(labels) if labels is not None else tuple(f"x{i + 1}" for i in range(arr.shape[0]))

    @property
    def dim(self):
        return self.table.shape[0]

    @property
    def flat(self):
        """The dim^2 x dim layout, row i*dim + j holding [x_i, x_j]"""
        return self.table.reshape(self.dim * self.dim, self.dim)

    @classmethod
    def zero(cls, dim, labels=None):
        return cls(zeros((dim, dim, dim)), labels)

    @classmethod
    def from_entries(cls, dim, entries, labels=None):
        """Sparse construction: {(i, j): {k: c}} with 0-based indices"""
        arr = zeros((dim, dim, dim))
        for (i, j), value in entries.items():
            for k, c in value.items():
                arr[i, j, k] = rational(c)
        return cls(arr, labels)

    @classmethod
    def from_function(cls, dim, fn, labels=None):
        """Tabulate a bilinear map given on basis pairs: fn(i, j) -> coordinate vector"""
        arr = zeros((dim, dim, dim))
        for i, j in itertools.product(range(dim), repeat=2):
            arr[i, j] = fn(i, j)
        return cls(arr, labels)

    def bracket(self, x, y):
        if len(x) != self.dim or len(y) != self.dim:
            raise DimensionMismatch("BracketTable.bracket", self.dim, (len(x), len(y)))
        return np.asarray(y).dot(np.tensordot(x, self.table, axes=([0], [0])))

    def is_zero(self):
        return not np.any(self.table != 0)

    def _check(self, other, what):
        if other.dim != self.dim:
            raise DimensionMismatch(what, self.dim, other.dim)

    def __add__(self, other):
        self._check(other, "BracketTable.add")
        return BracketTable(self.table + other.table, self.labels)

    def __sub__(self, other):
        self._check(other, "BracketTable.sub")
        return BracketTable(self.table - other.table, self.labels)

    def __eq__(self, other):
        if not isinstance(other, BracketTable):
            return NotImplemented
        return self.table.shape == other.table.shape and bool(np.all(self.table == other.table))

    __hash__ = None

    def vector_json(self, v):
        return {self.labels[k]: str(c) for k, c in enumerate(v) if c}

    def to_json(self):
        out = {}
        for i, j in itertools.product(range(self.dim), repeat=2):
            v = self.vector_json(self.table[i, j])
            if v:
                out[f"[{self.labels[i]},{self.labels[j]}]"] = v
        return out


class EndoOnLeibniz(Endo):
    """An endomorphism of the carrier of a Leibniz algebra"""

    __slots__ = ()


def _check_endo(L, N, what):
    if N.dim != L.dim:
        raise DimensionMismatch(what, L.dim, N.dim)


def _leibniz_terms(T):
    # D[a, b, c] = x_c o (x_a o x_b)
    D = np.tensordot(T, T, axes=([2], [1]))
    left = D.transpose(2, 0, 1, 3)            # x o (y o z)
    swapped = D.transpose(0, 2, 1, 3)         # y o (x o z)
    nested = np.tensordot(T, T, axes=([2], [0]))  # (x o y) o z
    return left - swapped - nested


def leibniz_defect(L):
    """x o (y o z) - y o (x o z) - (x o y) o z for every basis triple, shape (d, d, d, d)"""
    return exact_eval(_leibniz_terms, [L.table], 2, 3 * L.dim)


def _triple_witness(L):
    def describe(case, defect):
        return {"triple": [L.labels[i] for i in case], "defect": L.vector_json(defect)}
    return describe


@timed
def leibniz_check(L, collect_all=False, seed=None, suite="leibniz.identity"):
    """Left Leibniz identity on all basis triples; the witness is the lexicographically first failing triple"""
    return tensor_report(suite, leibniz_defect(L), 3, _triple_witness(L),
                         collect_all=collect_all, seed=seed)


def leibniz_check_naive(L, collect_all=False, seed=None, suite="leibniz.identity"):
    """Brute force triple loop straight from the definition (the oracle for leibniz_check)"""
    d = L.dim
    e = [basis_vector(d, i) for i in range(d)]

    def defect(case):
        x, y, z = (e[i] for i in case)
        return (L.bracket(x, L.bracket(y, z)) - L.bracket(y, L.bracket(x, z))
                - L.bracket(L.bracket(x, y), z))

    return sweep(suite, itertools.product(range(d), repeat=3), defect, _triple_witness(L),
                 collect_all=collect_all, seed=seed)


def _deformed_terms(T, M):
    left = np.tensordot(M, T, axes=([0], [0]))
    right = np.tensordot(T, M, axes=([1], [0])).transpose(0, 2, 1)
    image = np.tensordot(T, M, axes=([2], [1]))
    return left + right - image


def _images_bracket(T, M):
    # [N x_i, N x_j]
    half = np.tensordot(M, T, axes=([0], [0]))
    return np.tensordot(half, M, axes=([1], [0])).transpose(0, 2, 1)


def _torsion_terms(T, M):
    return _images_bracket(T, M) - np.tensordot(_deformed_terms(T, M), M, axes=([2], [1]))


def deformed_bracket(L, N):
    """[x, y]_N = [Nx, y] + [x, Ny] - N[x, y]"""
    _check_endo(L, N, "deformed_bracket")
    return BracketTable(exact_eval(_deformed_terms, [L.table, N.entries], 2, 3 * L.dim), L.labels)


def nijenhuis_torsion(L, N):
    """TN(x, y) = [Nx, Ny] - N[x, y]_N, returned as the table of the bilinear map TN"""
    _check_endo(L, N, "nijenhuis_torsion")
    d = L.dim
    return BracketTable(exact_eval(_torsion_terms, [L.table, N.entries], 3, 4 * d * d), L.labels)


def is_nijenhuis(L, N):
    return nijenhuis_torsion(L, N).is_zero()


def morphism_defect(L, N):
    """N[x, y]_N - [Nx, Ny] on basis pairs, shape (d, d, d)"""
    return -nijenhuis_torsion(L, N).table


def _pair_witness(L):
    def describe(case, defect):
        return {"pair": [L.labels[i] for i in case], "defect": L.vector_json(defect)}
    return describe


@timed
def torsion_check(L, N, seed=None, suite="nijenhuis.torsion"):
    return tensor_report(suite, nijenhuis_torsion(L, N).table, 2, _pair_witness(L), seed=seed)


@timed
def morphism_check(L, N, collect_all=False, seed=None, suite="nijenhuis.morphism"):
    return tensor_report(suite, morphism_defect(L, N), 2, _pair_witness(L),
                         collect_all=collect_all, seed=seed)


@timed
def nijenhuis_consequences_check(L, N, collect_all=False, seed=None, suite="nijenhuis.consequences"):
    """
    The three consequences of a vanishing torsion, each reported separately:
    (1) [.,.]_N is Leibniz, (2) N[x, y]_N = [Nx, Ny], (3) [.,.] + [.,.]_N is Leibniz.
    A nonzero torsion is reported as a failed precondition part.
    """
    _check_endo(L, N, "nijenhuis_consequences_check")
    deformed = deformed_bracket(L, N)
    parts = []
    notes = []

    torsion = torsion_check(L, N, seed=seed)
    if not torsion.passed:
        notes.append("precondition violated: N is not a Nijenhuis operator")
        parts.append(torsion)

    parts.append(leibniz_check(deformed, collect_all, seed, suite=f"{suite}.deformed_leibniz"))
    parts.append(morphism_check(L, N, collect_all, seed, suite=f"{suite}.morphism"))
    parts.append(leibniz_check(L + deformed, collect_all, seed, suite=f"{suite}.sum_leibniz"))
    return Report.combine(suite, parts, notes=notes, seed=seed)


def random_table(rng, dim, coeff_range=3, density=0.3):
    """Seeded random bracket table, mostly zeros"""
    values = rng.integers(-coeff_range, coeff_range + 1, size=(dim, dim, dim))
    mask = rng.random(size=(dim, dim, dim)) < density
    return BracketTable(np.where(mask, values, 0))
