import itertools
import math
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType

import numpy as np

from errors import DimensionMismatch

"""
Exact linear and multilinear algebra over the rationals.

V has the fixed ordered basis e_0, ..., e_{m-1} (printed 1-based as e1, ..., em).
Vectors of V are numpy object arrays of Fractions, endomorphisms are Endo
(column j is the image of e_j), elements of the exterior powers are sparse
WedgeVectors stored on strictly increasing index tuples with the permutation
sign folded into the coefficient. Nothing here ever rounds.
"""


ZERO = Fraction(0)
ONE = Fraction(1)


def rational(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot read {x!r} as an exact rational")


def zeros(shape):
    return np.full(shape, ZERO, dtype=object)


def rational_array(values):
    arr = np.array(values, dtype=object)
    flat = [rational(v) for v in arr.flat]
    return np.array(flat, dtype=object).reshape(arr.shape)


def basis_vector(m, i):
    v = zeros(m)
    v[i] = ONE
    return v


def random_vector(rng, m, coeff_range=3):
    return rational_array(rng.integers(-coeff_range, coeff_range + 1, size=m))


def permutation_sign(seq):
    """Sign of the permutation sorting `seq` (entries assumed distinct)"""
    inversions = sum(1 for a, b in itertools.combinations(seq, 2) if a > b)
    return -1 if inversions % 2 else 1


def sort_with_sign(indices):
    """(sign, increasing tuple) for a wedge of basis vectors; sign 0 on a repeated index"""
    indices = tuple(indices)
    if len(set(indices)) < len(indices):
        return 0, None
    return permutation_sign(indices), tuple(sorted(indices))


@lru_cache(maxsize=None)
def wedge_basis(m, k):
    """Canonical basis of the k-th exterior power: increasing tuples in lexicographic order"""
    if k < 0:
        return ()
    return tuple(itertools.combinations(range(m), k))


@lru_cache(maxsize=None)
def wedge_position(m, k):
    return {idx: pos for pos, idx in enumerate(wedge_basis(m, k))}


@lru_cache(maxsize=None)
def tensor_basis(m, n):
    """Basis of V (x) wedge^{n-2} V as (i, J) pairs, V slot outermost"""
    return tuple((i, J) for i in range(m) for J in wedge_basis(m, n - 2))


@lru_cache(maxsize=None)
def tensor_position(m, n):
    return {key: pos for pos, key in enumerate(tensor_basis(m, n))}


def wedge_label(idx):
    return "^".join(f"e{i + 1}" for i in idx) if idx else "1"


class _SparseTensor:
    """Sparse exact coefficients on canonical keys. Instances are immutable values."""

    __slots__ = ("dim", "grade", "_coeffs")

    def __init__(self, dim, grade, coeffs=None):
        self.dim = dim
        self.grade = grade
        clean = {}
        for key, c in (coeffs or {}).items():
            self._validate(key)
            c = rational(c)
            if c:
                clean[key] = c
        self._coeffs = clean

    def _validate(self, key):
        raise NotImplementedError

    @classmethod
    def _normalize(cls, key):
        raise NotImplementedError

    @classmethod
    def from_terms(cls, dim, grade, terms):
        acc = {}
        for key, c in terms:
            sign, key = cls._normalize(key)
            if sign:
                acc[key] = acc.get(key, ZERO) + sign * rational(c)
        return cls(dim, grade, acc)

    @classmethod
    def zero(cls, dim, grade):
        return cls(dim, grade)

    @property
    def coeffs(self):
        return MappingProxyType(self._coeffs)

    def terms(self):
        return sorted(self._coeffs.items())

    def is_zero(self):
        return not self._coeffs

    def _same_space(self, other, what):
        if type(other) is not type(self):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatch(what, self.dim, other.dim)
        if other.grade != self.grade:
            raise DimensionMismatch(f"{what} (grade)", self.grade, other.grade)
        return True

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.dim, self.grade, self._coeffs) == (other.dim, other.grade, other._coeffs)

    __hash__ = None

    def __add__(self, other):
        if self._same_space(other, "add") is NotImplemented:
            return NotImplemented
        acc = dict(self._coeffs)
        for key, c in other._coeffs.items():
            acc[key] = acc.get(key, ZERO) + c
        return type(self)(self.dim, self.grade, acc)

    def __neg__(self):
        return type(self)(self.dim, self.grade, {k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = rational(scalar)
        return type(self)(self.dim, self.grade, {k: scalar * c for k, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self._coeffs)

    def to_json(self):
        return {self.label(k): str(c) for k, c in self.terms()}

    def __repr__(self):
        if not self._coeffs:
            return f"{type(self).__name__}(0)"
        body = " + ".join(f"{c}*{self.label(k)}" for k, c in self.terms())
        return f"{type(self).__name__}({body})"


class WedgeVector(_SparseTensor):
    """Element of wedge^k V on the canonical increasing-index basis"""

    __slots__ = ()

    def _validate(self, key):
        if len(key) != self.grade or any(a >= b for a, b in zip(key, key[1:])) \
                or any(not 0 <= i < self.dim for i in key):
            raise ValueError(f"{key} is not a strictly increasing index tuple of length "
                             f"{self.grade} in 0..{self.dim - 1}")

    @classmethod
    def _normalize(cls, key):
        return sort_with_sign(key)

    @staticmethod
    def label(key):
        return wedge_label(key)

    @classmethod
    def basis(cls, dim, idx):
        return cls.from_terms(dim, len(idx), [(tuple(idx), ONE)])

    @classmethod
    def from_vectors(cls, vectors):
        """v_1 ^ ... ^ v_k for arbitrary vectors, expanded multilinearly"""
        dim = len(vectors[0])
        supports = [[(i, c) for i, c in enumerate(v) if c] for v in vectors]
        terms = []
        for choice in itertools.product(*supports):
            coeff = ONE
            for _, c in choice:
                coeff *= c
            terms.append((tuple(i for i, _ in choice), coeff))
        return cls.from_terms(dim, len(vectors), terms)

    @classmethod
    def from_array(cls, dim, grade, arr):
        return cls(dim, grade, {idx: arr[pos] for pos, idx in enumerate(wedge_basis(dim, grade))})

    def to_array(self):
        out = zeros(len(wedge_basis(self.dim, self.grade)))
        pos = wedge_position(self.dim, self.grade)
        for key, c in self._coeffs.items():
            out[pos[key]] = c
        return out


class TensorPairValue(_SparseTensor):
    """Element of V (x) wedge^{n-2} V, keys (i, J); `grade` is the wedge grade n-2"""

    __slots__ = ()

    def _validate(self, key):
        i, J = key
        if not 0 <= i < self.dim or len(J) != self.grade \
                or any(a >= b for a, b in zip(J, J[1:])) or any(not 0 <= j < self.dim for j in J):
            raise ValueError(f"{key} is not a valid (vector, increasing wedge) key")

    @classmethod
    def _normalize(cls, key):
        i, J = key
        sign, J = sort_with_sign(J)
        return sign, (i, J)

    @staticmethod
    def label(key):
        i, J = key
        return f"e{i + 1}⊗{wedge_label(J)}"

    @classmethod
    def from_array(cls, dim, grade, arr):
        keys = tensor_basis(dim, grade + 2)
        return cls(dim, grade, {key: arr[pos] for pos, key in enumerate(keys)})

    def to_array(self):
        out = zeros(len(tensor_basis(self.dim, self.grade + 2)))
        pos = tensor_position(self.dim, self.grade + 2)
        for key, c in self._coeffs.items():
            out[pos[key]] = c
        return out


class Endo:
    """Linear endomorphism of V as a dense exact matrix; column j is the image of e_j"""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = rational_array(entries)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"an endomorphism needs a square matrix, got shape {arr.shape}")
        arr.flags.writeable = False
        self.entries = arr

    @property
    def dim(self):
        return self.entries.shape[0]

    @classmethod
    def zero(cls, m):
        return cls(zeros((m, m)))

    @classmethod
    def identity(cls, m):
        return cls.diag([1] * m)

    @classmethod
    def diag(cls, values):
        m = len(values)
        arr = zeros((m, m))
        for i, v in enumerate(values):
            arr[i, i] = rational(v)
        return cls(arr)

    @classmethod
    def elementary(cls, m, a, b):
        """E_ab: sends e_b to e_a and every other basis vector to 0"""
        arr = zeros((m, m))
        arr[a, b] = ONE
        return cls(arr)

    @classmethod
    def from_columns(cls, columns):
        return cls(np.array([list(c) for c in columns], dtype=object).T)

    @classmethod
    def random(cls, rng, m, coeff_range=3):
        return cls(rng.integers(-coeff_range, coeff_range + 1, size=(m, m)))

    def column(self, j):
        return self.entries[:, j]

    def apply(self, v):
        if len(v) != self.dim:
            raise DimensionMismatch("Endo.apply", self.dim, len(v))
        return self.entries.dot(v)

    def transpose(self):
        return Endo(self.entries.T)

    def is_zero(self):
        return not np.any(self.entries != 0)

    def _check(self, other, what):
        if not isinstance(other, Endo):
            return False
        if other.dim != self.dim:
            raise DimensionMismatch(what, self.dim, other.dim)
        return True

    def __matmul__(self, other):
        if not self._check(other, "compose"):
            return NotImplemented
        return Endo(self.entries.dot(other.entries))

    def __add__(self, other):
        if not self._check(other, "add"):
            return NotImplemented
        return Endo(self.entries + other.entries)

    def __sub__(self, other):
        if not self._check(other, "subtract"):
            return NotImplemented
        return Endo(self.entries - other.entries)

    def __neg__(self):
        return Endo(-self.entries)

    def __mul__(self, scalar):
        return Endo(self.entries * rational(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Endo):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(np.all(self.entries == other.entries))

    __hash__ = None

    def to_array(self):
        """Row-major coordinates on the basis E_ab"""
        return self.entries.reshape(-1).copy()

    def to_json(self):
        return [[str(c) for c in row] for row in self.entries]

    def __repr__(self):
        return f"Endo({self.to_json()})"


def wedge(u, v):
    """Exterior product, result in canonical form"""
    if u.dim != v.dim:
        raise DimensionMismatch("wedge", u.dim, v.dim)
    terms = [(I + J, a * b) for I, a in u.terms() for J, b in v.terms()]
    return WedgeVector.from_terms(u.dim, u.grade + v.grade, terms)


def endo_derivation(A, u):
    """L_A u = sum_i v_1 ^ ... ^ A v_i ^ ... ^ v_k, renormalized to the canonical basis"""
    if A.dim != u.dim:
        raise DimensionMismatch("endo_derivation", A.dim, u.dim)
    terms = []
    for idx, c in u.terms():
        for r, i in enumerate(idx):
            for k, a in enumerate(A.column(i)):
                if a:
                    terms.append((idx[:r] + (k,) + idx[r + 1:], c * a))
    return WedgeVector.from_terms(u.dim, u.grade, terms)


def endo_derivation_tensor(A, w):
    """Derivation action of A on V (x) wedge^{n-2} V: the V slot and every wedge slot"""
    if A.dim != w.dim:
        raise DimensionMismatch("endo_derivation_tensor", A.dim, w.dim)
    terms = []
    for (i, J), c in w.terms():
        for k, a in enumerate(A.column(i)):
            if a:
                terms.append(((k, J), c * a))
        for r, j in enumerate(J):
            for k, a in enumerate(A.column(j)):
                if a:
                    terms.append(((i, J[:r] + (k,) + J[r + 1:]), c * a))
    return TensorPairValue.from_terms(w.dim, w.grade, terms)


def commutator(A, B):
    if A.dim != B.dim:
        raise DimensionMismatch("commutator", A.dim, B.dim)
    return A @ B - B @ A


def random_wedge(rng, m, k, coeff_range=3):
    basis = wedge_basis(m, k)
    coeffs = rng.integers(-coeff_range, coeff_range + 1, size=len(basis))
    return WedgeVector(m, k, {idx: int(c) for idx, c in zip(basis, coeffs)})


## Machine-integer fast path.
## A polynomial expression in exact tables is evaluated on int64 arrays after
## clearing denominators, whenever the magnitudes make that exact, and the
## result is turned back into Fractions. Otherwise it runs on the Fraction arrays.
INT64_SAFE = 2 ** 62


def _from_integers(out, den):
    result = zeros(out.shape)
    idx = np.nonzero(out)
    if len(idx[0]):
        result[idx] = [Fraction(int(x), den) for x in out[idx]]
    return result


def exact_eval(fn, arrays, degree, terms):
    """
    fn must be homogeneous of `degree` in the entries of `arrays` and sum at most
    `terms` products per output entry. Returns an object array of Fractions.
    """
    den = 1
    for a in arrays:
        for c in a.flat:
            den = math.lcm(den, c.denominator)
    scaled = [np.array([int(c * den) for c in a.flat], dtype=object).reshape(a.shape) for a in arrays]
    biggest = max((abs(int(x)) for s in scaled for x in s.flat), default=0)
    if biggest ** degree * max(terms, 1) >= INT64_SAFE:
        return fn(*arrays)
    out = fn(*[s.astype(np.int64) for s in scaled])
    return _from_integers(np.asarray(out), den ** degree)
