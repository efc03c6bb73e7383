import json
import os

from nlie import NLieAlgebra

"""
The fixture corpus: small n-Lie algebras (and one non-example, fix_c_broken) used by the
test suite, by `cli.py all` and as instance files under fixtures/.
Indices are 0-based here; the json files use the 1-based instance format.
"""

FIXTURE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def abelian(n=3, m=4):
    return NLieAlgebra(n, m, {}, name=f"abelian_{n}_{m}")


def heisenberg():
    # [e1,e2] = e3
    return NLieAlgebra(2, 3, {(0, 1): {2: 1}}, name="heisenberg")


def sl2():
    # h = e1, e = e2, f = e3
    return NLieAlgebra(2, 3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, name="sl2")


def fix_b():
    # [e1,e2,e3] = e4
    return NLieAlgebra(3, 4, {(0, 1, 2): {3: 1}}, name="fix_b")


def euclidean(n):
    """The (n+1)-dimensional simple n-Lie algebra: [e_1..^e_i..e_{n+1}] = (-1)^(n+1-i) e_i (1-based i)"""
    m = n + 1
    constants = {}
    for i in range(m):
        args = tuple(j for j in range(m) if j != i)
        constants[args] = {i: (-1) ** (m - (i + 1))}
    return NLieAlgebra(n, m, constants, name=f"euclidean_{n}")


def fix_c():
    return NLieAlgebra(3, 4, euclidean(3).constants, name="fix_c")


def fix_c_flipped():
    """FIX-C with the sign of [e2,e3,e4] flipped: the Lorentzian member of the family, still a 3-Lie algebra"""
    g = fix_c()
    flipped = g.with_bracket((1, 2, 3), -g.constants[(1, 2, 3)])
    return NLieAlgebra(3, 4, flipped.constants, name="fix_c_flipped")


def fix_c_broken():
    """FIX-C with [e2,e3,e4] = -e1 + e2; the structure matrix is no longer symmetric and FI fails"""
    g = fix_c()
    broken = g.with_bracket((1, 2, 3), {0: -1, 1: 1})
    return NLieAlgebra(3, 4, broken.constants, name="fix_c_broken")


def corpus():
    """Every shipped n-Lie algebra, keyed by name, in a fixed order"""
    algebras = [abelian(2, 3), abelian(3, 4), heisenberg(), sl2(), fix_b(), fix_c(),
                euclidean(2), euclidean(4)]
    return {g.name: g for g in algebras}


def write_corpus(directory=FIXTURE_DIR):
    os.makedirs(directory, exist_ok=True)
    for name, g in {**corpus(), "fix_c_broken": fix_c_broken()}.items():
        with open(os.path.join(directory, f"{name}.json"), "w") as f:
            json.dump(g.to_json(), f, indent=2, sort_keys=True)
            f.write("\n")
