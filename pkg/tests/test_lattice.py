"""Root order, brackets, and conjugation against a dense matrix oracle."""

import itertools
import random
from fractions import Fraction

import pytest

from fcengine.lattice import (LatticeError, LowerTriangularImage, TorusElem,
                              UnipElem, UnrepresentableDomain, WeylPerm,
                              bracket, conj_root, conj_vec, conj_vec_upper,
                              elem_from_payload, elem_to_payload, root_less)

N = 5
ROOTS = [(i, j) for i in range(1, N + 1) for j in range(i + 1, N + 1)]


def test_root_less_antisymmetric_and_line_bound():
    # not transitive: (2,3) < (2,4) < (1,4) but (1,4)-(2,3) is no root
    for a in ROOTS:
        assert root_less(a, a) == "equal"
    for a, b in itertools.permutations(ROOTS, 2):
        rel = root_less(a, b)
        back = root_less(b, a)
        assert rel != "equal"
        assert back == {"less": "greater", "greater": "less",
                        "incomparable": "incomparable"}[rel]
        shares_line = a[0] == b[0] or a[1] == b[1]
        assert (rel != "incomparable") == shares_line
    assert root_less((2, 3), (2, 4)) == "less"
    assert root_less((2, 4), (1, 4)) == "less"
    assert root_less((2, 3), (1, 4)) == "incomparable"


def vec_bracket(u, v):
    out = {}
    for a, x in u.items():
        for b, y in v.items():
            hit = bracket(a, b)
            if hit is None:
                continue
            r, sign = hit
            out[r] = out.get(r, 0) + sign * x * y
    return {r: c for r, c in out.items() if c}


def test_bracket_antisymmetry_and_jacobi():
    for a, b in itertools.product(ROOTS, repeat=2):
        ab = vec_bracket({a: 1}, {b: 1})
        ba = vec_bracket({b: 1}, {a: 1})
        assert ab == {r: -c for r, c in ba.items()}
    for a, b, c in itertools.combinations(ROOTS, 3):
        total = {}
        for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
            term = vec_bracket({u: 1}, vec_bracket({v: 1}, {w: 1}))
            for r, x in term.items():
                total[r] = total.get(r, 0) + x
        assert not any(total.values())


def test_bracket_matches_matrix_commutator():
    assert bracket((1, 2), (2, 3)) == ((1, 3), 1)
    assert bracket((2, 3), (1, 2)) == ((1, 3), -1)
    assert bracket((1, 2), (3, 4)) is None
    assert bracket((1, 2), (2, 1)) is None  # the E_11 - E_22 part is dropped


# -- dense oracle for conjugation ---------------------------------------


def dense(elem, n):
    m = [[Fraction(0)] * n for _ in range(n)]
    if isinstance(elem, WeylPerm):
        for i in range(1, n + 1):
            m[elem.apply(i) - 1][i - 1] = Fraction(1)
    elif isinstance(elem, TorusElem):
        for i in range(n):
            m[i][i] = Fraction(elem.diag[i])
    else:
        for i in range(n):
            m[i][i] = Fraction(1)
        a, b = elem.root
        m[a - 1][b - 1] = Fraction(elem.coeff)
    return m


def inv(elem, n):
    if isinstance(elem, WeylPerm):
        p = [0] * n
        for i in range(1, n + 1):
            p[elem.apply(i) - 1] = i
        return dense(WeylPerm(tuple(p)), n)
    if isinstance(elem, TorusElem):
        return dense(TorusElem(tuple(Fraction(1, 1) / Fraction(d)
                                     for d in elem.diag)), n)
    return dense(UnipElem(elem.root, -Fraction(elem.coeff)), n)


def matmul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)]


def sparse_of(m):
    return {(i + 1, j + 1): v for i, row in enumerate(m)
            for j, v in enumerate(row) if v}


def random_elem(rng, n):
    kind = rng.choice(("weyl", "torus", "unip"))
    if kind == "weyl":
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        return WeylPerm(tuple(perm))
    if kind == "torus":
        return TorusElem(tuple(Fraction(rng.choice((1, 2, 3, -1, 5)),
                                        rng.choice((1, 2, 3)))
                               for _ in range(n)))
    i, j = rng.sample(range(1, n + 1), 2)
    return UnipElem((i, j), Fraction(rng.choice((1, -1, 2, -3))))


def test_conj_vec_matches_dense_matrix_conjugation():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.choice((3, 4, 5))
        g = random_elem(rng, n)
        vec = {}
        for _ in range(rng.randint(1, 4)):
            i, j = rng.sample(range(1, n + 1), 2)
            vec[(i, j)] = Fraction(rng.choice((1, -1, 2, 3)))
        got = conj_vec(g, vec)
        M = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), c in vec.items():
            M[i - 1][j - 1] = c
        want = sparse_of(matmul(matmul(dense(g, n), M), inv(g, n)))
        assert {k: Fraction(v) for k, v in got.items()} == want


def test_conj_vec_inverse_round_trip():
    rng = random.Random(5)
    for _ in range(100):
        n = 4
        g = random_elem(rng, n)
        vec = {(1, 3): Fraction(2), (2, 4): Fraction(-1)}
        if isinstance(g, WeylPerm):
            p = [0] * n
            for i in range(1, n + 1):
                p[g.apply(i) - 1] = i
            ginv = WeylPerm(tuple(p))
        elif isinstance(g, TorusElem):
            ginv = TorusElem(tuple(Fraction(1) / Fraction(d)
                                   for d in g.diag))
        else:
            ginv = UnipElem(g.root, -Fraction(g.coeff))
        assert conj_vec(ginv, conj_vec(g, vec)) == vec


def test_strict_upper_guards():
    with pytest.raises(LowerTriangularImage):
        conj_root(WeylPerm((2, 1, 3)), (1, 2))
    with pytest.raises(UnrepresentableDomain):
        conj_vec_upper(UnipElem((2, 1), 1), {(1, 2): 1})
    # images that stay upper pass through
    out = conj_root(WeylPerm((1, 3, 2)), (1, 2))
    assert out == [((1, 3), 1)]


def test_element_validation():
    with pytest.raises(LatticeError):
        WeylPerm((1, 1, 2))
    with pytest.raises(LatticeError):
        TorusElem((1, 0, 1))
    with pytest.raises(LatticeError):
        UnipElem((2, 2), 1)


def test_payload_round_trip():
    for g in (WeylPerm((2, 1, 3)), TorusElem((1, 2, 3)),
              UnipElem((3, 1), Fraction(-1, 2))):
        assert elem_from_payload(elem_to_payload(g), 3) == g
    with pytest.raises(LatticeError):
        elem_from_payload({"kind": "weyl", "perm": [1, 2]}, 3)
    with pytest.raises(LatticeError):
        elem_from_payload({"kind": "spin"}, 3)
