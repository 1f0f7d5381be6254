from itertools import product

import numpy as np
import pytest

from stackcount.ffield import (
    FieldSpec,
    field_make,
    identity,
    mat_is_invertible,
    mat_is_nilpotent,
    mat_nullspace,
    mat_rank,
)


def test_field_make():
    assert field_make(2, 1).q == 2
    assert field_make(2, 2).modulus == (1, 1, 1)  # x^2 + x + 1
    with pytest.raises(ValueError):
        field_make(4, 1)
    with pytest.raises(ValueError):
        field_make(2, 21)


@pytest.mark.parametrize("p,k", [(2, 1), (3, 1), (2, 2), (3, 2), (2, 3), (5, 1), (7, 1)])
def test_inverse_and_frobenius(p, k):
    F = FieldSpec(p, k)
    for a in range(1, F.q):
        assert F.mul(a, F.inv(a)) == 1
    for a in range(F.q):
        for b in range(F.q):
            assert F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b))
            assert F.mul(a, b) == F._mul_slow(a, b)


def test_large_field_without_tables():
    F = FieldSpec(2, 11)
    a = 12345 % F.q
    assert F.mul(a, F.inv(a)) == 1


def test_rank_examples(F2):
    assert mat_rank(F2, identity(4)) == 4
    m = [[0, 1], [0, 0]]
    assert mat_rank(F2, m) == 1
    assert mat_nullspace(F2, m).shape[0] == 1


def test_commutator_nullspace_example(F2):
    # ad_x on strictly upper 3x3 with x = e12 + e23; coordinates (12, 13, 23)
    x = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    pos = [(0, 1), (0, 2), (1, 2)]
    cols = []
    for i, j in pos:
        z = np.zeros((3, 3), dtype=np.int64)
        z[i, j] = 1
        c = (x @ z - z @ x) % 2
        cols.append(c.ravel())
    ad = np.array(cols).T
    assert mat_nullspace(F2, ad).shape[0] == 2
    brute = 0
    for v in product(range(2), repeat=3):
        z = np.zeros((3, 3), dtype=np.int64)
        for (i, j), c in zip(pos, v):
            z[i, j] = c
        brute += not ((x @ z - z @ x) % 2).any()
    assert brute == 2**2


def test_nullspace_property(F4):
    rng = np.random.default_rng(0)
    for _ in range(20):
        m = rng.integers(0, 4, size=(3, 5))
        ns = mat_nullspace(F4, m)
        assert mat_rank(F4, m) + ns.shape[0] == 5
        add, mul, _, _ = F4.tables
        for v in ns:
            for row in m:
                acc = 0
                for a, b in zip(row, v):
                    acc = add[acc, mul[a, b]]
                assert acc == 0


def test_type_examples(F2):
    e12 = [[0, 1], [0, 0]]
    assert mat_is_nilpotent(F2, e12)
    assert not mat_is_nilpotent(F2, identity(2)) and mat_is_invertible(F2, identity(2))
    swap = [[0, 1], [1, 0]]
    assert not mat_is_nilpotent(F2, swap) and mat_is_invertible(F2, swap)
    with pytest.raises(ValueError):
        mat_is_nilpotent(F2, [[1, 0, 0]])


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_nilpotent_counts(q):
    from stackcount.ffield import field_of_order

    F = field_of_order(q)
    for n in (1, 2):
        nil = unit = 0
        for v in product(range(q), repeat=n * n):
            m = np.array(v).reshape(n, n)
            a, b = mat_is_nilpotent(F, m), mat_is_invertible(F, m)
            assert not (a and b)
            nil += a
            unit += b
        assert nil == q ** (n * n - n)
        assert unit == F.gl_order(n)
