import random
from fractions import Fraction

import pytest

from randseries import rand_coeff, rand_series
from stackcount.exact import Q, QRatFun, inv_q_factorial
from stackcount.series import (
    MSeries,
    moebius,
    pleth_exp,
    pleth_log,
    pleth_pow,
    pow_product_form,
    series_arith,
    series_from_json,
    series_psi,
    series_to_json,
)
from stackcount.stacks import gauss_phi
from stackcount.volume import Volume, from_polynomial

U = MSeries.univariate


def geometric(bound, c=1):
    return U([c**k for k in range(bound + 1)])


def test_arith_examples():
    assert series_arith(U([1, 1], 2), U([1, -1], 2), "mul") == U([1, 0, -1])
    assert series_arith(U([1] * 5), U([1, -1], 4), "mul") == U([1], 4)
    assert series_arith(U([1, Q]), U([1, Q]), "mul") == U([1, 2 * Q, Q**2])
    with pytest.raises(ValueError):
        series_arith(MSeries(1, 2), MSeries(2, 2), "add")
    with pytest.raises(ValueError):
        series_arith(U([1]), U([1]), "div")


def test_min_bound():
    assert (U([1, 1, 1, 1]) + U([0, 1], 1)).bound == 1


def test_psi_examples():
    assert series_psi(U([0, Q], 2), 2) == U([0, 0, Q**2])
    f = U([1, Q, 3])
    assert series_psi(f, 1) == f
    t1t2 = MSeries.monomial(2, 6, (1, 1))
    assert series_psi(t1t2, 3) == MSeries.monomial(2, 6, (3, 3))


def test_exp_examples():
    assert pleth_exp(MSeries.zero(1, 4)) == MSeries.one(1, 4)
    assert pleth_exp(U([0, Q], 3)) == U([1, Q, Q**2, Q**3])
    e = pleth_exp(U([0, 1 / (Q - 1)], 2))
    assert e[2] == Q**-2 / inv_q_factorial(2)
    with pytest.raises(ValueError):
        pleth_exp(U([1, 1]))


def test_log_examples():
    assert pleth_log(geometric(6)) == U([0, 1], 6)
    with pytest.raises(ValueError):
        pleth_log(U([2, 1]))


def test_pow_examples():
    a = U([1, Q, 2], 4)
    assert pleth_pow(a, 1) == a
    assert pleth_pow(pleth_exp(U([0, 1], 4)), Q - 1) == pleth_exp(U([0, Q - 1], 4))
    assert pleth_pow(geometric(5), Q) == U([Q**k for k in range(6)])


def test_product_form_examples():
    assert pow_product_form(geometric(4), {1: 1}) == geometric(4)
    parts = {r: QRatFun(gauss_phi(r)) for r in range(1, 5)}
    assert pow_product_form(geometric(4), parts) == U([Q**k for k in range(5)])


def test_moebius():
    assert [moebius(n) for n in (1, 2, 3, 4, 5, 6, 12, 30)] == [1, -1, -1, 0, -1, 1, 0, -1]
    with pytest.raises(ValueError):
        moebius(0)


@pytest.mark.parametrize("seed", range(8))
def test_random_identities(seed):
    rng = random.Random(seed)
    nv = rng.choice([1, 2])
    bound = 4 if nv == 2 else 6
    a = rand_series(rng, nv, bound, rational=True)
    b = rand_series(rng, nv, bound, rational=True)
    assert pleth_log(pleth_exp(a)) == a
    assert pleth_exp(pleth_log(a + MSeries.one(nv, bound))) == a + MSeries.one(nv, bound)
    assert pleth_exp(a + b) == pleth_exp(a) * pleth_exp(b)
    n = rng.choice([2, 3])
    assert series_psi(pleth_exp(a), n) == pleth_exp(series_psi(a, n))
    one = a + MSeries.one(nv, bound)
    c1, c2 = rand_coeff(rng, 1), rand_coeff(rng, 1)
    assert pleth_pow(pleth_pow(one, c1), c2) == pleth_pow(one, c1 * c2)


def test_product_form_with_moebius_parts():
    # b = q - 1: psi_n(b) = q^n - 1 = sum_{r|n} r b_r
    rng = random.Random(11)
    bound = 5
    b = Q - 1
    parts = {}
    for r in range(1, bound + 1):
        acc = QRatFun.const(0)
        for d in range(1, r + 1):
            if r % d == 0:
                acc = acc + (Q ** d - 1) * moebius(r // d)
        parts[r] = acc / r
    for _ in range(4):
        a = rand_series(rng, 1, bound) + MSeries.one(1, bound)
        assert pow_product_form(a, parts) == pleth_pow(a, b)


def test_volume_coefficients_validity():
    L = 12
    a = MSeries(1, 4, {(1,): from_polynomial(Q, 2, L), (2,): from_polynomial(Q**2 + 1, 2, L)})
    e = pleth_exp(a)
    exact = pleth_exp(MSeries(1, 4, {(1,): Q, (2,): Q**2 + 1}))
    for (d,), c in e.items():
        if d == 0:
            continue
        assert c.len >= L // d
        assert c == from_polynomial(exact[d], 2, c.len)


def test_json_roundtrip():
    s = MSeries(2, 3, {(1, 0): Q / (Q - 1), (0, 2): Fraction(1, 3)})
    assert series_from_json(series_to_json(s)) == s
    v = MSeries(1, 2, {(1,): Volume(3, [1, 2])})
    assert series_from_json(series_to_json(v)) == v
