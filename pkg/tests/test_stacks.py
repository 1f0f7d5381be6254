import warnings
from fractions import Fraction

import pytest

from stackcount.exact import Q, QPoly, QRatFun, adams_substitute, inv_q_factorial
from stackcount.ffield import field_of_order
from stackcount.quiver import Quiver
from stackcount.series import MSeries, pleth_exp, pleth_pow
from stackcount.stacks import (
    Partition,
    alpha_invariants,
    alpha_value,
    closed_form_oracles,
    count_abs_indecomposable,
    extract_ai,
    gauss_phi,
    h_series_numeric,
    h_series_symbolic,
    hua_h0,
    indecomposables_from_ai,
    kac_polynomials,
    predict_h,
    verify_main_theorem,
    zs_volume,
)
from stackcount.volume import Volume

A2 = Quiver.linear(2)
TRIV = Quiver.trivial()


def test_zs_volume():
    assert zs_volume("0") == 1
    assert zs_volume("*") == Q - 1
    assert zs_volume("a") == Q


def test_h_numeric_examples():
    h = h_series_numeric(A2, "0", "0", (1, 1), 2)
    assert h[(1, 1)][1] == 2
    assert h[(0, 0)] == 1 or h[(0, 0)].entries == (1,)
    h = h_series_numeric(TRIV, "a", "a", (1,), 2)
    assert h[(1,)][1] == 4


def test_h_numeric_matches_symbolic():
    hs = h_series_symbolic(A2, "0", "0", (1, 1), [2, 3, 4, 5])
    assert hs[(1, 1)] == Q / (Q - 1) ** 2
    hn = h_series_numeric(A2, "0", "0", (2, 2), 2, length=2)
    hs = h_series_symbolic(A2, "0", "0", (1, 1), [2, 3, 4, 5, 7])
    for d, c in hs.series.items():
        v = hn[d]
        for n in range(1, len(v) + 1):
            assert v[n] == c(2**n)


def test_h_symbolic_star_zero():
    hs = h_series_symbolic(A2, "*", "0", (1, 1), [2, 3, 4, 5])
    assert hs[(1, 1)] == 2


def test_extract_ai_examples():
    assert extract_ai(MSeries.univariate([1] * 6), "*", "0") == MSeries.univariate([0, 1], 5)
    a = MSeries(2, 2, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
    assert predict_h(a, "0", "0")[(1, 1)] == Q / (Q - 1) ** 2
    assert predict_h(MSeries.zero(1, 3), "a", "a") == MSeries.one(1, 3)
    ff = predict_h(MSeries.univariate([0, 1, 1, 1]), "a", "a")
    assert ff[(1,)] == Q**2 / (Q - 1)
    hs = h_series_symbolic(A2, "0", "0", (1, 1), [2, 3, 4, 5, 7])
    assert extract_ai(hs, "0", "0") == a


def test_indecomposables():
    a = MSeries.univariate([0, Q], 4)
    out = indecomposables_from_ai(a, nmax=6)
    assert out[(2, (1,))] == (Q**2 - Q) / 2
    assert out[(1, (1,))] == Q
    one = indecomposables_from_ai(MSeries.univariate([0, 1], 4), nmax=6)
    assert all(one[(n, (1,))] == 0 for n in range(2, 7))
    # forward identity psi_n A = sum_{r|n} r I_r
    c = Q**3 - 2 * Q + 5
    out = indecomposables_from_ai(MSeries.univariate([0, c], 1), nmax=6)
    for n in range(1, 7):
        tot = sum((out[(r, (1,))] * r for r in range(1, n + 1) if n % r == 0), QRatFun.const(0))
        assert tot == c.adams(n)


def test_partitions():
    assert Partition((2, 1)).pairing(Partition((1, 1))) == 4
    assert Partition((3, 1, 1)).conjugate() == Partition((3, 1, 1))
    assert Partition((2, 2, 1)).conjugate() == Partition((3, 2))
    assert [len(Partition.all_of(n)) for n in range(7)] == [1, 1, 2, 3, 5, 7, 11]
    with pytest.raises(ValueError):
        Partition((1, 2))


def test_hua_examples():
    h = hua_h0(TRIV, 6)
    assert h[(0,)] == 1
    assert h[(2,)] == Q**-2 / inv_q_factorial(2)
    assert h == pleth_exp(MSeries.univariate([0, 1 / (Q - 1)], 6))


def test_kac_examples():
    assert kac_polynomials(A2, 2) == MSeries(2, 2, {(1, 0): 1, (0, 1): 1, (1, 1): 1})
    assert kac_polynomials(TRIV, 4) == MSeries.univariate([0, 1], 4)
    k = kac_polynomials(Quiver.kronecker(), 4)
    assert k[(1, 1)] == Q + 1
    assert k[(2, 2)] == Q + 1
    assert k[(1, 2)] == 1


def test_kac_warns_for_jordan_quiver():
    # one loop: A_1 = q, A_n = q for all n; polynomial, no warning
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        k = kac_polynomials(Quiver(1, ((0, 0),)), 3)
    assert k[(1,)] == Q and k[(2,)] == Q


def test_abs_indecomposable_orbit_counts():
    K = Quiver.kronecker()
    for q in (2, 3):
        F = field_of_order(q)
        assert count_abs_indecomposable(K, (1, 1), F) == q + 1
        assert count_abs_indecomposable(A2, (1, 1), F) == 1


def test_alpha_small():
    assert alpha_value(1, 2) == 1
    poly, cert, _ = alpha_invariants(2, [2, 3, 4])
    assert poly == QPoly([0, 1])
    poly, cert, raw = alpha_invariants(3, [2, 3, 4, 5])
    assert poly == QPoly([-1, 1, 1]) and cert.verified_ok
    assert alpha_value(4, 3, torus=True) == alpha_value(4, 3, torus=False)


def test_gauss():
    assert gauss_phi(2) == QPoly([0, Fraction(-1, 2), Fraction(1, 2)])
    assert gauss_phi(2)(2) == 1


@pytest.mark.parametrize("name,params", [
    ("feit_fine", {"bound": 3, "fields": (2, 3)}),
    ("fine_herstein", {"nmax": 2, "fields": (2, 3)}),
    ("gauss", {"rmax": 4, "primes": (2, 3)}),
    ("qbinomial", {"bound": 4, "k": 0}),
    ("qbinomial", {"bound": 4, "k": 3}),
    ("vector_spaces", {"bound": 4}),
])
def test_oracles(name, params):
    assert closed_form_oracles(name, **params).ok


def test_unknown_oracle():
    with pytest.raises(ValueError):
        closed_form_oracles("nope")


def test_verify_trivial_quiver():
    rep = verify_main_theorem(TRIV, (3,), [2, 3, 4, 5])
    assert rep.ok
    assert rep.ai.series == MSeries.univariate([0, 1, 1, 1])


def test_verify_vacuous():
    assert verify_main_theorem(A2, (0, 0), [2, 3]).ok


def test_pow_corollary_numeric():
    h00 = h_series_numeric(A2, "0", "0", (1, 2), 2, length=2)
    hs0 = h_series_numeric(A2, "*", "0", (1, 2), 2, length=2)
    b = Volume(2, [1, 3])  # q - 1 over F_2, F_4
    lhs = pleth_pow(h00.series, b)
    for d, c in hs0.series.items():
        if not any(d):
            continue
        n = min(len(c), len(lhs[d]))
        assert n >= 1
        assert all(lhs[d][k] == c[k] for k in range(1, n + 1))
