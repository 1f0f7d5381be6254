"""Acceptance suite.

Every comparison is exact (rational equality, tolerance zero).  Each test
carries a ``criterion`` marker; the terminal summary prints one PASS/FAIL
line per criterion.
"""
import random
from fractions import Fraction
from math import comb

import pytest

from randseries import rand_coeff, rand_series
from stackcount.cli import main as cli_main
from stackcount.counting import algebra, count_commuting, naive_count_commuting
from stackcount.exact import Q, QPoly, QRatFun
from stackcount.ffield import field_of_order
from stackcount.quiver import Quiver
from stackcount.series import (
    MSeries,
    moebius,
    pleth_exp,
    pleth_log,
    pleth_pow,
    pow_product_form,
    series_psi,
)
from stackcount.stacks import (
    PAIRS,
    ai_series,
    alpha_invariants,
    alpha_value,
    closed_form_oracles,
    count_abs_indecomposable,
    gauss_phi,
    hua_h0,
    kac_polynomials,
    verify_main_theorem,
)

FIELDS = [2, 3, 4, 5, 7]


def P(*coeffs):
    """Polynomial from coefficients listed from the top degree down."""
    return QPoly(list(reversed(coeffs)))


# reference tables of alpha_n and A_n = A_(1^n)
ALPHA = {
    1: P(1),
    2: P(1, 0),
    3: P(1, 1, -1),
    4: P(2, 1, -2, 0),
    5: P(5, 0, -5, 0, 1),
    6: P(1, 12, -5, -15, 5, 4, -1),
    7: P(8, 28, -35, -35, 35, 7, -7, 0),
    8: P(4, 38, 48, -168, -28, 161, -28, -32, 4, 2),
    9: P(3, 39, 146, -75, -606, 364, 504, -381, -53, 57, 6, -3),
    10: P(5, 45, 240, 322, -1255, -1185, 2880, 310, -2124, 565, 280, -60, -25, 3),
}
A_REF = {
    1: P(1), 2: P(1), 3: P(1), 4: P(2), 5: P(5),
    6: P(1, 17),
    7: P(8, 69),
    8: P(4, 66, 334),
    9: P(3, 63, 530, 1855),
    10: P(5, 90, 840, 4492, 11673),
}


def criterion(n, title):
    return pytest.mark.criterion(n, title)


# --- 1 -------------------------------------------------------------------------

C1 = criterion(1, "alpha_1..alpha_5 fitted over F_2,F_3,F_4,F_5,F_7")


@C1
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_c1_alpha_small(n):
    poly, cert, _ = alpha_invariants(n, FIELDS)
    assert poly == ALPHA[n]
    assert cert.verified_ok


@C1
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_c1_alpha_cli(n, capsys):
    import json

    code = cli_main(["alpha", "--n", str(n), "--fields", ",".join(map(str, FIELDS))])
    rep = json.loads(capsys.readouterr().out)
    assert code == 0
    assert rep["result"]["polynomial"] == str(ALPHA[n])


@C1
def test_c1_alpha5():
    poly, cert, raw = alpha_invariants(5, FIELDS)
    assert poly == ALPHA[5]
    # five points fix a quartic; F_8 is the spare point
    assert alpha_value(5, 8) == ALPHA[5](8)


# --- 2 -------------------------------------------------------------------------

C2 = criterion(2, "alpha_6 raw Burnside counts at q=2,3")


@C2
@pytest.mark.parametrize("q", [2, 3])
def test_c2_alpha6(q):
    plain = alpha_value(6, q, torus=False)
    assert plain == ALPHA[6](q)
    assert alpha_value(6, q, torus=True) == plain


# --- 3 -------------------------------------------------------------------------

C3 = criterion(3, "A_n = 1,1,1,2 from the {0,1}^n pipeline")


@C3
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_c3_a_table(n):
    rep = ai_series(Quiver.linear(n), (1,) * n, FIELDS)
    assert rep.series[(1,) * n] == A_REF[n]
    # every interval sub-vector carries the smaller invariant
    for k in range(1, n):
        assert rep.series[(1,) * k + (0,) * (n - k)] == A_REF[k]


# --- 4 -------------------------------------------------------------------------

C4 = criterion(4, "nine-way A(t) agreement and Pow corollary on A_2, dmax (2,2)")


@C4
def test_c4_nine_way():
    rep = verify_main_theorem(Quiver.linear(2), (2, 2), FIELDS)
    assert rep.ok, rep.counterexample
    assert sum(1 for c in rep.checks if c.get("nine_way")) == len(FIELDS)
    assert sum(1 for c in rep.checks if c.get("pow_corollary")) == len(FIELDS)
    ai = rep.ai.series
    # single-vertex supports reduce to M_n, where A = t + t^2 + ...
    for d in [(1, 0), (0, 1), (2, 0), (0, 2)]:
        assert ai[d] == 1
    assert ai[(1, 1)] == 1
    assert all(p["verified"] for p in rep.ai.provenance.values())
    # fitted per pair as well
    for s1, s2 in PAIRS:
        assert ai_series(Quiver.linear(2), (2, 2), FIELDS, s1, s2).series == ai


# --- 5 -------------------------------------------------------------------------

C5 = criterion(5, "Feit-Fine product formula through t^3 over F_2, F_3")


@C5
def test_c5_feit_fine():
    res = closed_form_oracles("feit_fine", bound=3, fields=(2, 3))
    assert res.ok, res.details


@C5
@pytest.mark.parametrize("q", [2, 3])
def test_c5_naive_pairs(q):
    F = field_of_order(q)
    triv = Quiver.trivial()
    expected = {1: Q**2, 2: Q**6 + Q**5 - Q**3}
    for n in (1, 2, 3):
        fast = count_commuting(triv, (n,), "a", "a", F)
        if n in expected:
            assert fast == expected[n](q)
        if q ** (2 * n * n) <= 2**26:
            assert fast == naive_count_commuting(triv, (n,), "a", "a", F)


# --- 6 -------------------------------------------------------------------------

C6 = criterion(6, "Fine-Herstein nilpotent counts q^(n^2-n)")


@C6
def test_c6_fine_herstein():
    res = closed_form_oracles("fine_herstein", nmax=3, fields=(2, 3, 4, 5))
    assert res.ok, res.details
    assert len(res.details) == 12


# --- 7 -------------------------------------------------------------------------

C7 = criterion(7, "plethystic property suite, 100 randomized cases each")
CASES = 100


def _shape(rng):
    return (1, 6) if rng.random() < 0.5 else (2, 3)


@C7
def test_c7_exp_log_roundtrip():
    rng = random.Random(101)
    for _ in range(CASES):
        nv, bound = _shape(rng)
        a = rand_series(rng, nv, bound, rational=True)
        assert pleth_log(pleth_exp(a)) == a
        one_a = a + MSeries.one(nv, bound)
        assert pleth_exp(pleth_log(one_a)) == one_a


@C7
def test_c7_exp_additive():
    rng = random.Random(102)
    for _ in range(CASES):
        nv, bound = _shape(rng)
        a = rand_series(rng, nv, bound, rational=True)
        b = rand_series(rng, nv, bound, rational=True)
        assert pleth_exp(a + b) == pleth_exp(a) * pleth_exp(b)


@C7
def test_c7_adams_commutes():
    rng = random.Random(103)
    for _ in range(CASES):
        nv, bound = _shape(rng)
        a = rand_series(rng, nv, bound, rational=True)
        n = rng.choice([2, 3])
        assert series_psi(pleth_exp(a), n) == pleth_exp(series_psi(a, n))


@C7
def test_c7_pow_associative():
    rng = random.Random(104)
    for _ in range(CASES):
        nv, bound = _shape(rng)
        a = rand_series(rng, nv, bound) + MSeries.one(nv, bound)
        b, c = rand_coeff(rng, 1), rand_coeff(rng, 1)
        assert pleth_pow(pleth_pow(a, b), c) == pleth_pow(a, b * c)


def _parts(b: QRatFun, bound: int) -> dict:
    # Moebius inversion of psi_n(b) = sum_{r | n} r b_r
    out = {}
    for r in range(1, bound + 1):
        acc = QRatFun.const(0)
        for d in range(1, r + 1):
            if r % d == 0 and moebius(r // d):
                acc = acc + b.adams(d) * moebius(r // d)
        out[r] = acc / r
    return out


@C7
def test_c7_product_form():
    rng = random.Random(105)
    for _ in range(CASES):
        nv, bound = _shape(rng)
        a = rand_series(rng, nv, bound) + MSeries.one(nv, bound)
        b = rand_coeff(rng, 2)
        assert pow_product_form(a, _parts(b, bound)) == pleth_pow(a, b)


@C7
def test_c7_cyclotomic():
    geo = MSeries.univariate([1] * 5)
    parts = {r: QRatFun(gauss_phi(r)) for r in range(1, 5)}
    assert parts == _parts(Q, 4)
    assert pow_product_form(geo, parts) == MSeries.univariate([Q**k for k in range(5)])


# --- 8 -------------------------------------------------------------------------

C8 = criterion(8, "Hua series, A_2 and Kronecker Kac polynomials")


@C8
def test_c8_hua_vs_exp():
    assert hua_h0(Quiver.trivial(), 6) == pleth_exp(MSeries.univariate([0, 1 / (Q - 1)], 6))


@C8
def test_c8_kac_a2():
    assert kac_polynomials(Quiver.linear(2), 2) == MSeries(2, 2, {(1, 0): 1, (0, 1): 1, (1, 1): 1})


@C8
def test_c8_kac_kronecker():
    k = kac_polynomials(Quiver.kronecker(), 2)
    assert k[(1, 1)] == Q + 1
    for q in (2, 3):
        n = count_abs_indecomposable(Quiver.kronecker(), (1, 1), field_of_order(q))
        assert n == k[(1, 1)](q)


# --- 9 -------------------------------------------------------------------------

C9 = criterion(9, "count_commuting equals the naive oracle (>= 50 instances)")

_MATRIX = [
    (Quiver.linear(2), (1, 1)),
    (Quiver.linear(2), (2, 1)),
    (Quiver.linear(2), (1, 2)),
    (Quiver.trivial(), (1,)),
    (Quiver.trivial(), (2,)),
    (Quiver.trivial(), (3,)),
    (Quiver.kronecker(), (1, 1)),
    (Quiver.kronecker(), (2, 1)),
    (Quiver.linear(3), (1, 1, 1)),
    (Quiver.linear(3), (1, 0, 1)),
]


def _instances():
    out = []
    for quiver, d in _MATRIX:
        D = algebra(quiver, d).dim
        for q in FIELDS:
            if q ** (2 * D) > 2**26:
                continue
            out.append((quiver, d, q))
    return out


INSTANCES = _instances()


def test_c9_matrix_size():
    assert 9 * len(INSTANCES) >= 50


@C9
@pytest.mark.parametrize("quiver,d,q", INSTANCES,
                         ids=[f"{len(qv.arrows)}arr-{d}-F{q}" for qv, d, q in INSTANCES])
def test_c9_oracle(quiver, d, q):
    F = field_of_order(q)
    for s1, s2 in [(a, b) for a in "0*a" for b in "0*a"]:
        assert count_commuting(quiver, d, s1, s2, F) == naive_count_commuting(quiver, d, s1, s2, F)


# --- 10 ------------------------------------------------------------------------

C10 = criterion(10, "out-of-range tables: Exp/Log consistency and q=2 evaluations")


def _h_from_a(a: dict, nmax: int) -> dict:
    """H_n for d = (1^n) from A_k via the exponential formula over set partitions."""
    h = {0: QRatFun.const(1)}
    for n in range(1, nmax + 1):
        acc = QRatFun.const(0)
        for k in range(1, n + 1):
            acc = acc + h[n - k] * a[k] * comb(n - 1, k - 1) / (Q - 1)
        h[n] = acc
    return h


def _a_from_h(h: dict, nmax: int) -> dict:
    a = {}
    for n in range(1, nmax + 1):
        rest = sum((h[n - k] * a[k] * comb(n - 1, k - 1) for k in range(1, n)), Fraction(0))
        a[n] = h[n] - rest
    return a


@C10
def test_c10_tables_consistent():
    h = _h_from_a({k: QRatFun(A_REF[k]) for k in A_REF}, 10)
    for n in range(1, 11):
        assert h[n] * (Q - 1) ** n == ALPHA[n]


@C10
def test_c10_q2_evaluations():
    # at q = 2, q - 1 = 1 and H_n = alpha_n(2)
    computed = {n: alpha_value(n, 2) for n in range(1, 8)}
    for n, v in computed.items():
        assert v == ALPHA[n](2)
    assert computed[7] == 1430
    a = _a_from_h({0: Fraction(1), **computed}, 7)
    for n in range(1, 8):
        assert a[n] == A_REF[n](2)
    assert (a[6], a[7]) == (19, 85)


@C10
def test_c10_a5_pipeline_at_q2():
    # A_5 through the H-series pipeline over F_2 alone
    rep = ai_series(Quiver.linear(5), (1,) * 5, [2])
    assert rep.provenance[(1,) * 5]["samples"]["2"] == "5"
