from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import oracle_exponents, oracle_global_at

from hilbstrata.motivic import (
    EulerFactors,
    MotivicPoly,
    MotivicSeries,
    NonUnitConstantTerm,
    TruncationMismatch,
    euler_factorization,
    global_hilbert_series,
    hilbert_series_from_classes,
    power_structure_pow,
    series_inverse,
    series_mul,
    series_pow,
)

L = MotivicPoly.monomial(1)
ONE = MotivicPoly.one()

PUNCTUAL_A3 = [
    MotivicPoly((1,)),
    MotivicPoly((1, 1, 1)),
    MotivicPoly((1, 1, 2, 1, 1)),
    MotivicPoly((1, 1, 2, 3, 3, 2, 1)),
    MotivicPoly((1, 1, 2, 3, 5, 5, 4, 2, 1)),
]


# --- polynomials ---------------------------------------------------------------


def test_poly_eval():
    p = MotivicPoly((0, 0, -1, 2))
    assert p.eval(2) == 12 and p.eval(3) == 45


def test_poly_ring_ops():
    p = L + ONE
    assert p * p == MotivicPoly((1, 2, 1))
    assert p**3 == MotivicPoly((1, 3, 3, 1))
    assert (p - p).is_zero()
    assert -p + 3 == MotivicPoly((2, -1))
    assert MotivicPoly((1, 0, 0)) == ONE


def test_poly_printing():
    p = MotivicPoly((0, 0, -1, 2))
    assert str(p) == "2*L^3 - L^2"
    assert MotivicPoly((1, 1, 2, 2, 1)).pretty() == "L^4+2L^3+2L^2+L+1"
    assert str(MotivicPoly.zero()) == "0"


# --- series arithmetic ---------------------------------------------------------


def S(N, *cs):
    return MotivicSeries(N, tuple(MotivicPoly.coerce(c) for c in cs))


def test_series_mul_and_inverse():
    A = S(3, 1, L, 0, 0)
    inv = series_inverse(A, 3)
    assert inv == S(3, 1, -L, L * L, -(L**3))
    assert series_mul(A, inv, 3) == MotivicSeries.one(3)


def test_non_unit_constant():
    with pytest.raises(NonUnitConstantTerm):
        series_inverse(S(2, 2, 1), 2)
    with pytest.raises(NonUnitConstantTerm):
        euler_factorization(S(2, 0, 1))


def test_truncation_mismatch():
    with pytest.raises(TruncationMismatch):
        S(2, 1, 1) * S(3, 1, 1)
    with pytest.raises(TruncationMismatch):
        S(1, 1, 1, 1)


def test_json_round_trip():
    A = S(3, 1, L, L + 2, 0)
    assert MotivicSeries.from_json(A.to_json()) == A


# --- Euler factors and the power structure --------------------------------------


def test_euler_factors_of_punctual_series():
    F = euler_factorization(hilbert_series_from_classes(PUNCTUAL_A3[:2], 2))
    assert F.a(1) == ONE
    assert F.a(2) == L * L + L


def test_power_structure_small():
    F = EulerFactors(2, (ONE, MotivicPoly.zero()))
    assert power_structure_pow(F, L**3) == S(2, 1, L**3, L**6)


def test_geometric_convention():
    # (1 - T)^(-L^k) is (1 - L^k T)^(-1)
    F = EulerFactors(3, (ONE, 0, 0))
    assert power_structure_pow(F, L**2) == S(3, 1, L**2, L**4, L**6)
    # a negative exponent gives a finite product
    assert power_structure_pow(F, -(L**2)) == S(3, 1, -(L**2), 0, 0)


def test_global_series_matches_table():
    P = hilbert_series_from_classes(PUNCTUAL_A3, 5)
    G = global_hilbert_series(3, 5, P)
    want = [
        MotivicPoly.coerce(1),
        MotivicPoly.monomial(3),
        MotivicPoly((0, 0, 0, 0, 1, 1, 1)),
        MotivicPoly((0, 0, 0, 0, 0, 1, 1, 2, 1, 1)),
        MotivicPoly((0, 0, 0, 0, 0, -1, 1, 1, 4, 3, 3, 1, 1)),
        MotivicPoly((0, 0, 0, 0, 0, 0, -1, 0, 0, 4, 5, 7, 4, 3, 1, 1)),
    ]
    assert list(G.coeffs) == want


# --- random series --------------------------------------------------------------

small_poly = st.lists(st.integers(-3, 3), min_size=0, max_size=3).map(lambda c: MotivicPoly(tuple(c)))


def unit_series(N):
    return st.lists(small_poly, min_size=N, max_size=N).map(lambda cs: MotivicSeries(N, (ONE,) + tuple(cs)))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 6).flatmap(unit_series))
def test_euler_round_trip(A):
    assert euler_factorization(A).expand() == A


@settings(max_examples=40, deadline=None)
@given(unit_series(8), small_poly, small_poly)
def test_exponent_additivity(A, X, Y):
    assert series_pow(A, X + Y) == series_pow(A, X) * series_pow(A, Y)


@settings(max_examples=40, deadline=None)
@given(unit_series(8), small_poly, small_poly)
def test_exponent_multiplicativity(A, X, Y):
    assert series_pow(A, X * Y) == series_pow(series_pow(A, X), Y)


@settings(max_examples=40, deadline=None)
@given(unit_series(8), unit_series(8), small_poly)
def test_base_multiplicativity(A, B, X):
    assert series_pow(A * B, X) == series_pow(A, X) * series_pow(B, X)


@settings(max_examples=40, deadline=None)
@given(unit_series(8))
def test_trivial_exponents(A):
    assert series_pow(A, ONE) == A
    assert series_pow(A, MotivicPoly.zero()) == MotivicSeries.one(8)


def test_oracle_exponents_agree():
    P = hilbert_series_from_classes(PUNCTUAL_A3, 5)
    F = euler_factorization(P)
    a = oracle_exponents(P, 5)
    for i in range(1, 6):
        assert {k: Fraction(v) for k, v in enumerate(F.a(i).coeffs) if v} == a[i]


@pytest.mark.parametrize("q", [2, 3])
def test_specialization_commutes(q):
    P = hilbert_series_from_classes(PUNCTUAL_A3, 5)
    G = global_hilbert_series(3, 5, P)
    want = oracle_global_at(oracle_exponents(P, 5), 3, q, 5)
    assert [Fraction(v) for v in G.eval(q)] == want


def test_hilbert_scheme_of_affine_line():
    # punctual series 1/(1-T) for A^1; global is (1 - L T)^(-1)
    P = MotivicSeries(4, (ONE,) * 5)
    G = global_hilbert_series(1, 4, P)
    assert G == MotivicSeries(4, tuple(L**n for n in range(5)))
