import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from selfcup.galois_frobenius import (
    CERTIFIED_FULL,
    RAMIFIED,
    UNKNOWN,
    PolyError,
    certify_symmetric,
    count_roots,
    ddf_cycle_type,
    discriminant,
    frobenius_scan,
    parse_poly,
    poly_to_string,
    primes_up_to,
    squarefree_part_degrees,
)

F = [6, 1, 0, 0, 0, 0, 1]  # x^6 + x + 6
ELL = 362793931
X = sympy.Symbol("x")

polys = st.lists(st.integers(-20, 20), min_size=3, max_size=8).filter(lambda f: f[-1] != 0)


def to_sympy(f):
    return sympy.Poly(list(reversed(f)), X)


def test_parse_and_print():
    assert parse_poly("6,1,0,0,0,0,1") == F
    assert poly_to_string(F) == "x^6 + x + 6"
    with pytest.raises(PolyError):
        parse_poly("1,a")


def test_discriminant_examples():
    assert discriminant([1, 0, 1]) == -4
    assert discriminant([0, 0, 1]) == 0
    assert discriminant(F) == -ELL
    assert sympy.isprime(ELL)
    with pytest.raises(PolyError):
        discriminant([])


@settings(max_examples=40, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 50))
def test_quadratic_closed_form(c, b, a):
    assert discriminant([c, b, a]) == b * b - 4 * a * c


@settings(max_examples=40, deadline=None)
@given(polys)
def test_discriminant_matches_sympy(f):
    assert discriminant(f) == sympy.discriminant(to_sympy(f))


def test_ddf_examples():
    assert ddf_cycle_type([1, 0, 1], 5) == (1, 1)
    assert ddf_cycle_type([1, 0, 1], 3) == (2,)
    assert ddf_cycle_type([1, 0, 1], 2) == RAMIFIED
    with pytest.raises(PolyError):
        ddf_cycle_type([1, 0, 1], 9)
    with pytest.raises(PolyError):
        ddf_cycle_type([1, 0, 3], 3)


def test_ddf_against_sympy_factorisation():
    rng = random.Random(7)
    for _ in range(60):
        f = [rng.randint(-9, 9) for _ in range(rng.randint(3, 8))]
        if f[-1] == 0:
            f[-1] = 1
        p = rng.choice(primes_up_to(60))
        if f[-1] % p == 0:
            continue
        t = ddf_cycle_type(f, p)
        _, facs = sympy.Poly(list(reversed(f)), X, domain=sympy.GF(p)).factor_list()
        degs = sorted(g.degree() for g, e in facs for _ in range(e))
        if any(e > 1 for _, e in facs):
            assert t == RAMIFIED
        else:
            assert list(t) == degs


@settings(max_examples=30, deadline=None)
@given(polys, st.sampled_from(primes_up_to(200)))
def test_ramified_iff_discriminant_vanishes(f, p):
    if f[-1] % p == 0:
        return
    t = ddf_cycle_type(f, p)
    assert (t == RAMIFIED) == (discriminant(f) % p == 0)
    if t != RAMIFIED:
        assert sum(t) == len(f) - 1
        assert t.count(1) == count_roots(f, p)


def test_root_count_up_to_ten_thousand():
    for p in primes_up_to(10_000)[::97]:
        t = ddf_cycle_type(F, p)
        if t != RAMIFIED:
            assert t.count(1) == count_roots(F, p)


def test_certify():
    assert certify_symmetric([], 6) == UNKNOWN
    assert certify_symmetric([(2, 2, 2)], 6) == UNKNOWN
    assert certify_symmetric([(6,), (1, 5), (1, 1, 1, 1, 2), (3, 3)], 6) == CERTIFIED_FULL
    assert certify_symmetric([(6,), (1, 5)], 6) == UNKNOWN


def test_scan_examples():
    empty = frobenius_scan(F, 1)
    assert empty["table"] == [] and empty["verdict"] == UNKNOWN
    small = frobenius_scan(F, 200)
    assert small["observed"]
    full = frobenius_scan(F, 2000, threads=2)
    assert full["verdict"] == CERTIFIED_FULL and full["discriminant"] == -ELL
    assert frobenius_scan(F, 2000) == full


def test_reducible_never_shows_full_cycle():
    f = [int(c) for c in reversed(sympy.Poly((X**2 + 1) * (X**4 + X + 3), X).all_coeffs())]
    rep = frobenius_scan(f, 1000)
    assert all(row["cycle_type"] != [6] for row in rep["table"])
    assert rep["verdict"] == UNKNOWN


def test_ramified_at_two_in_scan():
    rep = frobenius_scan([1, 0, 1], 50)
    assert rep["ramified"] == [2]


def test_zero_in_q2():
    # mod 2 the polynomial is x^6 + x = x(x^5 + 1): a simple root at 0 lifts by Hensel
    assert 1 in squarefree_part_degrees(F, 2)
    assert count_roots(F, 2) >= 1


def test_zero_in_q_ell():
    assert discriminant(F) % ELL == 0
    assert ddf_cycle_type(F, ELL) == RAMIFIED
    degs = squarefree_part_degrees(F, ELL)
    assert sorted(degs) == [1, 1, 1, 2]  # one double root plus simple linear factors
