import pytest
from hypothesis import given, settings, strategies as st

from ncline import Field, parse_presentation
from ncline.hilbert import (
    PowerSeries,
    SeriesError,
    euler_poly_test,
    golod_shafarevich_bound,
    guess_rational,
    hilbert_series,
    reduce_mod_p,
    regular_candidate,
    sandwich_series,
    strongly_free_check,
)


def test_reciprocal():
    H = PowerSeries.of([1, -3, 1], 6).reciprocal()
    assert list(H) == [1, 3, 8, 21, 55, 144, 377]
    with pytest.raises(SeriesError):
        PowerSeries.of([2, 1], 3).reciprocal()


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8), st.sampled_from([1, -1]))
def test_reciprocal_is_inverse(tail, a0):
    s = PowerSeries.of([a0] + tail)
    one = s * s.reciprocal()
    assert list(one) == [1] + [0] * s.trunc


def test_truncated_arithmetic_uses_common_precision():
    a = PowerSeries.of([1, 1, 1, 1])
    b = PowerSeries.of([1, 2])
    assert list(a + b) == [2, 3]
    assert list(a * b) == [1, 3]


def test_guess_and_candidate(load):
    H, _ = hilbert_series(load("weighted"), 8)
    assert list(H) == [1, 1, 2, 2, 3, 3, 4, 4, 5]
    g = guess_rational(H)
    assert g.denominator == (1, -1, -1, 1)
    assert regular_candidate((1, 2), 3).expand(8) == H


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_sum_of_squares_strongly_free(n):
    gens = " ".join(f"x{i}" for i in range(1, n + 1))
    rel = " + ".join(f"x{i}^2" for i in range(1, n + 1))
    pres = parse_presentation(f"field Q; gens {gens}; rel {rel}")
    X = [pres.gen(i) for i in range(2, n)]
    r = strongly_free_check(pres, X, 10)
    assert r.status == "certified" and r.degree == 10
    # B = k<x1, x2 | x1^2 + x2^2>: dims d + 1
    assert list(r.H_B) == list(range(1, 12))


def test_commutative_plane_single_generator_is_not_strongly_free(load):
    pres = load("commutative_plane")
    r = strongly_free_check(pres, [pres.gen("y")], 10)
    # B = k[x]: 1/H_B = 1 - z, 1/H_A + z = 1 - z + z^2
    assert r.status == "refuted"
    assert r.degree == 2
    assert r.defect == 1


def test_strongly_free_rejects_bad_input(load):
    pres = load("cyclic3")
    with pytest.raises(ValueError):
        strongly_free_check(pres, [pres.poly("x1 + x1*x2")], 6)
    with pytest.raises(ValueError):
        strongly_free_check(pres, [pres.gen(0)], 2)


def test_euler_test():
    H = PowerSeries.of([1, -3, 1], 10).reciprocal()
    ok = euler_poly_test(H, 3)
    assert ok.passed and ok.polynomial == (1,)
    bad = euler_poly_test(H, 4)
    assert not bad.passed and bad.first_tail_degree == 3


def test_modular_squeeze(load):
    pres = load("sum_squares4")
    low = golod_shafarevich_bound(pres, 8)
    assert list(low) == list(PowerSeries.of([1, -4, 1], 8).reciprocal())
    assert reduce_mod_p(pres).field.p == 1_000_003
    assert sandwich_series(pres, 8) == low
    # the bound is not a valid bound here (negative coefficients)
    assert golod_shafarevich_bound(parse_presentation("field Q; gens x; rel x^2"), 4) is None
    assert reduce_mod_p(parse_presentation("field F5; gens x; rel x^2")) is None


def test_rational_with_denominators_reduces(load):
    pres = parse_presentation("field Q; gens x y z; rel 1/2*x*y - 2/3*y*z + z*x")
    mod = reduce_mod_p(pres)
    t = mod.relations[0].terms
    P = 1_000_003
    # scaled to 3xy - 4yz + 6zx, then made monic: ratios survive
    assert t[(0, 1)] * 2 % P == t[(2, 0)]
    assert t[(1, 2)] * 3 % P == -2 * t[(0, 1)] * 2 % P
    H, _ = hilbert_series(pres, 7)
    assert sandwich_series(pres, 7) == H
