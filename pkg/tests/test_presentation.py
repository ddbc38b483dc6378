import pytest
from hypothesis import given, settings, strategies as st

from ncline import Field, PresentationError, parse_presentation, render_presentation
from ncline.cli import bundled_names
from ncline.presentation import render_poly

from conftest import fixture_text


def test_parse_basic():
    pres = parse_presentation("field Q\ngens x y\nrel x*y - y*x")
    assert pres.n == 2
    assert pres.names == ("x", "y")
    assert pres.relations[0].terms == {(0, 1): 1, (1, 0): -1}


def test_weights_powers_and_fractions():
    pres = parse_presentation("field Q; gens x:1 y:2; rel x*y - y*x - x^3")
    assert pres.weights == (1, 2)
    assert pres.relation_degrees() == [3]
    q = parse_presentation("field Q; gens x y; rel x*y - 1/2*y*x")
    assert render_poly(q.relations[0], q.names) in ("x*y - 1/2*y*x", "-1/2*y*x + x*y")


def test_field_override():
    pres = parse_presentation(fixture_text("cyclic3"), Field(5))
    assert pres.field.p == 5


@pytest.mark.parametrize(
    "text, line",
    [
        ("field Q\ngens x y\nrel x*y + y", 3),  # inhomogeneous
        ("field Q\ngens x\nrel x", 3),  # degree one
        ("field Q\ngens x y\nrel x*z", 3),  # unknown generator
        ("gens x\nrel x*x", None),  # no field
        ("field Q\nbogus x", 2),
        ("field R\ngens x", 1),
    ],
)
def test_parse_errors_carry_position(text, line):
    with pytest.raises(PresentationError) as e:
        parse_presentation(text)
    assert e.value.line == line


def test_unknown_statement_column():
    with pytest.raises(PresentationError) as e:
        parse_presentation("field Q\n  bogus x")
    assert e.value.col == 3


def test_bundled_fixtures_parse_and_round_trip():
    names = bundled_names()
    assert "cyclic3.alg" in names and "two_relator_b.alg" in names
    for name in names:
        pres = parse_presentation(fixture_text(name[:-4]))
        again = parse_presentation(render_presentation(pres))
        assert again == pres


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9), st.sampled_from([0, 5, 7]))
def test_round_trip_random_quadratic(coeffs, p):
    if not any(c % p if p else c for c in coeffs):
        return
    terms = " + ".join(f"({c})*x{i // 3 + 1}*x{i % 3 + 1}" for i, c in enumerate(coeffs))
    F = f"F{p}" if p else "Q"
    pres = parse_presentation(f"field {F}; gens x1 x2 x3; rel {terms}")
    assert parse_presentation(render_presentation(pres)) == pres
