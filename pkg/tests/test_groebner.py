import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from ncline import Field, NcPolynomial, QQ, build_presentation, parse_presentation
from ncline.groebner import (
    CertificationError,
    count_normal_words,
    normal_form,
    normal_words,
    right_gb,
    two_sided_gb,
    ufnarovski_growth,
)
from ncline.order import MonomialOrder

import oracle

CYCLIC_DIMS = [1, 3, 8, 21, 55, 144, 377, 987, 2584, 6765, 17711]


@pytest.mark.parametrize("perm", list(itertools.permutations(range(3))))
def test_cyclic_relation_is_its_own_basis(load, perm):
    pres = load("cyclic3")
    gb = two_sided_gb(pres, MonomialOrder.deglex(pres.weights, perm), bound=10)
    assert gb.complete
    assert len(gb.elements) == 1
    assert count_normal_words(gb, 10) == CYCLIC_DIMS


def test_cyclic_normal_words_degree_two(load):
    gb = two_sided_gb(load("cyclic3"), bound=4)
    ws = normal_words(gb, 2)
    assert len(ws) == 8
    assert (0, 1) not in ws


def test_infinite_basis_detected(load):
    gb = two_sided_gb(load("two_relator_b"), bound=6)
    assert not gb.complete
    assert gb.certified_degree == 6
    by_deg = gb.elements_by_degree()
    assert all(by_deg.get(d, 0) >= 1 for d in range(3, 7))
    # hand completion: z y^k x for k = 1..4
    lws = set(gb.leading_words)
    for k in range(1, 5):
        assert (2,) + (1,) * k + (0,) in lws


def test_other_precedence_is_finite(load):
    pres = load("two_relator_b")
    order = MonomialOrder.deglex(pres.weights, (2, 0, 1))
    assert two_sided_gb(pres, order, bound=8).complete


def test_quantum_plane_and_weighted_counts(load):
    gb = two_sided_gb(load("quantum_plane"), bound=8)
    assert gb.complete
    assert count_normal_words(gb, 6) == [1, 2, 3, 4, 5, 6, 7]
    gbw = two_sided_gb(load("weighted"), bound=10)
    assert count_normal_words(gbw, 8) == [1, 1, 2, 2, 3, 3, 4, 4, 5]


def test_require_refuses_beyond_certified_degree(load):
    gb = two_sided_gb(load("two_relator_b"), bound=5)
    gb.require(5)
    with pytest.raises(CertificationError):
        gb.require(6)


def test_normal_form_reduces_ideal_elements(load):
    pres = load("cyclic3")
    gb = two_sided_gb(pres, bound=6)
    b = pres.relations[0]
    x1, x3 = pres.gen(0), pres.gen(2)
    assert normal_form(x3 * b * x1, gb).is_zero()
    assert not normal_form(x3 * x1, gb).is_zero()


def test_growth(load):
    assert ufnarovski_growth(two_sided_gb(load("cyclic3"), bound=6)).kind == "exponential"
    rep = ufnarovski_growth(two_sided_gb(load("commutative_plane"), bound=6))
    assert (rep.kind, rep.gk_dimension) == ("polynomial", 2)
    rep = ufnarovski_growth(two_sided_gb(parse_presentation("field Q; gens x; rel x^2"), bound=4))
    assert (rep.kind, rep.gk_dimension) == ("polynomial", 0)


def test_right_groebner_basis_of_chain_generators(load):
    pres = load("cyclic3")
    amb = two_sided_gb(pres, bound=10)
    gens = [pres.poly("x1*x3"), pres.poly("x1^2*x3")]
    rgb = right_gb(gens, amb, 10)
    assert len(rgb.elements) == 2
    expected = oracle.right_ideal_dims(3, [{(0, 1): 1, (1, 2): 1, (2, 0): 1}],
                                       [{(0, 2): 1}, {(0, 0, 2): 1}], 6)
    assert rgb.dimensions(6) == expected


def _random_presentation(rng, n, nrel, p):
    F = Field(p)
    rels = []
    for _ in range(nrel):
        while True:
            t = {w: rng.randint(-2, 2) for w in itertools.product(range(n), repeat=2)}
            t = {w: c for w, c in t.items() if F.norm(c)}
            if t:
                break
        rels.append(NcPolynomial(F, t))
    try:
        return build_presentation(F, [(f"x{i}", 1) for i in range(n)], rels)
    except ValueError:
        return None


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(2, 1), (2, 2), (3, 1), (3, 2)]), st.sampled_from([0, 5]))
def test_normal_word_counts_match_brute_force(seed, shape, p):
    n, nrel = shape
    pres = _random_presentation(random.Random(seed), n, nrel, p)
    if pres is None:
        return
    D = 5 if n == 2 else 4
    gb = two_sided_gb(pres, bound=D, certify=False)
    rels = [r.terms for r in pres.relations]
    assert count_normal_words(gb, D) == oracle.algebra_dims(n, rels, D, p=p)
