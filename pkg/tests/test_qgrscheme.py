import pytest

from ncline import parse_presentation
from ncline.groebner import two_sided_gb
from ncline.qgrscheme import (
    Algebra,
    TruncatedGradedModule,
    WindowError,
    chi_check,
    cohomology_dims,
    distinguish_schemes,
    finite_order,
    gamma_recovery,
    kronecker_endo,
    m_values,
    truncated_hom,
    truncation,
    truncation_is_free_resolution,
)


def test_m_values():
    assert m_values(0) == [0, 1, 2]
    assert m_values(-3) == [3, 4, 5]


def test_finite_order_prefers_finite_basis(load):
    pres = load("two_relator_b")
    order = finite_order(pres, 8)
    assert order.precedence != (0, 1, 2)
    assert two_sided_gb(pres, order, bound=8).complete


def test_hom_between_free_modules(load):
    alg = Algebra(load("cyclic3"), 8)
    A = TruncatedGradedModule.free(alg, [0])
    for j in range(4):
        assert truncated_hom(A, A, j) == alg.dim(j)
    k = TruncatedGradedModule.residue_field(alg)
    assert truncated_hom(k, A, 0) == 0
    assert truncated_hom(A, k, 0) == 1


def test_window_refusal(load):
    alg = Algebra(load("commutative_plane"), 6)
    M = TruncatedGradedModule(alg, [0], (), window=(0, 2))
    with pytest.raises(WindowError):
        M.slice(5)


@pytest.mark.parametrize("name", ["commutative_plane", "cyclic3"])
def test_truncation_presentation(load, name):
    alg = Algebra(load(name), 8)
    T = truncation(alg, 2)
    assert truncation_is_free_resolution(alg, T, 2, 6)


@pytest.mark.parametrize("name", ["commutative_plane", "quantum_plane", "weighted"])
def test_gamma_recovery(load, name):
    g = gamma_recovery(load(name), 5)
    assert g.holds
    assert g.dims == g.expected


def test_chi_of_residue_field(load):
    r = chi_check(load("cyclic3"))
    assert r.ext == {0: {0: 1}, 1: {1: 3}, 2: {2: 1}}
    w = chi_check(load("weighted"))
    assert w.ext == {0: {0: 1}, 1: {1: 1, 2: 1}, 2: {3: 1}}
    assert all(r.finite.values())


def test_cohomology_of_structure_sheaf(load):
    t = cohomology_dims(load("commutative_plane"), 4)
    assert [t.h1.value(j) for j in (-2, -3, -4)] == [1, 2, 3]
    assert [t.h0.value(j) for j in (0, 1, 2)] == [1, 2, 3]
    assert t.fitted_shift == -2
    c = cohomology_dims(load("cyclic3"), 4)
    assert [c.h1.value(j) for j in (-2, -3, -4)] == [1, 3, 8]


@pytest.mark.parametrize("name, n", [("commutative_plane", 2), ("cyclic3", 3)])
def test_kronecker(load, name, n):
    inv = kronecker_endo(load(name))
    assert inv.kronecker_dims == (1, n, 0, 1)


def test_distinguish(load):
    d = distinguish_schemes(load("p1_3"), load("p1_4"))
    assert d.verdict.startswith("non-isomorphic")
    assert d.first_difference == 1
    assert d.euler_a_vs_b.first_tail_degree == 3
    same = distinguish_schemes(load("commutative_plane"), load("quantum_plane"))
    assert same.verdict.startswith("indistinguishable")
    assert same.twist_preserves_hilbert
    cyc = distinguish_schemes(load("cyclic3"), load("sum_squares3"))
    assert cyc.twist is not None


def test_non_regular_input_rejected():
    with pytest.raises(ValueError):
        chi_check(parse_presentation("field Q; gens x y; rel x*y"))
    with pytest.raises(ValueError):
        kronecker_endo(parse_presentation("field Q; gens x y; rel x*y"))
