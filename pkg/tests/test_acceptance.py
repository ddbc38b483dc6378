"""Acceptance suite: eleven end-to-end criteria, each with a runtime limit.

Each test prints one ``PASS``/``FAIL`` line (outside pytest's capture) and
then asserts, so the summary is visible with or without ``-s``.
"""

import itertools
import random
import time

import pytest

from ncline import Field, NcPolynomial, QQ, build_presentation, parse_presentation
from ncline.coherence import (
    chain_witness,
    cyclic_presentation,
    ideal_free_basis_check,
    rnci_extract,
    sf_tor_identity,
)
from ncline.groebner import count_normal_words, two_sided_gb
from ncline.hilbert import PowerSeries, hilbert_series, strongly_free_check
from ncline.order import MonomialOrder
from ncline.qgrscheme import chi_check, distinguish_schemes, gamma_recovery, kronecker_endo
from ncline.quadratic import QuadraticTensor, koszul_dual, same_relation_space, tensor_rank, zhang_regular_check

import oracle


@pytest.fixture
def report(capsys):
    """Call report(n, ok, seconds, limit, detail) once per criterion."""

    def _report(n, ok, seconds, limit, detail=""):
        within = seconds < limit
        status = "PASS" if ok and within else "FAIL"
        line = f"{status} criterion {n:2d}: {seconds:6.2f}s (limit {limit}s) {detail}"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
        assert within, line

    return _report


def sum_squares(n, field=QQ):
    gens = " ".join(f"x{i}" for i in range(1, n + 1))
    rel = " + ".join(f"x{i}^2" for i in range(1, n + 1))
    return parse_presentation(f"field {field.name}; gens {gens}; rel {rel}")


def test_criterion_01_groebner_finiteness(report, load):
    expected = [1, 3, 8, 21, 55, 144, 377, 987, 2584, 6765, 17711]
    t0 = time.perf_counter()
    pres = load("cyclic3")
    ok = True
    for perm in itertools.permutations(range(3)):
        gb = two_sided_gb(pres, MonomialOrder.deglex(pres.weights, perm), bound=10)
        ok &= gb.complete and len(gb.elements) == 1
        ok &= count_normal_words(gb, 10) == expected
    report(1, ok, time.perf_counter() - t0, 1, "single-element basis under all 6 precedences")


def test_criterion_02_infinite_basis_detection(report, load):
    t0 = time.perf_counter()
    gb = two_sided_gb(load("two_relator_b"), bound=6)
    by_deg = gb.elements_by_degree()
    ok = not gb.complete and all(by_deg.get(d, 0) >= 1 for d in range(3, 7))
    report(2, ok, time.perf_counter() - t0, 1, f"new elements by degree {by_deg}, complete={gb.complete}")


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_criterion_03_strongly_free(report, n):
    t0 = time.perf_counter()
    pres = sum_squares(n)
    X = [pres.gen(i) for i in range(2, n)]
    r = strongly_free_check(pres, X, 10)
    v = ideal_free_basis_check(pres, X, 10)
    ok = r.status == "certified" and r.degree == 10 and v.holds and v.degree == 10
    report(3, ok, time.perf_counter() - t0, 5, f"n={n}: {r.status}({r.degree}), identity through {v.degree}")


def random_one_relator(rng, F, n):
    while True:
        t = {(i, j): F(rng.randint(-3, 3)) for i in range(n) for j in range(n)}
        t = {w: c for w, c in t.items() if c}
        if t:
            return build_presentation(F, [(f"x{i + 1}", 1) for i in range(n)], [NcPolynomial(F, t)])


def test_criterion_04_coherence_pipeline(report):
    t0 = time.perf_counter()
    kinds = {}
    failures = []
    for F in (QQ, Field(5), Field(101)):
        for n in (3, 4, 5):
            rng = random.Random(1000 * F.p + n)
            for k in range(50):
                pres = random_one_relator(rng, F, n)
                cert = rnci_extract(pres, 5)
                kinds[cert.kind] = kinds.get(cert.kind, 0) + 1
                if cert.status != "certified" or cert.kind not in ("rnci", "noetherian", "monomial"):
                    failures.append((F.name, n, k, cert.kind, cert.status))
                elif cert.kind == "rnci" and not sf_tor_identity(cert, 4):
                    failures.append((F.name, n, k, "tor identity"))
    ok = not failures and sum(kinds.values()) == 450
    report(4, ok, time.perf_counter() - t0, 60, f"kinds {kinds}, failures {failures[:3]}")


def test_criterion_05_chain_witness(report):
    t0 = time.perf_counter()
    rep = chain_witness(3, 4, 12)
    ok = all(rep.quotient_dims[t][d] >= 1 for t in range(1, 5) for d in range(t + 2, 13))
    report(5, ok and rep.strictly_ascending, time.perf_counter() - t0, 5,
           f"t=4 dims {rep.quotient_dims[4][6:]}")


def test_criterion_06_gamma_recovery(report, load):
    t0 = time.perf_counter()
    ok = True
    for name in ("commutative_plane", "quantum_plane", "cyclic3", "weighted"):
        g = gamma_recovery(load(name), 6)
        ok &= g.holds
    report(6, ok, time.perf_counter() - t0, 30, "four algebras, degrees 0..6")


def test_criterion_07_kronecker(report):
    t0 = time.perf_counter()
    dims = {n: kronecker_endo(cyclic_presentation(n, QQ)).kronecker_dims for n in (2, 3, 4)}
    ok = all(d == (1, n, 0, 1) for n, d in dims.items())
    report(7, ok, time.perf_counter() - t0, 30, str(dims))


def test_criterion_08_koszul_dual(report):
    t0 = time.perf_counter()
    ok = True
    for n in (3, 4, 5, 6):
        pres = sum_squares(n)
        dual = koszul_dual(pres)
        gens = " ".join(f"x{i}" for i in range(1, n + 1))
        rels = [f"x{i}*x{j}" for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
        rels += [f"x1^2 - x{j}^2" for j in range(2, n + 1)]
        expected = parse_presentation(f"field Q; gens {gens}; " + "; ".join(f"rel {r}" for r in rels))
        ok &= same_relation_space(dual, expected)
        HA, _ = hilbert_series(pres, 10)
        HB, _ = hilbert_series(dual, 10)
        ok &= list(HB) == [1, n, 1] + [0] * 8
        signed = PowerSeries(tuple((-1) ** d * c for d, c in enumerate(HB)))
        ok &= list(HA * signed) == [1] + [0] * 10
    report(8, ok, time.perf_counter() - t0, 1, "n = 3..6")


def test_criterion_09_distinguish(report, load):
    t0 = time.perf_counter()
    d = distinguish_schemes(load("p1_3"), load("p1_4"))
    s = distinguish_schemes(load("commutative_plane"), load("quantum_plane"))
    ok = d.verdict.startswith("non-isomorphic") and not d.euler_a_vs_b.passed
    ok &= s.verdict.startswith("indistinguishable") and s.twist is not None and s.twist_preserves_hilbert
    report(9, ok, time.perf_counter() - t0, 1,
           f"Euler obstruction at degree {d.euler_a_vs_b.first_tail_degree}; twist {s.twist.render(s.names)}")


def test_criterion_10_regularity_and_chi(report, load):
    t0 = time.perf_counter()
    w = zhang_regular_check(load("weighted"))
    ok = w.is_regular and w.gorenstein_shift == 3 and w.sigma.is_invertible()
    bad = zhang_regular_check(parse_presentation("field Q; gens x y; rel x*y"))
    ok &= not bad.is_regular and bad.rank == 1
    names = ("commutative_plane", "quantum_plane", "cyclic3", "sum_squares3", "sum_squares4",
             "weighted", "p1_4")
    for name in names:
        pres = load(name)
        chi = chi_check(pres)
        expected = {0: {0: 1}, 1: {}, 2: {pres.max_relation_degree(): 1}}
        for d in pres.weights:
            expected[1][d] = expected[1].get(d, 0) + 1
        ok &= chi.ext == expected
        ok &= [sum(v.values()) for v in chi.ext.values()] == [1, pres.n, 1]
    report(10, ok, time.perf_counter() - t0, 5, f"{len(names)} regular fixtures")


def test_criterion_11_rank_oracle(report):
    t0 = time.perf_counter()
    F3 = Field(3)
    ok = True
    checked = 0
    for n in (1, 2, 3):
        best = oracle.f3_rank_table(n)
        ok &= len(best) == 3 ** (n * n)
        for flat, r in best.items():
            t = QuadraticTensor.of(F3, [flat[i * n:(i + 1) * n] for i in range(n)])
            ok &= tensor_rank(t) == r
            checked += 1
    report(11, ok, time.perf_counter() - t0, 60, f"{checked} tensors over F3")
