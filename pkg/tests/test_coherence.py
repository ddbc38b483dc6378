import random

import pytest

from ncline import Field, NcPolynomial, QQ, build_presentation, parse_presentation
from ncline.coherence import (
    augmentation_betti,
    chain_witness,
    cyclic_presentation,
    ideal_free_basis_check,
    ideal_presentation,
    rnci_extract,
    sf_tor_identity,
    tor_betti,
)

import oracle

CYC = {(0, 1): 1, (1, 2): 1, (2, 0): 1}


def test_betti_of_principal_ideal(load):
    pres = load("commutative_plane")
    bt = tor_betti(pres, [pres.gen("x")], 8)
    assert bt.tor1 == {1: 1}
    assert bt.tor2 == {}
    assert bt.stabilized


def test_redundant_generator_is_pruned(load):
    pres = load("quantum_plane")
    ip = ideal_presentation(pres, [pres.gen(0), pres.gen(1), pres.poly("x*y")], 6)
    assert ip.pruned == [2]
    assert ip.degrees == [1, 1]
    assert [d for d, _ in ip.syzygies] == [2]
    assert ip.check_syzygies()


def test_augmentation_ideal_of_cyclic_algebra(load):
    bt = augmentation_betti(load("cyclic3"), 8)
    assert bt.tor1 == {1: 3}
    assert bt.tor2 == {2: 1}


def test_chain_generators_have_no_syzygies(load):
    pres = load("cyclic3")
    ip = ideal_presentation(pres, [pres.poly("x1*x3"), pres.poly("x1^2*x3")], 10)
    assert ip.betti().tor1 == {2: 1, 3: 1}
    assert ip.betti().total_tor2 == 0
    assert ip.dims[:7] == oracle.right_ideal_dims(3, [CYC], [{(0, 2): 1}, {(0, 0, 2): 1}], 6)


def test_rnci_certificate_for_cyclic_relation(load):
    cert = rnci_extract(load("cyclic3"), 10)
    assert (cert.kind, cert.status) == ("rnci", "certified")
    assert str(cert.B) == "field Q; gens y1:1 y2:1; rel y1*y2 + y2*y1 + y2^2"
    assert cert.B_regular.is_regular
    assert cert.strongly_free.degree == 10
    assert sf_tor_identity(cert, 5)
    js = cert.as_json()
    assert js["W"] == ["-x3 + x2"]


def test_monomial_and_noetherian_cases(load):
    cert = rnci_extract(parse_presentation("field Q; gens x y z; rel x*y"))
    assert cert.kind == "monomial"
    cert = rnci_extract(parse_presentation("field Q; gens x y z; rel (x+y)*(x-z)"))
    assert cert.kind == "monomial" and cert.factors is not None
    assert rnci_extract(load("weighted")).kind == "noetherian"
    assert rnci_extract(load("quantum_plane")).kind == "noetherian"


def test_outside_scope_is_reported(load):
    cert = rnci_extract(parse_presentation("field Q; gens x y z; rel x*y*z + z*y*x"))
    assert cert.status == "outside-scope"


def test_more_than_one_relation_rejected(load):
    with pytest.raises(ValueError):
        rnci_extract(load("two_relator_a"))


def test_random_batch_small():
    rng = random.Random(7)
    for F in (QQ, Field(5)):
        for _ in range(10):
            n = rng.choice([3, 4])
            t = {(i, j): rng.randint(-2, 2) for i in range(n) for j in range(n)}
            t = {w: c for w, c in t.items() if F.norm(c)}
            if not t:
                continue
            pres = build_presentation(F, [(f"x{i}", 1) for i in range(n)], [NcPolynomial(F, t)])
            cert = rnci_extract(pres, 5)
            assert cert.status == "certified"
            if cert.kind == "rnci":
                assert sf_tor_identity(cert, 4)


@pytest.mark.parametrize("n", [3, 4])
def test_free_basis_identity(n):
    gens = " ".join(f"x{i}" for i in range(1, n + 1))
    pres = parse_presentation(f"field Q; gens {gens}; rel " + " + ".join(f"x{i}^2" for i in range(1, n + 1)))
    v = ideal_free_basis_check(pres, [pres.gen(i) for i in range(2, n)], 10, explicit=4)
    assert v.holds and v.degree == 10 and v.explicit_degree == 4


def test_free_basis_failure():
    pres = parse_presentation("field Q; gens x; rel x^2")
    v = ideal_free_basis_check(pres, [pres.gen(0)], 6)
    assert not v.holds
    assert v.degree == 2
    assert (v.actual[2], v.expected[2]) == (0, 1)


def test_chain_witness_dims():
    rep = chain_witness(3, 3, 9)
    assert rep.strictly_ascending
    assert rep.quotient_dims[1][:6] == [0, 0, 1, 3, 8, 21]
    assert rep.quotient_dims[2][:6] == [0, 0, 0, 1, 3, 8]
    assert rep.quotient_dims[3][:7] == [0, 0, 0, 0, 1, 3, 8]


def test_cyclic_presentation_matches_fixture(load):
    assert cyclic_presentation(3, QQ) == load("cyclic3")
