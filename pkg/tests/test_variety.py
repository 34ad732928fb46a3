import json
from collections import Counter

import pytest

from chevring.group import build_group, demo_ring
from chevring.torus import characters, make_torus, regular_characters, trivial_character
from chevring.variety import (hat_sigma_fiber_sizes, hat_sigma_fixed_count, inner_product_rhs,
                              irreducibility_predicate, quotient_fiber_sizes, s_tu_points,
                              sigma_partition, sigma_points, sigma_tilde_check, sigma_tilde_report)


@pytest.fixture(scope="module")
def sigma(split_torus):
    return sigma_points(split_torus, split_torus, 1)


@pytest.fixture(scope="module")
def weyl(sl2_z4):
    D = sl2_z4.datum
    return D.identity(), D.weyl_by_name("s")


def test_sigma_size_and_partition(sigma):
    assert len(sigma) == 80
    cells = sigma_partition(sigma)
    assert {k: len(v) for k, v in cells.items()} == {"1": 48, "s1": 32}


def test_sigma_header_and_lines(sigma):
    lines = list(sigma.to_lines())
    head = json.loads(lines[0])
    assert head["count"] == 80
    assert head["header"]["preset"] == "SL2"
    assert len(lines) == 81


def test_tilde_parametrisation(split_torus, sigma, weyl):
    for w in weyl:
        rep = sigma_tilde_report(split_torus, split_torus, w, n=1, sigma=sigma)
        assert rep.ok
        assert sigma_tilde_check(split_torus, split_torus, w, n=1)


def test_hat_fibration(split_torus, sigma, weyl):
    one, s = weyl
    rep = hat_sigma_fiber_sizes(split_torus, split_torus, one, n=1, sigma=sigma)
    assert rep.fiber_sizes.keys() == {4}
    assert rep.tuples == 192
    assert rep.covers_cell and rep.equivariant
    rep = hat_sigma_fiber_sizes(split_torus, split_torus, s, n=1, sigma=sigma)
    assert rep.fiber_sizes.keys() == {1}


def test_fixed_counts(split_torus, nonsplit_torus, weyl):
    for w in weyl:
        rep = hat_sigma_fixed_count(split_torus, split_torus, w)
        assert rep.count == rep.closed_form == 2
    one, s = weyl
    assert hat_sigma_fixed_count(split_torus, nonsplit_torus, one).count == 0
    rep = hat_sigma_fixed_count(nonsplit_torus, nonsplit_torus, one)
    assert rep.count == rep.closed_form == 6


def test_s_tu_and_quotient(split_torus):
    assert len(s_tu_points(split_torus, 1)) == 48
    rep = quotient_fiber_sizes(split_torus, split_torus, 1)
    assert rep.image_in_sigma and rep.constant
    assert rep.group_fixed_order == 48


def test_nonsplit_s_tu_empty_at_level_one(nonsplit_torus):
    assert len(s_tu_points(nonsplit_torus, 1)) == 0


def test_counting_formula_examples(split_torus, nonsplit_torus):
    reg = regular_characters(split_torus)[0]
    triv = trivial_character(split_torus.fixed(1).structure)
    rep = inner_product_rhs(split_torus, reg, split_torus, reg)
    assert rep.count == 2
    assert sorted(x.w.name() for x in rep.witnesses) == ["1", "s1"]
    assert inner_product_rhs(split_torus, reg, split_torus, triv, override=True).count == 0
    with pytest.raises(ValueError):
        inner_product_rhs(split_torus, triv, split_torus, triv)
    for th in characters(nonsplit_torus.fixed(1).structure):
        assert inner_product_rhs(split_torus, reg, nonsplit_torus, th, override=True).count == 0


def test_counting_formula_is_symmetric(sl2_z4):
    tori = [make_torus(sl2_z4, w) for w in sl2_z4.datum.weyl_elements()]
    for T in tori:
        for Tp in tori:
            for th in characters(T.fixed(1).structure):
                for thp in characters(Tp.fixed(1).structure):
                    fwd = inner_product_rhs(T, th, Tp, thp, override=True).count
                    assert fwd == inner_product_rhs(Tp, thp, T, th, override=True).count


def test_irreducibility_predicate(split_torus):
    reg = regular_characters(split_torus)[0]
    assert irreducibility_predicate(split_torus, reg) == "not-applicable"
    with pytest.raises(ValueError):
        irreducibility_predicate(split_torus, trivial_character(split_torus.fixed(1).structure))


def test_irreducible_regular_characters():
    T = make_torus(build_group("GL2", demo_ring("Z/4")))
    verdicts = Counter(irreducibility_predicate(T, th) for th in regular_characters(T))
    assert verdicts["irreducible"] >= 1
    T3 = make_torus(build_group("SL2", demo_ring("F3")), "s")
    for th in characters(T3.fixed(1).structure):
        if th.order == 4:
            assert irreducibility_predicate(T3, th) == "irreducible"


@pytest.mark.slow
def test_level_two_split(split_torus, weyl):
    sigma2 = sigma_points(split_torus, split_torus, 2)
    assert len(sigma2) == 1280
    assert {k: len(v) for k, v in sigma_partition(sigma2).items()} == {"1": 768, "s1": 512}
    one, s = weyl
    assert hat_sigma_fiber_sizes(split_torus, split_torus, one, n=2, sigma=sigma2).fiber_sizes.keys() == {16}
    assert quotient_fiber_sizes(split_torus, split_torus, 2).constant
