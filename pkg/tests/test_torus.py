from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chevring.group import build_group, demo_ring
from chevring.oracle import abelian_class_count, norm_checks
from chevring.ring import extend
from chevring.torus import (characters, geometric_conjugacy_search, inner_product, is_regular,
                            is_regular_all_levels, make_torus, regular_characters, regularity,
                            transport_character, trivial_character, unit_norm, weyl_transporter)


def test_fixed_point_orders(split_torus, nonsplit_torus):
    fp = split_torus.fixed(1)
    assert fp.size == 2
    assert sorted(fp.elements()) == [(1, 1), (3, 3)]
    assert nonsplit_torus.fixed(1).size == 6
    assert make_torus(build_group("SL2", demo_ring("Z/2")), "s").fixed(1).size == 3


def test_fixed_point_structure(split_torus, nonsplit_torus):
    assert split_torus.fixed(1).structure.invariants == [2]
    assert nonsplit_torus.fixed(1).structure.invariants == [6]


def test_norm_regression_values(z4):
    big, _ = extend(z4, 2)
    omega = big.generator()
    assert z4.decode(unit_norm(omega, big, z4)) == (1,)
    assert z4.decode(unit_norm(big.add(big.from_int(1), big.mul(big.from_int(2), omega)), big, z4)) == (3,)


def test_norm_on_base_points_is_identity(split_torus):
    for t in split_torus.fixed(1).elements():
        assert split_torus.norm(t, 1, 1) == t


def test_character_counts(split_torus, nonsplit_torus):
    chars = characters(split_torus.fixed(1).structure)
    assert [th.images for th in chars] == [(Fraction(0),), (Fraction(1, 2),)]
    assert len(characters(nonsplit_torus.fixed(1).structure)) == 6


def test_regular_characters_of_split_torus(split_torus):
    regs = regular_characters(split_torus)
    assert len(regs) == 1
    assert regs[0].images == (Fraction(1, 2),)
    assert not is_regular(split_torus, trivial_character(split_torus.fixed(1).structure))
    cert = regularity(split_torus, regs[0])
    assert cert.regular and cert.m == 1


def test_trivial_group_character_over_residue_field():
    T = make_torus(build_group("SL2", demo_ring("Z/2")))
    (theta,) = characters(T.fixed(1).structure)
    assert not is_regular(T, theta)
    assert regularity(T, theta).failing_root is not None


def test_transporter_classes_and_lifts(split_torus):
    classes = weyl_transporter(split_torus, split_torus)
    assert sorted(c.x.name() for c in classes) == ["1", "s1"]
    for cls in classes:
        assert len(cls.lifts) == 2
    ident = next(c for c in classes if c.x.is_identity)
    assert split_torus.G.identity in ident.lifts


def test_transport_examples(split_torus, sl2_z4):
    G = sl2_z4
    s_hat = G.weyl_rep(G.datum.weyl_by_name("s"))
    for th in characters(split_torus.fixed(1).structure):
        assert transport_character(split_torus, split_torus, G.identity, th) == th
        once = transport_character(split_torus, split_torus, s_hat, th)
        assert transport_character(split_torus, split_torus, s_hat, once) == th


def test_no_transporter_between_split_and_nonsplit(split_torus, nonsplit_torus):
    assert weyl_transporter(split_torus, nonsplit_torus) == []


def test_geometric_conjugacy_search(split_torus, sl2_z4):
    T = split_torus
    reg = regular_characters(T)[0]
    triv = trivial_character(T.fixed(1).structure)
    found = geometric_conjugacy_search(T, reg, T, reg, n_max=1)
    assert found is not None and found.n == 1 and found.x.is_identity
    assert geometric_conjugacy_search(T, reg, T, triv, n_max=4) is None
    s_hat = sl2_z4.weyl_rep(sl2_z4.datum.weyl_by_name("s"))
    moved = transport_character(T, T, s_hat, reg)
    assert geometric_conjugacy_search(T, reg, T, moved, n_max=2) is not None


def test_abelian_class_count_equals_order(nonsplit_torus):
    fp = nonsplit_torus.fixed(1)
    assert abelian_class_count(fp.elements(), fp.mul, fp.inv) == fp.size


@pytest.mark.parametrize("preset,label,max_b", [("SL2", "Z/4", 6), ("SL2", "F2[t]/t2", 6), ("GL2", "Z/4", 4),
                                                ("SL2", "Z/9", 3), ("SL2", "F3", 4)])
def test_norm_transitivity_and_surjectivity(preset, label, max_b):
    G = build_group(preset, demo_ring(label))
    for w in G.datum.weyl_elements():
        checked, bad = norm_checks(make_torus(G, w), max_b)
        assert bad is None
        assert checked > 0


@pytest.mark.parametrize("preset,label", [("SL2", "Z/4"), ("GL2", "Z/4"), ("SL2", "F3"),
                                          ("SL2", "Z/9"), ("SL2", "GR16")])
def test_single_level_regularity_matches_all_levels(preset, label):
    G = build_group(preset, demo_ring(label))
    for w in G.datum.weyl_elements():
        T = make_torus(G, w)
        for th in characters(T.fixed(1).structure):
            assert is_regular(T, th) == is_regular_all_levels(T, th, 6)


nonsplit_chars = characters(make_torus(build_group("SL2", demo_ring("Z/4")), "s").fixed(1).structure)


@given(st.sampled_from(nonsplit_chars), st.sampled_from(nonsplit_chars))
@settings(max_examples=36, deadline=None)
def test_characters_form_a_group(th, ph):
    T = make_torus(build_group("SL2", demo_ring("Z/4")), "s")
    fp = T.fixed(1)
    for s in fp.elements():
        for t in fp.elements():
            assert th(fp.mul(s, t)) == (th(s) + th(t)) % 1
    assert inner_product(th, ph) == (1 if th == ph else 0)
    assert th.order * 0 == 0 and 6 % th.order == 0
