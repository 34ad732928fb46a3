import pytest

from chevring.decomp import bruhat_decompose
from chevring.group import build_group, demo_ring
from chevring.oracle import (NaiveGroup, SUITES, commutator_level_violations, conjugacy_class_count,
                             congruence_elements, enumerate_group, naive_decomposition_search,
                             naive_decomposition_table, parse_scope, regular_orbit_count, run_suite)


@pytest.mark.parametrize("preset,label,order", [("SL2", "Z/4", 48), ("SL2", "Z/2", 6),
                                                ("SL2", "F2[t]/t2", 48), ("GL2", "Z/4", 96)])
def test_closure_enumeration_matches_formula(preset, label, order):
    G = build_group(preset, demo_ring(label))
    elems = enumerate_group(G)
    assert len(elems) == order == G.order()
    assert elems == sorted(elems)
    assert set(elems) == set(G.elements())


@pytest.mark.slow
def test_closure_enumeration_sl3():
    assert len(enumerate_group(build_group("SL3", demo_ring("Z/4")))) == 43008


def test_class_counts():
    assert conjugacy_class_count(build_group("SL2", demo_ring("Z/2"))) == 3
    assert conjugacy_class_count(build_group("SL2", demo_ring("Z/4"))) == 10


def test_naive_group_agrees_on_products(sl2_z4):
    naive = NaiveGroup(sl2_z4)
    elems = enumerate_group(sl2_z4)
    for g in elems[::5]:
        for h in elems[::7]:
            assert naive.mul(g, h) == sl2_z4.mul(g, h)
        assert naive.det(g) == sl2_z4.ring.one


def test_decomposition_tables_are_unique(sl2_z4):
    iw = naive_decomposition_table(sl2_z4, "iwahori")
    assert len(iw) == 8 and all(len(v) == 1 for v in iw.values())
    br = naive_decomposition_table(sl2_z4, "bruhat")
    assert len(br) == 48 and all(len(v) == 1 for v in br.values())


def test_naive_search_matches_worked_example(sl2_z4, alpha):
    g = sl2_z4.from_rows([[2, 1], [3, 0]])
    (sol,) = naive_decomposition_search(sl2_z4, g, "bruhat")
    rec = bruhat_decompose(sl2_z4, g)
    assert sol.w == "s1"
    assert sol.factors == (rec.u, rec.lift, rec.t_prime, rec.k, rec.u_prime)


def test_congruence_subgroup_sizes(sl2_z4):
    assert len(congruence_elements(sl2_z4, 1)) == 8
    assert congruence_elements(sl2_z4, 2) == [sl2_z4.identity]


def test_filtration_violations_none(sl2_z4):
    G1 = congruence_elements(sl2_z4, 1)
    checked, bad = commutator_level_violations(sl2_z4, 1, 1, G1, G1)
    assert checked == 64 and bad is None


def test_scope_parsing():
    G = parse_scope("SL2(Z/4)@s1")
    assert G.twist.name() == "s1"
    with pytest.raises(ValueError):
        parse_scope("SL2")


def test_regular_orbits_bounded_by_classes():
    G = build_group("SL2", demo_ring("Z/4"))
    assert regular_orbit_count(G) == 1 <= conjugacy_class_count(G)


@pytest.mark.parametrize("suite", ["iwahori-unique", "bruhat-unique", "rank1-closed-form",
                                   "norm-maps", "stratification", "regularity-minimal-m",
                                   "lift-independence", "inner-product", "enumeration-stable"])
def test_suites_pass_on_sl2_z4(suite):
    (rep,) = run_suite(suite, "SL2(Z/4)")
    assert rep.outcome == "pass", rep.to_line()
    assert rep.mode == "exhaustive" and rep.checked > 0


def test_injected_structure_constant_fails_with_witness():
    (rep,) = run_suite("chevalley-expansion", "SL3(Z/4)", inject={"structure_constant": True})
    assert rep.outcome == "fail"
    assert rep.witness["x"] == rep.witness["y"] == 1
    (again,) = run_suite("chevalley-expansion", "SL3(Z/4)", inject={"structure_constant": True})
    assert again.witness == rep.witness


def test_rank1_suite_reports_counterexample_over_z8():
    (rep,) = run_suite("rank1-closed-form", "SL2(Z/8)")
    assert rep.outcome == "fail"
    assert rep.witness["b"] == 1 and rep.witness["c"] == 1


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite("no-such-suite", "SL2(Z/4)")
    assert "filtration-commutator" in SUITES


def test_budget_skips_instead_of_failing():
    from chevring.budget import set_budget, current_budget
    old = current_budget()
    set_budget(10)
    try:
        (rep,) = run_suite("bruhat-unique", "SL2(Z/4)")
    finally:
        set_budget(old)
    assert rep.outcome == "skipped"
