"""The twelve acceptance criteria, one recorded line each."""

import time

import pytest

from chevring.budget import BudgetExceeded
from chevring.decomp import rank1_commutator
from chevring.group import build_group, demo_ring
from chevring.oracle import conjugacy_class_count, norm_checks, regular_orbit_count, run_suite
from chevring.ring import extend
from chevring.torus import characters, make_torus, regular_characters, trivial_character, unit_norm
from chevring.variety import (hat_sigma_fiber_sizes, hat_sigma_fixed_count, inner_product_rhs,
                              quotient_fiber_sizes, sigma_partition, sigma_points, sigma_tilde_report)

SL2_DESK = ["SL2(Z/4)", "SL2(F2[t]/t2)", "SL2(GR16)"]
SMALL_RINGS = ["Z/2", "Z/3", "Z/4", "Z/8", "Z/9", "F2[t]/t2", "F3[t]/t2", "GR16", "F4", "F3"]


def run_all(suite, scopes, inject=None):
    reports = [rep for scope in scopes for rep in run_suite(suite, scope, inject=inject)]
    failed = [r for r in reports if not r.passed]
    checked = sum(r.checked for r in reports)
    seconds = sum(r.wall_time for r in reports)
    return reports, failed, checked, seconds


def describe(failed):
    return "; ".join(f"{r.property_id} on {r.scope}: {r.outcome} {r.witness}" for r in failed)


def test_c01_filtration(criterion):
    reports, failed, checked, seconds = run_all("filtration-commutator", SL2_DESK + ["SL3(Z/4)"])
    sl3 = reports[-1]
    ok = (not failed and seconds <= 60 and sl3.checked >= 100_000
          and all(r.mode == "exhaustive" for r in reports[:3]))
    criterion("1 filtration", ok, f"{checked} pairs, {seconds:.1f}s, SL3 {sl3.mode} {sl3.checked}")
    assert ok, describe(failed)
    assert sl3.checked >= 100_000


def test_c02_iwahori(criterion):
    reports, failed, checked, _ = run_all("iwahori-unique", SL2_DESK)
    ok = criterion("2 iwahori", not failed, f"{checked} elements of G^1, 0 mismatches" if not failed else describe(failed))
    assert ok


def test_c03_bruhat(criterion):
    reports, failed, checked, _ = run_all("bruhat-unique", ["SL2(Z/4)", "SL2(GR16)"])
    ok = not failed and [r.checked for r in reports] == [48, 3840]
    criterion("3 bruhat", ok, f"{[r.checked for r in reports]} elements")
    assert ok, describe(failed)


def test_c04_rank1_worked_value(criterion):
    G = build_group("SL2", demo_ring("Z/4"))
    a = G.datum.positive[0]
    rec = rank1_commutator(G, a, 1, 2, 0, 1)
    worked = G.to_int_rows(rec.tau) == [[3, 0], [0, 3]] and rec.u_parameter == 2 and rec.agrees
    reports, failed, checked, _ = run_all("rank1-closed-form", ["SL2(Z/4)"])
    ok = criterion("4a rank-1 closed form over Z/4", worked and not failed,
                   f"{checked} admissible tuples, worked value diag(3,3) p(2)")
    assert ok


@pytest.mark.xfail(strict=True, reason="closed form disagrees with the matrix commutator; see ledger")
@pytest.mark.parametrize("label,tag", [("Z/8", "4b"), ("F3[t]/t2", "4c")])
def test_c04_rank1_closed_form_larger_rings(criterion, label, tag):
    (rep,) = run_suite("rank1-closed-form", f"SL2({label})")
    criterion(f"{tag} rank-1 closed form over {label}", rep.passed,
              f"counterexample {rep.witness}" if rep.witness else f"{rep.checked} tuples")
    assert rep.passed


def test_c05_chevalley(criterion):
    scopes = [f"{g}({r})" for g in ("SL3", "Sp4") for r in SMALL_RINGS]
    reports, failed, checked, seconds = run_all("chevalley-expansion", scopes)
    ok = criterion("5 chevalley commutator", not failed, f"{len(scopes)} groups, {checked} products, {seconds:.1f}s")
    assert ok, describe(failed)


def test_c06_stratification(criterion):
    reports, failed, checked, _ = run_all("stratification", ["SL3(Z/4)", "SL3(F2[t]/t2)"])
    ok = criterion("6 stratification", not failed, f"{checked} elements over all frames, both orders")
    assert ok, describe(failed)


def test_c07_norms(criterion):
    z4 = demo_ring("Z/4")
    big, _ = extend(z4, 2)
    omega = big.generator()
    n1 = z4.decode(unit_norm(omega, big, z4))
    n2 = z4.decode(unit_norm(big.add(big.one, big.mul(big.from_int(2), omega)), big, z4))
    bad, checked = [], 0
    for preset in ("SL2", "GL2"):
        for label in ("Z/4", "F2[t]/t2"):
            G = build_group(preset, demo_ring(label))
            for w in G.datum.weyl_elements():
                n, witness = norm_checks(make_torus(G, w), 6)
                checked += n
                if witness:
                    bad.append((preset, label, w.name(), witness))
    ok = not bad and n1 == (1,) and n2 == (3,)
    criterion("7 norm maps", ok, f"{checked} checks, N(w)={n1[0]}, N(1+2w)={n2[0]}")
    assert ok, bad


def test_c08_regularity(criterion):
    scopes = [f"{g}({r})" for g in ("SL2", "GL2") for r in ("Z/4", "F2[t]/t2", "GR16")]
    reports, failed, checked, _ = run_all("regularity-minimal-m", scopes)
    T = make_torus(build_group("SL2", demo_ring("Z/4")))
    n_reg = len(regular_characters(T))
    n_all = len(characters(T.fixed(1).structure))
    ok = not failed and (n_reg, n_all) == (1, 2)
    criterion("8 regularity", ok, f"{checked} characters agree up to n=6; split SL2(Z/4): {n_reg} of {n_all}")
    assert ok, describe(failed)


def test_c09_lift_independence(criterion):
    scopes = SL2_DESK + ["GL2(Z/4)", "GL2(F2[t]/t2)"]
    reports, failed, checked, _ = run_all("lift-independence", scopes)
    ok = criterion("9 lift independence", not failed, f"{checked} lift evaluations")
    assert ok, describe(failed)


def test_c10_counting_formula(criterion):
    G = build_group("SL2", demo_ring("Z/4"))
    T = make_torus(G)
    reg = regular_characters(T)[0]
    triv = trivial_character(T.fixed(1).structure)
    rep = inner_product_rhs(T, reg, T, reg)
    witnesses = sorted(x.w.name() for x in rep.witnesses)
    zero = inner_product_rhs(T, reg, T, triv, override=True).count
    reports, failed, checked, _ = run_all("inner-product", ["SL2(Z/4)", "GL2(Z/4)"])
    ok = rep.count == 2 and witnesses == ["1", "s1"] and zero == 0 and not failed
    criterion("10 counting formula", ok,
              f"reg/reg {rep.count} via {witnesses}, reg/triv {zero}, {checked} pairs symmetric and naive-equal")
    assert ok, describe(failed)


def _level_two_checks(T, Tp):
    """Exhaustive level-2 identities for one torus pair; None when over budget."""
    try:
        sigma = sigma_points(T, Tp, 2)
    except BudgetExceeded:
        return None
    sigma_partition(sigma)
    q = quotient_fiber_sizes(T, Tp, 2)
    ok = q.image_in_sigma and (not q.fiber_sizes or q.constant)
    for w in T.datum.weyl_elements():
        tilde = sigma_tilde_report(T, Tp, w, n=2, sigma=sigma)
        hat = hat_sigma_fiber_sizes(T, Tp, w, n=2, sigma=sigma)
        ok = ok and tilde.ok and hat.covers_cell and hat.equivariant and (hat.constant or not hat.tuples)
        ok = ok and hat_sigma_fixed_count(T, Tp, w).agrees
    return ok


def test_c11_variety_identities(criterion):
    (rep,) = run_suite("sigma-identities", "SL2(Z/4)")
    G = build_group("SL2", demo_ring("Z/4"))
    tori = [make_torus(G, w) for w in G.datum.weyl_elements()]
    level_two, skipped = [], 0
    for T in tori:
        for Tp in tori:
            start = time.perf_counter()
            verdict = _level_two_checks(T, Tp)
            if verdict is None:
                skipped += 1
            else:
                level_two.append((verdict, time.perf_counter() - start))
    ok = rep.passed and rep.wall_time <= 120 and all(v and t <= 120 for v, t in level_two)
    criterion("11 variety identities", ok,
              f"level 1 all pairs in {rep.wall_time:.1f}s; level 2 {len(level_two)} pairs checked, "
              f"{skipped} over the 1e7 budget")
    assert ok, rep.to_line()


def test_c12_class_bound(criterion):
    counts = {}
    for preset in ("SL2", "GL2"):
        G = build_group(preset, demo_ring("Z/4"))
        counts[preset] = (regular_orbit_count(G), conjugacy_class_count(G))
    ok = all(orbits <= classes for orbits, classes in counts.values())
    criterion("12 class bound", ok, ", ".join(f"{k}(Z/4): {o} <= {c}" for k, (o, c) in counts.items()))
    assert ok
