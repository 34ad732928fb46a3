import pytest
from hypothesis import given, settings, strategies as st

from chevring.group import build_group, demo_ring
from chevring.oracle import NaiveGroup


@pytest.mark.parametrize("preset,label,order", [
    ("SL2", "Z/4", 48), ("SL2", "F2[t]/t2", 48), ("SL2", "Z/2", 6), ("SL2", "GR16", 3840),
    ("SL3", "Z/4", 43008), ("GL2", "Z/2", 6), ("SL2", "F3", 24)])
def test_group_orders(preset, label, order):
    assert build_group(preset, demo_ring(label)).order() == order


def test_order_matches_scan_for_small_groups(sl2_z4):
    assert sum(1 for _ in sl2_z4.elements()) == 48


def test_root_and_coroot_elements(sl2_z4, alpha):
    G = sl2_z4
    neg = tuple(-x for x in alpha)
    assert G.to_int_rows(G.root_element(alpha, G.ring.from_int(1))) == [[1, 1], [0, 1]]
    assert G.to_int_rows(G.root_element(neg, G.ring.from_int(2))) == [[1, 0], [2, 1]]
    assert G.to_int_rows(G.coroot_element(alpha, G.ring.from_int(3))) == [[3, 0], [0, 3]]
    assert G.coroot_element(alpha, G.ring.from_int(1)) == G.identity


def test_root_element_is_additive(sl2_z4, alpha):
    G, R = sl2_z4, sl2_z4.ring
    one, three = R.from_int(1), R.from_int(3)
    assert G.mul(G.root_element(alpha, one), G.root_element(alpha, three)) == G.identity


def test_torus_conjugation_scales_root_element(sl2_z4, alpha):
    G, R = sl2_z4, sl2_z4.ring
    for lam in (R.from_int(1), R.from_int(3)):
        h = G.coroot_element(alpha, lam)
        for z in range(R.size):
            expected = G.root_element(alpha, R.mul(R.mul(lam, lam), z))
            assert G.prod(h, G.root_element(alpha, z), G.inv(h)) == expected


def test_levels(sl2_z4, alpha):
    G = sl2_z4
    assert G.level(G.identity) == 2
    assert G.level(G.from_rows([[1, 2], [0, 1]])) == 1
    assert G.level(G.root_element(alpha, G.ring.from_int(1))) == 0


def test_weyl_representative(sl2_z4):
    G = sl2_z4
    s = G.datum.weyl_by_name("s")
    assert G.to_int_rows(G.weyl_rep(s)) == [[0, 1], [3, 0]]
    assert G.to_int_rows(G.simple_weyl_rep(0)) == [[0, 1], [3, 0]]


def test_frobenius_on_extension(z4, alpha):
    G2 = build_group("SL2", z4).extension(2)
    R2 = G2.ring
    omega = R2.generator()
    g = G2.root_element(alpha, omega)
    assert G2.frobenius(g) == G2.root_element(alpha, R2.mul(omega, omega))
    base = G2.from_rows([[1, 1], [0, 1]])
    assert G2.frobenius(base) == base


def test_twisted_frobenius_swaps_diagonal(z4):
    G2 = build_group("SL2", z4, "s").extension(2)
    R2 = G2.ring
    omega = R2.generator()
    t = G2.diagonal([omega, R2.inv(omega)])
    Ft = R2.frobenius(omega)
    assert G2.frobenius(t) == G2.diagonal([R2.inv(Ft), Ft])


def test_membership_rejects_wrong_determinant(sl2_z4):
    assert not sl2_z4.is_member(sl2_z4.from_rows([[3, 0], [0, 1]]))
    with pytest.raises(ValueError):
        sl2_z4.element([[3, 0], [0, 1]])


@pytest.mark.parametrize("preset,label", [("SL2", "Z/4"), ("SL2", "Z/8"), ("SL2", "GR16"), ("GL2", "Z/4")])
def test_reduction_is_homomorphism_with_congruence_kernel(preset, label):
    G = build_group(preset, demo_ring(label))
    elems = list(G.elements())
    for r2 in range(1, G.ring.r):
        small = G.truncation(r2)
        images = {G.reduce(g, r2) for g in elems}
        assert len(images) == small.order()
        kernel = [g for g in elems if G.reduce(g, r2) == small.identity]
        assert len(kernel) == sum(1 for g in elems if G.level(g) >= r2)
        assert len(elems) == len(images) * len(kernel)


matrices = st.sampled_from(sorted(build_group("SL2", demo_ring("Z/4")).elements()))


@given(matrices, matrices)
@settings(max_examples=150, deadline=None)
def test_multiplication_and_inverse_match_naive(g, h):
    G = build_group("SL2", demo_ring("Z/4"))
    naive = NaiveGroup(G)
    assert G.mul(g, h) == naive.mul(g, h)
    assert G.inv(g) == naive.inv(g)
    assert G.level(G.commutator(g, h)) >= min(G.level(g) + G.level(h), G.ring.r)
    assert G.reduce(G.mul(g, h), 1) == G.truncation(1).mul(G.reduce(g, 1), G.reduce(h, 1))


sl3 = build_group("SL3", demo_ring("Z/4"))
sl3_entries = st.tuples(*[st.integers(0, 3)] * 3)


@given(sl3_entries, sl3_entries)
@settings(max_examples=80, deadline=None)
def test_sl3_products_stay_in_group(x, y):
    R = sl3.ring
    D = sl3.datum
    g = sl3.prod(*(sl3.root_element(a, R.from_int(v)) for a, v in zip(D.positive, x)))
    h = sl3.prod(*(sl3.root_element(tuple(-c for c in a), R.from_int(v)) for a, v in zip(D.positive, y)))
    naive = NaiveGroup(sl3)
    assert sl3.is_member(sl3.mul(g, h))
    assert naive.is_member(sl3.mul(g, h))
    assert sl3.mul(g, sl3.inv(g)) == sl3.identity
