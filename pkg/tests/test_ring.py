import pytest
from hypothesis import given, settings, strategies as st

from chevring.group import demo_ring
from chevring.oracle import NaiveRing
from chevring.ring import EQUAL_CHAR, WITT, embedding, enumerate_indices, extend, make_ring, truncate

LABELS = ["Z/2", "Z/4", "Z/8", "Z/9", "F2[t]/t2", "F3[t]/t2", "GR16", "F4"]


def test_small_rings_have_expected_size():
    assert make_ring(2, 2, 1).size == 4
    assert make_ring(2, 1, 3).size == 8
    gr = make_ring(2, 2, 2)
    assert gr.size == 16
    assert gr.unit_count() == 12
    assert len(list(enumerate_indices(gr, "units"))) == 12


def test_extension_sizes():
    big, emb = extend(make_ring(2, 2), 2)
    assert big.size == 16
    assert emb.map(make_ring(2, 2).from_int(1)) == big.from_int(1)
    big, _ = extend(make_ring(2, 2, kind=EQUAL_CHAR), 3)
    assert big.size == 64


def test_frobenius_on_cube_root_of_unity(z4):
    big, emb = extend(z4, 2)
    omega = big.generator()
    assert big.power(omega, 3) == big.from_int(1)
    assert big.frobenius(omega) == big.mul(omega, omega)
    for a in range(z4.size):
        assert big.frobenius(emb.map(a)) == emb.map(a)


def test_galois_ring_frobenius_fixed_subring(gr16):
    fixed = [x for x in range(gr16.size) if gr16.sigma(x) == x]
    assert len(fixed) == 4


def test_valuations(z4, gr16):
    assert z4.valuation(z4.from_int(1)) == 0
    assert z4.valuation(z4.from_int(2)) == 1
    assert gr16.valuation(gr16.mul(gr16.from_int(2), gr16.generator())) == 1
    assert z4.valuation(z4.from_int(0)) == z4.r


def test_enumeration_filters(z4):
    assert [z4.decode(a) for a in enumerate_indices(z4)] == [(0,), (1,), (2,), (3,)]
    assert [z4.decode(a) for a in enumerate_indices(z4, "units")] == [(1,), (3,)]


@pytest.mark.parametrize("p", [0, 1, 4, 6])
def test_nonprime_characteristic_is_rejected(p):
    with pytest.raises(ValueError):
        make_ring(p, 2)


def test_truncation_is_a_quotient(z4):
    small = truncate(make_ring(2, 3), 2)
    assert small.size == z4.size


@pytest.mark.parametrize("label", LABELS)
def test_arithmetic_matches_schoolbook_oracle(label):
    R = demo_ring(label)
    naive = NaiveRing(R)
    for a in range(R.size):
        for b in range(R.size):
            assert R.add(a, b) == naive.add(a, b)
            assert R.mul(a, b) == naive.mul(a, b)
        assert R.valuation(a) == naive.valuation(a)
        assert R.is_unit(a) == naive.is_unit(a)
        if R.is_unit(a):
            assert R.mul(a, R.inv(a)) == R.from_int(1)


@pytest.mark.parametrize("label", LABELS)
def test_unit_count_is_size_minus_maximal_ideal(label):
    R = demo_ring(label)
    assert R.unit_count() == R.size - len(list(R.ideal(1)))


ring_and_pair = st.sampled_from(LABELS).map(demo_ring).flatmap(
    lambda R: st.tuples(st.just(R), st.integers(0, R.size - 1), st.integers(0, R.size - 1)))


@given(ring_and_pair)
@settings(max_examples=200, deadline=None)
def test_sigma_is_a_ring_automorphism(data):
    R, a, b = data
    assert R.sigma(R.add(a, b)) == R.add(R.sigma(a), R.sigma(b))
    assert R.sigma(R.mul(a, b)) == R.mul(R.sigma(a), R.sigma(b))


@given(st.sampled_from(["Z/4", "F2[t]/t2", "Z/9"]), st.integers(2, 3), st.data())
@settings(max_examples=60, deadline=None)
def test_extension_embedding_is_a_homomorphism(label, m, data):
    R = demo_ring(label)
    big, emb = extend(R, m)
    a = data.draw(st.integers(0, R.size - 1))
    b = data.draw(st.integers(0, R.size - 1))
    assert emb.map(R.add(a, b)) == big.add(emb.map(a), emb.map(b))
    assert emb.map(R.mul(a, b)) == big.mul(emb.map(a), emb.map(b))
    assert big.valuation(emb.map(a)) == R.valuation(a)


@given(st.sampled_from(["Z/4", "GR16", "F3[t]/t2"]).map(demo_ring).flatmap(
    lambda R: st.tuples(st.just(R), st.integers(0, R.size - 1))))
@settings(max_examples=100, deadline=None)
def test_embedding_into_itself_is_identity(data):
    R, a = data
    assert embedding(R, R).map(a) == a


def test_kinds_are_distinguished():
    assert make_ring(2, 2, kind=WITT).key() != make_ring(2, 2, kind=EQUAL_CHAR).key()
