import pytest
from hypothesis import given, strategies as st

from chevring.rootdata import PRESETS, make_root_datum


@pytest.mark.parametrize("preset,n_pos,weyl,longest", [
    ("A1", 1, 2, 1), ("A2", 3, 6, 3), ("C2", 4, 8, 4), ("GL2", 1, 2, 1), ("GL3", 3, 6, 3)])
def test_root_system_sizes(preset, n_pos, weyl, longest):
    D = make_root_datum(preset)
    assert len(D.positive) == n_pos
    assert len(D.roots) == 2 * n_pos
    assert len(D.weyl_elements()) == weyl
    assert len(D.longest()) == longest


def test_heights():
    assert sorted(make_root_datum("A2").height(b) for b in make_root_datum("A2").positive) == [1, 1, 2]
    C2 = make_root_datum("C2")
    assert sorted(C2.height(b) for b in C2.positive) == [1, 1, 2, 3]


def test_a2_adjacent_commutator_has_one_term():
    A2 = make_root_datum("A2")
    terms = A2.chevalley_pairs((1, -1, 0), (0, 1, -1))
    assert [(t.i, t.j, t.root, t.constant) for t in terms] == [(1, 1, (1, 0, -1), 1)]


def test_opposite_roots_are_rejected():
    A1 = make_root_datum("A1")
    with pytest.raises(ValueError):
        A1.chevalley_pairs(*A1.roots)


def test_same_root_commutes():
    A1 = make_root_datum("A1")
    a = A1.positive[0]
    assert A1.chevalley_pairs(a, a) == []


def test_c2_short_long_pair_has_two_terms():
    C2 = make_root_datum("C2")
    pairs = [(a, b) for a in C2.roots for b in C2.roots if a != tuple(-x for x in b)]
    two_term = [(a, b) for a, b in pairs if len(C2.chevalley_pairs(a, b)) == 2]
    assert two_term
    for a, b in two_term:
        shape = sorted((t.i, t.j) for t in C2.chevalley_pairs(a, b))
        assert shape in ([(1, 1), (2, 1)], [(1, 1), (1, 2)])
    short, long_ = (1, -1), (0, 2)
    assert [(t.i, t.j) for t in C2.chevalley_pairs(short, long_)] == [(1, 1), (2, 1)]


def test_weyl_names():
    A1 = make_root_datum("A1")
    assert [w.name() for w in A1.weyl_elements()] == ["1", "s1"]
    assert A1.weyl_by_name("s").name() == "s1"
    assert A1.weyl_by_name("id").is_identity


@given(st.sampled_from(PRESETS), st.data())
def test_weyl_group_acts_on_roots(preset, data):
    D = make_root_datum(preset)
    w = data.draw(st.sampled_from(D.weyl_elements()))
    v = data.draw(st.sampled_from(D.weyl_elements()))
    image = sorted(D.act(w, b) for b in D.roots)
    assert image == sorted(D.roots)
    for b in D.roots:
        assert D.act(D.compose(w, v), b) == D.act(w, D.act(v, b))
    winv = D.inverse(w)
    assert D.compose(w, winv).is_identity


@given(st.sampled_from(PRESETS), st.data())
def test_chevalley_terms_are_roots(preset, data):
    D = make_root_datum(preset)
    a = data.draw(st.sampled_from(D.roots))
    b = data.draw(st.sampled_from([b for b in D.roots if b != tuple(-x for x in a)]))
    for t in D.chevalley_pairs(a, b):
        assert D.is_root(t.root)
        assert t.root == tuple(t.i * x + t.j * y for x, y in zip(a, b))
        assert t.constant != 0
