import pytest
from hypothesis import given
from hypothesis import strategies as st

from arrowkit.config import caps
from arrowkit.corpus import b2, c3, diamond
from arrowkit.errors import NotALattice, NotAPoset, SubsetCapExceeded
from arrowkit.lattice import boolean, chain, lattice_from_pairs, power_lattice, product, subsets, validate_lattice
from oracles import Oracle
from strategies import moore_lattices


def test_two_chain_meet_is_min_join_is_max():
    lat = chain(2)
    for a in lat.elements:
        for b in lat.elements:
            assert lat.meet2[a][b] == min(a, b)
            assert lat.join2[a][b] == max(a, b)


def test_three_chain_meet_and_join():
    lat = c3()
    half = lat.index("half")
    assert lat.meet_set([half, lat.top]) == half
    assert lat.meet_set([]) == lat.top
    assert lat.join_set([lat.bot, half]) == half
    assert lat.join_set([]) == lat.bot


def test_diamond_atoms_meet_to_bottom_and_join_to_top():
    lat = diamond()
    a, b = lat.index("a"), lat.index("b")
    assert lat.meet_set([a, b]) == lat.bot
    assert lat.join_set([a, b]) == lat.top


def test_n_shape_without_lub_is_rejected():
    # a < c, a < d, b < c, b < d: c and d have no meet, a and b no join
    names = ["a", "b", "c", "d"]
    with pytest.raises(NotALattice) as info:
        lattice_from_pairs(names, [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    o = Oracle([[x == y or (x < 2 <= y) for y in range(4)] for x in range(4)], [[0] * 4] * 4)
    with pytest.raises(AssertionError):
        o.lub([0, 1])
    assert set(info.value.witness["pair"]) <= set(names)


def test_cycle_is_not_a_poset():
    with pytest.raises(NotAPoset):
        lattice_from_pairs(["x", "y"], [("x", "y"), ("y", "x")])


def test_duplicate_and_empty_names_are_rejected():
    with pytest.raises(NotAPoset):
        validate_lattice([], [])
    with pytest.raises(NotAPoset):
        validate_lattice(["x", "x"], [[True, False], [False, True]])


def test_subsets_enumeration_order_and_cap():
    assert list(subsets([0, 1, 2])) == [(), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]
    with pytest.raises(SubsetCapExceeded):
        list(subsets(list(range(caps().subset + 1))))


def test_caps_read_from_environment(monkeypatch):
    monkeypatch.setenv("ARROWKIT_CAPS", "subset=3")
    with pytest.raises(SubsetCapExceeded):
        list(subsets([0, 1, 2, 3]))
    monkeypatch.setenv("ARROWKIT_CAPS", "bogus=1")
    with pytest.raises(ValueError):
        caps()


def test_products_and_powers():
    sq = product(b2(), b2())
    assert sq.size == 4
    assert power_lattice(c3(), 2).size == 9
    assert power_lattice(c3(), 0).size == 1
    assert boolean(2).size == 4


@given(moore_lattices())
def test_meet_and_join_tables_match_brute_force_bounds(lat):
    o = Oracle(lat.leq, [[0] * lat.size] * lat.size)
    for a in lat.elements:
        for b in lat.elements:
            assert lat.meet2[a][b] == o.glb([a, b])
            assert lat.join2[a][b] == o.lub([a, b])
    assert lat.top == o.top and lat.bot == o.bot


@given(moore_lattices(), st.data())
def test_meet_set_is_greatest_lower_bound(lat, data):
    xs = data.draw(st.lists(st.sampled_from(list(lat.elements)), max_size=4))
    m = lat.meet_set(xs)
    assert all(lat.le(m, x) for x in xs)
    assert all(lat.le(g, m) for g in lat.elements if all(lat.le(g, x) for x in xs))
    j = lat.join_set(xs)
    assert all(lat.le(x, j) for x in xs)
    assert all(lat.le(j, g) for g in lat.elements if all(lat.le(x, g) for x in xs))
