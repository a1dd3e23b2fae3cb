import pytest
from hypothesis import given, settings, strategies as st

from liecert.rootsys import (
    DynkinType,
    InvalidRoot,
    all_types,
    conjugating_weyl_element,
    dominant_roots,
    format_root,
    neg,
    parse_root,
    reflect,
    root_system,
    support,
    weyl_element,
    weyl_orbit,
    weyl_orbits,
)

from _oracles import CARTAN, model_roots, positive_count, reflection_closure

TYPES_8 = [str(t) for t in all_types(8)]


# --- construction ---------------------------------------------------------------

def test_a1_has_one_positive_root():
    assert root_system("A1").positive_roots == ((1,),)


def test_a2_positive_roots():
    assert set(root_system("A2").positive_roots) == {(1, 0), (0, 1), (1, 1)}


def test_g2_positive_root_count():
    assert len(root_system("G2").positive_roots) == 6


@pytest.mark.parametrize("name", ["A1", "A4", "A6", "B2", "B3", "B5", "C2", "C4", "C6", "D4", "D5", "D7", "G2"])
def test_roots_match_euclidean_model(name):
    rs = root_system(name)
    assert set(rs.roots) == model_roots(name)


@pytest.mark.parametrize("name", ["G2", "F4", "E6"])
def test_roots_match_reflection_closure_of_cartan_table(name):
    rs = root_system(name)
    assert [list(r) for r in rs.cartan_matrix] == CARTAN[name]
    assert set(rs.roots) == reflection_closure(CARTAN[name])


@pytest.mark.parametrize("name", TYPES_8)
def test_root_counts_and_order(name):
    rs = root_system(name)
    assert len(rs.positive_roots) == positive_count(name)
    assert len(rs.roots) == 2 * positive_count(name)
    heights = [sum(r) for r in rs.positive_roots]
    assert heights == sorted(heights)
    assert rs.simple_roots == tuple(tuple(int(i == j) for j in range(rs.rank)) for i in range(rs.rank))
    for r in rs.roots:
        assert all(c >= 0 for c in r) or all(c <= 0 for c in r)


@pytest.mark.parametrize("name", TYPES_8)
def test_reflections_permute_roots_and_are_involutions(name):
    rs = root_system(name)
    roots = set(rs.roots)
    for i in range(rs.rank):
        image = {rs.simple_reflect(i, b) for b in rs.roots}
        assert image == roots
        for b in rs.roots:
            assert rs.simple_reflect(i, rs.simple_reflect(i, b)) == b


@pytest.mark.parametrize("text,msg", [("A0", "invalid"), ("B1", "invalid"), ("E5", "invalid"), ("F3", "invalid"),
                                      ("G3", "invalid"), ("H2", "cannot parse"), ("A", "cannot parse")])
def test_invalid_types_rejected(text, msg):
    with pytest.raises(ValueError, match=msg):
        DynkinType.parse(text)


def test_d3_is_a3():
    assert DynkinType.parse("D3") == DynkinType("A", 3)
    assert root_system("D3") is root_system("A3")


# --- reflections ------------------------------------------------------------------

def test_reflection_negates_own_root():
    rs = root_system("B3")
    for a in rs.roots:
        assert reflect(rs, a, a) == neg(a)


def test_a2_reflection_example():
    assert reflect(root_system("A2"), (1, 0), (0, 1)) == (1, 1)


def test_b2_reflection_matches_formula_and_closure():
    rs = root_system("B2")
    # alpha_1 long (length 2), alpha_2 short (length 1), (a1, a2) = -1
    assert rs.length2((1, 0)) == 2 and rs.length2((0, 1)) == 1
    assert reflect(rs, (1, 0), (0, 1)) == (1, 1)
    assert reflect(rs, (0, 1), (1, 0)) == (1, 2)
    assert (1, 1) in model_roots("B2") and (1, 2) in model_roots("B2")


def test_reflect_rejects_non_roots():
    rs = root_system("A2")
    with pytest.raises(InvalidRoot):
        reflect(rs, (1, 0), (2, 0))
    with pytest.raises(InvalidRoot):
        reflect(rs, (1, -1), (1, 0))


# --- orbits ---------------------------------------------------------------------

def test_orbit_examples():
    assert len(weyl_orbit(root_system("A2"), (1, 0))) == 6
    assert sorted(len(o) for o in weyl_orbits(root_system("B2"))) == [4, 4]
    assert sorted(len(o) for o in weyl_orbits(root_system("G2"))) == [6, 6]


@pytest.mark.parametrize("name", TYPES_8)
def test_orbits_are_length_classes(name):
    rs = root_system(name)
    orbits = weyl_orbits(rs)
    assert len(orbits) == (1 if rs.dynkin.simply_laced else 2)
    for orb in orbits:
        assert len({rs.length2(r) for r in orb}) == 1


def test_orbit_rejects_non_root():
    with pytest.raises(InvalidRoot):
        weyl_orbit(root_system("A2"), (2, 1))


# --- support and dominance ---------------------------------------------------------

def test_support_examples():
    assert support((1, 0)) == {1}
    assert support((1, 1)) == {1, 2}
    assert support(root_system("G2").highest_root) == {1, 2}
    assert support((0, -1, -1)) == {2, 3}
    with pytest.raises(InvalidRoot):
        support((0, 0))


def test_dominant_root_examples():
    assert dominant_roots(root_system("A2")) == [(1, 1)]
    rs = root_system("B2")
    doms = dominant_roots(rs)
    assert len(doms) == 2 and {rs.is_long(d) for d in doms} == {True, False}
    assert len(dominant_roots(root_system("E6"))) == 1


@pytest.mark.parametrize("name", TYPES_8)
def test_dominant_roots_have_full_support(name):
    rs = root_system(name)
    doms = dominant_roots(rs)
    assert len(doms) == (1 if rs.dynkin.simply_laced else 2)
    assert rs.highest_root in doms
    for mu in doms:
        assert support(mu) == set(range(1, rs.rank + 1))


# --- conjugation ----------------------------------------------------------------

def test_conjugating_identity():
    w = conjugating_weyl_element(root_system("A2"), (1, 0), (1, 0))
    assert w.word == ()


def test_conjugating_a2_example():
    rs = root_system("A2")
    w = conjugating_weyl_element(rs, (1, 0), (1, 1))
    assert w.word == (2,)
    assert w.apply((1, 0)) == (1, 1)


def test_conjugating_g2_different_lengths():
    assert conjugating_weyl_element(root_system("G2"), (1, 0), (0, 1)) is None


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["A3", "B3", "C3", "D4", "G2", "F4", "E6"]), st.data())
def test_conjugating_element_maps_gamma_to_beta(name, data):
    rs = root_system(name)
    g = data.draw(st.sampled_from(rs.roots))
    b = data.draw(st.sampled_from(rs.roots))
    w = conjugating_weyl_element(rs, g, b)
    if rs.length2(g) != rs.length2(b):
        assert w is None
    else:
        assert w is not None and w.apply(g) == b
        assert w.matrix == weyl_element(rs, w.word).matrix
        assert {w.apply(r) for r in rs.roots} == set(rs.roots)


def test_weyl_element_rejects_bad_index():
    with pytest.raises(ValueError):
        weyl_element(root_system("A2"), [3])


def test_root_serialisation():
    assert parse_root("[1, -2,0]") == (1, -2, 0)
    assert format_root((1, 0, -1)) == "[1,0,-1]"
    with pytest.raises(InvalidRoot):
        parse_root("1,2")
