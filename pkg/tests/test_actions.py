from __future__ import annotations

import itertools
from collections import Counter

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from gact import core, gf2, graphs, perm
from gact.actions import (
    ActionSpec,
    CodePerm,
    Deck,
    DiscreteLog,
    GraphIso,
    ModAdd,
    action_from_id,
    parse_set_element,
    restrict_to_orbit,
)
from gact.core import (
    EnumerationBoundExceeded,
    InvalidParameter,
    MembershipError,
    NotFreeError,
    UnsupportedOperation,
    check_action_axioms,
)
from gact.tape import RandomTape, TapeExhausted, enumerate_tapes

SMALL = ["modadd-2", "modadd-12", "dlog-11-2", "dlog-11-4", "dlog-13-3",
         "graphiso-1", "graphiso-2", "graphiso-3", "graphiso-4",
         "codeperm-2-1", "codeperm-3-2", "codeperm-4-2", "codeperm-raw-3-2",
         "deck-1", "deck-2", "deck-3"]


@pytest.mark.parametrize("aid", SMALL)
def test_axioms_hold_on_small_actions(aid):
    results = check_action_axioms(action_from_id(aid))
    failed = [r.check for r in results if not r.passed]
    assert not failed
    assert any(r.check == "declared-properties" for r in results)


@pytest.mark.parametrize("aid", ["graphiso-6", "codeperm-6-3", "deck-4", "dlog-1000003-2"])
def test_axioms_sampled_on_larger_actions(aid):
    results = check_action_axioms(action_from_id(aid), samples=60)
    assert all(r.passed for r in results)
    assert not all(r.exhaustive for r in results)


def _sample_triple(a, seed):
    t = RandomTape.from_seed(seed)
    return a.sample_group(t), a.sample_group(t), a.sample_set(t)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["graphiso-7", "codeperm-7-3", "codeperm-raw-5-2", "deck-5",
                        "dlog-2147483647-7"]),
       st.binary(min_size=1, max_size=16))
def test_compatibility_property_on_large_actions(aid, seed):
    a = action_from_id(aid)
    g1, g2, x = _sample_triple(a, seed)
    assert a.star(a.op(g1, g2), x) == a.star(g1, a.star(g2, x))
    assert a.star(a.identity, x) == x
    assert a.op(g1, a.inv(g1)) == a.identity
    assert a.decode_set(a.encode_set(x)) == x
    assert a.decode_group(a.encode_group(g1)) == g1


def test_properties_flags():
    assert ModAdd(12).properties.regular
    assert DiscreteLog(11, 2).properties.regular
    assert not GraphIso(3).properties.transitive
    assert not GraphIso(3).properties.free
    assert CodePerm(2, 2).properties.transitive and not CodePerm(2, 2).properties.free
    assert not CodePerm(4, 2).properties.transitive
    assert Deck(2).properties.transitive and not Deck(3).properties.transitive


def test_checked_operations_reject_non_members():
    a = ModAdd(12)
    with pytest.raises(MembershipError):
        core.act(a, 12, 0)
    with pytest.raises(MembershipError):
        core.act(a, 1, -1)
    with pytest.raises(MembershipError):
        core.compose(a, 1, "x")
    assert core.act(a, 5, 9) == 2
    assert core.verify_witness(a, 5, 7, 2)
    assert not core.verify_witness(a, 4, 7, 2)


def test_canonical_unsupported_without_unique_representation():
    raw = action_from_id("codeperm-raw-3-2")
    x = next(iter(raw.iter_set()))
    with pytest.raises(UnsupportedOperation):
        core.canonical(raw, x)
    rref = action_from_id("codeperm-3-2")
    assert core.canonical(rref, rref.parse_set("110/011")) == rref.encode_set(rref.parse_set("101/011"))


def test_invalid_parameters():
    for bad in ("modadd-1", "dlog-12-5", "dlog-11-11", "codeperm-2-3", "graphiso-x", "foo-3"):
        with pytest.raises(InvalidParameter):
            action_from_id(bad)


def test_action_spec_roundtrip():
    for aid in ["modadd-12", "dlog-11-2", "graphiso-3", "codeperm-4-2", "codeperm-raw-4-2", "deck-3"]:
        spec = ActionSpec.from_id(aid)
        assert spec.action_id == aid
        assert ActionSpec.from_config(spec.to_config()) == spec
        assert action_from_id(aid).action_id == aid


def test_enumeration_bound_enforced():
    a = GraphIso(6)
    with pytest.raises(EnumerationBoundExceeded):
        a.orbit(0, bound=100)


# graph isomorphism invariants

@settings(max_examples=150)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    st.just(n), st.permutations(range(n)), st.integers(0, (1 << graphs.n_edges(n)) - 1))))
def test_relabelling_preserves_edge_count_and_degrees(case):
    n, p, mask = case
    a = GraphIso(n)
    img = a.star(tuple(p), mask)
    assert graphs.edge_count(img) == graphs.edge_count(mask)
    assert sorted(graphs.degrees(n, img)) == sorted(graphs.degrees(n, mask))


def test_graph_orbits_match_brute_canonical_form():
    a = GraphIso(4)
    for x in range(64):
        assert {graphs.brute_canonical(4, y) for y in a.orbit(x)} == {graphs.brute_canonical(4, x)}


def test_orbit_sizes_follow_orbit_stabiliser():
    a = GraphIso(4)
    for x in range(64):
        stab = sum(1 for g in a.iter_group() if a.star(g, x) == x)
        assert len(a.orbit(x)) * stab == 24


# code equivalence invariants

@settings(max_examples=100, deadline=None)
@given(st.binary(min_size=4, max_size=8))
def test_code_action_preserves_weights_and_dimension(seed):
    for a in (CodePerm(5, 2), CodePerm(5, 2, raw=True)):
        t = RandomTape.from_seed(seed)
        g, x = a.sample_group(t), a.sample_set(t)
        y = a.star(g, x)
        assert gf2.rank(y) == gf2.rank(x) == a.k
        assert gf2.weight_enumerator(y, a.n) == gf2.weight_enumerator(x, a.n)


def test_codeperm_gl_factor_only_matters_in_raw_mode():
    rref, raw = CodePerm(4, 2), CodePerm(4, 2, raw=True)
    x = rref.parse_set("1100/0011")
    s = (0b11, 0b01)
    e = perm.identity(4)
    assert rref.star((s, e), x) == x
    assert raw.star((s, e), x) == gf2.matmul(s, x, 4) != x


# deck invariants

def test_deck_of_relabelled_graph_is_in_the_same_orbit():
    d = Deck(3)
    g = GraphIso(3)
    for mask in range(8):
        for p in perm.all_perms(3):
            assert d.same_orbit(d.deck_of(mask), d.deck_of(g.star(p, mask)))


def test_deck_same_orbit_agrees_with_brute_force():
    d = Deck(3)
    decks = [d.deck_of(m) for m in range(8)]
    for x, y in itertools.product(decks, repeat=2):
        assert d.same_orbit(x, y) == (x in Deck.orbit(d, y))


def test_deck_witness_search_agrees_with_action():
    d = Deck(4)
    t = RandomTape.from_seed(b"deck")
    for _ in range(20):
        g, y = d.sample_group(t), d.sample_set(t)
        x = d.star(g, y)
        sol = d.search_witness(x, y)
        assert sol.found and d.star(sol.witness, y) == x


def test_deck_literals():
    d = Deck(3)
    assert d.parse_set("deck:triangle") == d.deck_of(7)
    with pytest.raises(ValueError):
        d.parse_set("triangle")


# discrete logarithm

def test_dlog_set_is_generated_subgroup():
    a = DiscreteLog(11, 4)  # 4 has order 5 mod 11
    assert a.group_order == 5 == sympy.n_order(4, 11)
    assert sorted(a.iter_set()) == sorted({pow(4, e, 11) for e in range(5)})


@settings(max_examples=50)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_dlog_witness_search_matches_sympy(e1, e2):
    p, gen = 1000003, 2
    a = DiscreteLog(p, gen)
    x, y = pow(gen, e1, p), pow(gen, e2, p)
    sol = a.search_witness(x, y)
    assert sol.found and a.star(sol.witness, y) == x
    expect = (sympy.discrete_log(p, x, gen) - sympy.discrete_log(p, y, gen)) % a.group_order
    assert sol.witness == expect


# orbit restriction

def test_restriction_to_an_orbit_is_regular():
    d = DiscreteLog(11, 2)
    r = restrict_to_orbit(d, 1)
    assert r.properties.regular
    assert all(c.passed for c in check_action_axioms(r))
    with pytest.raises(NotFreeError):
        restrict_to_orbit(GraphIso(3), 0)


# literals

def test_parse_set_element_forms():
    g = GraphIso(3)
    assert parse_set_element(g, "triangle") == 7
    assert parse_set_element(g, "hex:" + g.encode_set(5).hex()) == 5
    assert parse_set_element(ModAdd(12), "11") == 11
    for bad in ("12", "x", "hex:zz", "hex:0c"):
        with pytest.raises(ValueError):
            parse_set_element(ModAdd(12), bad)


def test_sampling_is_uniform_over_enumerated_tapes():
    a = CodePerm(3, 2)
    counts = Counter()
    for t in enumerate_tapes(a.sample_bits):
        try:
            counts[a.sample_group(t)] += 1
        except TapeExhausted:
            pass
    assert len(counts) == a.group_order and len(set(counts.values())) == 1
