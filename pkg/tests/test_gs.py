import pytest
from hypothesis import given, settings

from helpers import mutual_first, smi_instances
from oracles import stable_matchings_bruteforce
from stablefair.gs import (
    Matching,
    MatchingError,
    format_matching,
    is_stable,
    lift_matching,
    man_oriented_gs,
    parse_matching,
    reduce_rural_hospitals,
    woman_oriented_gs,
)
from stablefair.instance import generate_random, parse_instance


def matched_agents(matching):
    men = {m for m, w in enumerate(matching.man_partner) if w is not None}
    women = {w for w, m in enumerate(matching.woman_partner) if m is not None}
    return men, women


def test_mutual_first_choices():
    inst = mutual_first(5)
    ident = tuple(range(5))
    assert man_oriented_gs(inst).man_partner == ident
    assert woman_oriented_gs(inst).man_partner == ident


def test_two_by_two(two):
    assert man_oriented_gs(two).pairs == {(0, 1), (1, 0)}
    assert woman_oriented_gs(two).pairs == {(0, 1), (1, 0)}


def test_blocking_pairs(two):
    m = Matching([0, 1], 2)
    assert is_stable(two, m) == [(1, 0)]
    assert is_stable(two, man_oriented_gs(two)) == []


def test_empty_matching_on_singleton():
    inst = parse_instance("1\n1\n1\n1")
    assert is_stable(inst, Matching([None], 1)) == [(0, 0)]


def test_unacceptable_pair_rejected():
    inst = parse_instance("2\n2\n1\n2\n1\n2\n")
    with pytest.raises(MatchingError):
        is_stable(inst, Matching([1, 0], 2))


def test_double_match_rejected():
    with pytest.raises(MatchingError):
        Matching([0, 0], 2)
    with pytest.raises(MatchingError):
        Matching.from_pairs([(0, 0), (0, 1)], 2, 2)


def test_format_parse_matching():
    m = Matching([2, None, 0], 3)
    text = format_matching(m)
    assert text == "1 3\n3 1\n"
    assert parse_matching(text, 3, 3) == m
    with pytest.raises(MatchingError):
        parse_matching("1\n", 3, 3)


@pytest.mark.parametrize("seed", range(30))
def test_gs_stable_and_optimal_on_corpus(seed):
    inst = generate_random(8, seed)
    m0, mz = man_oriented_gs(inst), woman_oriented_gs(inst)
    assert is_stable(inst, m0) == [] and is_stable(inst, mz) == []
    for w in range(8):
        assert inst.woman_rank[w][mz.woman_partner[w]] <= inst.woman_rank[w][m0.woman_partner[w]]
    for m in range(8):
        assert inst.man_rank[m][m0.man_partner[m]] <= inst.man_rank[m][mz.man_partner[m]]


@given(smi_instances())
def test_gs_against_bruteforce(inst):
    stable = stable_matchings_bruteforce(inst)
    m0, mz = man_oriented_gs(inst), woman_oriented_gs(inst)
    assert m0.man_partner in stable and mz.man_partner in stable
    # man-optimal: every man does at least as well as in any stable matching
    for mp in stable:
        for m, w in enumerate(mp):
            if w is not None:
                assert inst.man_rank[m][m0.man_partner[m]] <= inst.man_rank[m][w]


@given(smi_instances())
def test_rural_hospitals(inst):
    m0, mz = man_oriented_gs(inst), woman_oriented_gs(inst)
    assert matched_agents(m0) == matched_agents(mz)
    for mp in stable_matchings_bruteforce(inst):
        assert matched_agents(Matching(mp, inst.n_women)) == matched_agents(m0)


def test_reduction_on_complete_instance():
    inst = generate_random(6, 0)
    reduced, report = reduce_rural_hospitals(inst)
    assert reduced is inst and report.empty


def test_reduction_with_empty_lists():
    inst = parse_instance("1\n1\n-\n-\n")
    reduced, report = reduce_rural_hospitals(inst)
    assert reduced.n_men == 0 and reduced.n_women == 0
    assert report.removed_men == (0,) and report.removed_women == (0,)


@given(smi_instances())
def test_reduction_lifts_back(inst):
    reduced, _ = reduce_rural_hospitals(inst)
    m0r = man_oriented_gs(reduced)
    assert all(w is not None for w in m0r.man_partner)
    assert lift_matching(reduced, m0r, inst) == man_oriented_gs(inst)


@settings(max_examples=300)
@given(smi_instances())
def test_reduction_preserves_stable_set(inst):
    reduced, report = reduce_rural_hospitals(inst)
    lifted = {
        lift_matching(reduced, Matching(mp, reduced.n_women), inst).man_partner
        for mp in stable_matchings_bruteforce(reduced)
    }
    assert lifted == stable_matchings_bruteforce(inst)
    for mp in stable_matchings_bruteforce(reduced):
        assert all(w is not None for w in mp)
