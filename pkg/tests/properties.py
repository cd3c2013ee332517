"""Structural properties checked both by hypothesis tests and by the
acceptance suite. Each check raises AssertionError on a violation."""

from __future__ import annotations

import random

from stablefair.fairness import score
from stablefair.gs import Matching, man_oriented_gs, reduce_rural_hospitals, woman_oriented_gs
from stablefair.instance import Instance, truncate_men
from stablefair.rotations import build_poset, closure, enumerate_all, matching_from_closed_subset
from stablefair.solvers import min_cost_regret_equal, run_mrs

from oracles import closed_subsets_bruteforce, stable_perfect_factorial


def _perfect(mp) -> bool:
    return all(w is not None for w in mp)


def check_truncation_equivalence(inst: Instance) -> None:
    """For every a: perfect stable matchings of the men-truncated instance
    are exactly the stable matchings of the original with d_U <= a. Both
    sides come from the factorial oracle and the left side is also
    enumerated through the rotation poset. ``inst`` must be reduced."""
    stable = [Matching(mp, inst.n_women) for mp in stable_perfect_factorial(inst)]
    assert {m.man_partner for m in enumerate_all(inst)} == {m.man_partner for m in stable}
    reps = {m: score(inst, m) for m in stable}
    for a in range(1, inst.n + 1):
        t = truncate_men(inst, a)
        lhs = {m.man_partner for m in enumerate_all(t) if _perfect(m.man_partner)}
        rhs = {m.man_partner for m, r in reps.items() if r.man_degree <= a}
        assert lhs == stable_perfect_factorial(t) == rhs, f"a={a}"


def _men_ranks(inst, m):
    return [inst.man_rank[i][w] for i, w in enumerate(m.man_partner)]


def check_degree_construction(inst: Instance, rng: random.Random, samples: int = 20) -> int:
    """Sample pairs (M, M') of stable matchings where every man is no better
    off in M' and d_U(M) = d_U(M'); eliminating from M the closure of the
    rotations holding a woman ranked in (d_W(M'), d_W(M)] must give a
    matching with the degree pair of M'. Returns the number of pairs checked."""
    poset = build_poset(inst)
    table = [(s, matching_from_closed_subset(poset, s)) for s in closed_subsets_bruteforce(poset)]
    info = [(s, m, score(inst, m), _men_ranks(inst, m)) for s, m in table]
    pairs = [
        (x, y)
        for x in info
        for y in info
        if x[2].man_degree == y[2].man_degree and all(a <= b for a, b in zip(x[3], y[3]))
    ]
    rng.shuffle(pairs)
    checked = 0
    for (q, m, rep, _), (_, _, rep2, _) in pairs[:samples]:
        hi, lo = rep.woman_degree, rep2.woman_degree
        picked = {
            rho.id
            for rho in poset.rotations
            if any(lo < inst.woman_rank[w][mm] <= hi for mm, w in rho.pairs)
        }
        r_d = closure(poset, picked - set(q)) - set(q)
        m2 = matching_from_closed_subset(poset, set(q) | r_d)
        rep3 = score(inst, m2)
        assert (rep3.man_degree, rep3.woman_degree) == (rep2.man_degree, rep2.woman_degree)
        checked += 1
    return checked


def check_rotation_monotonicity(inst: Instance) -> None:
    poset = build_poset(inst)
    cur = poset.m0
    for rho in poset.rotations:
        for m, old, new in rho.moves():
            assert inst.man_rank[m][new] > inst.man_rank[m][old]
            assert inst.woman_rank[new][m] < inst.woman_rank[new][cur.woman_partner[new]]
        mp = list(cur.man_partner)
        for m, _, new in rho.moves():
            mp[m] = new
        cur = Matching(mp, inst.n_women)
    assert cur == poset.mz


def check_rural_hospitals(inst: Instance) -> None:
    m0, mz = man_oriented_gs(inst), woman_oriented_gs(inst)
    men = lambda m: {i for i, w in enumerate(m.man_partner) if w is not None}
    women = lambda m: {j for j, i in enumerate(m.woman_partner) if i is not None}
    assert men(m0) == men(mz) and women(m0) == women(mz)


def check_mrs_bound(inst: Instance) -> None:
    reduced, _ = reduce_rural_hospitals(inst)
    if reduced.n_men == 0:
        return
    res = run_mrs(reduced)
    assert res.iterations <= res.d_s + 1


def check_min_cost_regret_equal(inst: Instance) -> None:
    reps = [score(inst, m) for m in enumerate_all(inst)]
    r_star = min(r.regret_equality for r in reps)
    want = min(r.cost for r in reps if r.regret_equality == r_star)
    got = score(inst, min_cost_regret_equal(inst))
    assert (got.regret_equality, got.cost) == (r_star, want)
