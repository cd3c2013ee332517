"""Regret-equal (REDI), min-regret-sum (MRS), egalitarian and min-cost
regret-equal solvers, plus enumeration-backed optimisers for every measure.

Unless stated otherwise the solvers expect a reduced instance; use
:func:`solve` to run any of them on an arbitrary instance.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .fairness import Measure, ScoreReport, score, select_best
from .gs import Matching, lift_matching, man_oriented_gs, reduce_rural_hospitals, woman_oriented_gs
from .instance import Instance, delete_pairs, truncate_men, truncate_women
from .rotations import (
    RotationPoset,
    build_poset,
    enumerate_all,
    enumerate_reduced,
    is_closed,
    matching_from_closed_subset,
)


def _check_deadline(deadline: Optional[float]) -> None:
    if deadline is not None and time.perf_counter() > deadline:
        raise TimeoutError("solver deadline exceeded")


def column_grid(a0: int, b0: int, n: int) -> list[list[tuple[int, int]]]:
    """Candidate degree pairs of a regret-equal matching, column by column.

    Column k (1-based) holds man-degree ``a0 + k - 1`` and women's degrees
    from ``b0`` down to ``max(a0 - d0 + k, 1)``, where ``d0 = b0 - a0``.
    """
    if not a0 < b0:
        raise ValueError("the grid is only defined for a0 < b0")
    d0 = b0 - a0
    cols = []
    for k in range(1, min(2 * d0, n - a0 + 1) + 1):
        a = a0 + k - 1
        cols.append([(a, b) for b in range(b0, max(a0 - d0 + k, 1) - 1, -1)])
    return cols


class _State:
    """Matching reached from M_0 by eliminating the closed set ``q``, with
    rank histograms so both degrees update in time proportional to the
    eliminated pairs."""

    __slots__ = ("ctx", "mp", "wp", "mh", "wh", "du", "dw", "q")

    def copy(self) -> "_State":
        s = _State.__new__(_State)
        s.ctx = self.ctx
        s.mp = self.mp[:]
        s.wp = self.wp[:]
        s.mh = self.mh[:]
        s.wh = self.wh[:]
        s.du = self.du
        s.dw = self.dw
        s.q = set(self.q)
        return s

    @property
    def r(self) -> int:
        return abs(self.du - self.dw)

    def eliminate(self, rotation_ids) -> None:
        ctx = self.ctx
        mr, wr = ctx.man_rank, ctx.woman_rank
        mp, wp, mh, wh = self.mp, self.wp, self.mh, self.wh
        du = self.du
        for r in rotation_ids:
            ctx.work += len(ctx.moves[r])
            for m, old, new in ctx.moves[r]:
                ro, rn = mr[m][old], mr[m][new]
                mh[ro] -= 1
                mh[rn] += 1
                if rn > du:
                    du = rn
                wrk = wr[new]
                wh[wrk[wp[new]]] -= 1
                wh[wrk[m]] += 1
                wp[new] = m
                mp[m] = new
            self.q.add(r)
        self.du = du
        dw = self.dw
        while dw > 0 and wh[dw] == 0:
            dw -= 1
        self.dw = dw

    def snapshot(self) -> "_Best":
        return _Best(tuple(self.mp), self.du, self.dw)


@dataclass(frozen=True)
class _Best:
    mp: tuple
    du: int
    dw: int

    @property
    def r(self) -> int:
        return abs(self.du - self.dw)


class _Context:
    def __init__(self, poset: RotationPoset):
        inst = poset.instance
        self.poset = poset
        self.man_rank = inst.man_rank
        self.woman_rank = inst.woman_rank
        self.moves = [list(r.moves()) for r in poset.rotations]
        self.work = 0

    def initial(self, matching: Matching, q=()) -> _State:
        inst = self.poset.instance
        size = inst.max_rank + 2
        s = _State.__new__(_State)
        s.ctx = self
        s.mp = list(matching.man_partner)
        s.wp = list(matching.woman_partner)
        s.mh = [0] * size
        s.wh = [0] * size
        for m, w in enumerate(s.mp):
            s.mh[self.man_rank[m][w]] += 1
            s.wh[self.woman_rank[w][m]] += 1
        s.du = max((r for r in range(size) if s.mh[r]), default=0)
        s.dw = max((r for r in range(size) if s.wh[r]), default=0)
        s.q = set(q)
        return s

    def closure_minus(self, seeds, q) -> list[int]:
        preds = self.poset.preds
        out = set()
        todo = [r for r in seeds if r not in q]
        while todo:
            r = todo.pop()
            if r in out:
                continue
            out.add(r)
            todo.extend(p for p in preds[r] if p not in q and p not in out)
        return sorted(out)

    def worst_women_rotations(self, state: _State) -> list[int]:
        # rotations taking a rank-d_W woman away from her current partner
        b = state.dw
        pr = self.poset.pair_rotation
        wr = self.woman_rank
        out = []
        for w, m in enumerate(state.wp):
            if wr[w][m] == b:
                r = pr.get((m, w))
                if r is not None:
                    out.append(r)
        return out


@dataclass
class RediResult:
    matching: Matching
    d0: int
    pair_eliminations: int
    # one entry per column operation: (man degree, [(d_U, d_W), ...], start closed set)
    columns: list = field(default_factory=list)


def _redi_col(ctx: _Context, state: _State, best: _Best, trace: Optional[list]) -> _Best:
    a = state.du
    visited = []
    if trace is not None:
        trace.append((a, visited, frozenset(state.q)))
    while True:
        visited.append((state.du, state.dw))
        if state.r < best.r:
            best = state.snapshot()
        if state.du >= state.dw:
            return best
        b = state.dw
        q_new = ctx.closure_minus(ctx.worst_women_rotations(state), state.q)
        cand = state.copy()
        cand.eliminate(q_new)
        if cand.du > a or cand.dw == b:
            return best
        state = cand


def run_redi(
    inst: Instance,
    poset: Optional[RotationPoset] = None,
    deadline: Optional[float] = None,
) -> RediResult:
    """REDI with instrumentation: returns the matching, d_0, the number of
    rotation-pair eliminations performed and the per-column trace."""
    poset = build_poset(inst) if poset is None else poset
    ctx = _Context(poset)
    base = ctx.initial(poset.m0)
    d0 = abs(base.du - base.dw)
    columns: list = []

    def result(best: _Best) -> RediResult:
        return RediResult(Matching(best.mp, inst.n_women), d0, ctx.work, columns)

    best = base.snapshot()
    if base.du >= base.dw:
        return result(best)
    best = _redi_col(ctx, base.copy(), best, columns)
    if best.r == 0:
        return result(best)

    mz = poset.mz.man_partner
    pr = poset.pair_rotation
    mr = ctx.man_rank
    new_partner = [{m: new for m, _, new in mv} for mv in ctx.moves]
    # each man's walk only visits matchings M_0 / closure(rho) for the
    # rotations rho on his chain, so those states are cached per rotation and
    # a missing one is built by extending the previous state on the chain
    states: dict = {}

    for mi in range(inst.n_men):
        _check_deadline(deadline)
        state = base
        w = base.mp[mi]
        while w != mz[mi] and state.du < state.dw:
            rho = pr[(mi, w)]
            a = state.du
            nxt = states.get(rho)
            if nxt is None:
                nxt = state.copy()
                nxt.eliminate(ctx.closure_minus([rho], nxt.q))
                states[rho] = nxt
            state = nxt
            w = new_partner[rho][mi]
            if state.du > a and mr[mi][w] == state.du:
                best = _redi_col(ctx, state.copy(), best, columns)
                if best.r == 0:
                    return result(best)
    return result(best)


def redi(inst: Instance) -> Matching:
    """A regret-equal stable matching of a reduced instance."""
    return run_redi(inst).matching


def redi_col(
    inst: Instance,
    matching: Matching,
    q,
    best: Matching,
    poset: Optional[RotationPoset] = None,
) -> Matching:
    """Column operation from ``matching`` (reached by eliminating ``q``).

    Walks down the current man-degree column, returning whichever of
    ``best`` and the visited matchings has the smallest regret-equality
    score (``best`` wins ties).
    """
    poset = build_poset(inst) if poset is None else poset
    if not is_closed(poset, q) or matching_from_closed_subset(poset, q) != matching:
        raise ValueError("q must be the closed rotation set of the given matching")
    ctx = _Context(poset)
    rep = score(inst, best)
    out = _redi_col(
        ctx,
        ctx.initial(matching, q),
        _Best(best.man_partner, rep.man_degree, rep.woman_degree),
        None,
    )
    return Matching(out.mp, inst.n_women)


@dataclass
class MrsResult:
    matching: Matching
    iterations: int
    d_s: int


def run_mrs(inst: Instance, deadline: Optional[float] = None) -> MrsResult:
    m0 = man_oriented_gs(inst)
    mz = woman_oriented_gs(inst)
    best = m0
    best_rep = score(inst, m0)
    best_sum = best_rep.regret_sum
    a = best_rep.man_degree
    top = score(inst, mz).man_degree
    iterations = 0
    while a <= top and a + 1 < best_sum:
        _check_deadline(deadline)
        cand = woman_oriented_gs(truncate_men(inst, a))
        rep = score(inst, cand)
        if rep.regret_sum < best_sum:
            best, best_sum = cand, rep.regret_sum
        a += 1
        iterations += 1
    return MrsResult(best, iterations, top - best_rep.man_degree)


def mrs(inst: Instance) -> Matching:
    """A min-regret-sum stable matching of a reduced instance."""
    return run_mrs(inst).matching


def rotation_cost_change(poset: RotationPoset) -> list[int]:
    """Change in c(M) caused by eliminating each rotation."""
    inst = poset.instance
    out = []
    for rho in poset.rotations:
        delta = 0
        q = len(rho.pairs)
        for i, (m, w, new) in enumerate(rho.moves()):
            delta += inst.man_rank[m][new] - inst.man_rank[m][w]
            prev_man = rho.pairs[(i + 1) % q][0]
            delta += inst.woman_rank[new][m] - inst.woman_rank[new][prev_man]
        out.append(delta)
    return out


def max_weight_closure(preds, weights) -> frozenset:
    """Maximum-weight predecessor-closed set via one s-t minimum cut."""
    k = len(weights)
    if k == 0:
        return frozenset()
    source, sink = k, k + 1
    inf = sum(abs(w) for w in weights) + 1
    rows, cols, caps = [], [], []
    for r, w in enumerate(weights):
        if w > 0:
            rows.append(source)
            cols.append(r)
            caps.append(w)
        elif w < 0:
            rows.append(r)
            cols.append(sink)
            caps.append(-w)
        for p in preds[r]:
            rows.append(r)
            cols.append(p)
            caps.append(inf)
    if not caps:
        return frozenset()
    cap = csr_matrix(
        (np.array(caps, dtype=np.int32), (np.array(rows), np.array(cols))), shape=(k + 2, k + 2)
    )
    cap.sum_duplicates()
    flow = maximum_flow(cap, source, sink).flow
    residual = (cap - flow).tocsr()
    residual.data[residual.data < 0] = 0
    residual.eliminate_zeros()
    reach = breadth_first_order(residual, source, directed=True, return_predecessors=False)
    return frozenset(int(v) for v in reach if v < k)


def egalitarian(inst: Instance, poset: Optional[RotationPoset] = None) -> Matching:
    """A minimum-cost stable matching (costs are the ranks stored in ``inst``)."""
    poset = build_poset(inst) if poset is None else poset
    gain = [-d for d in rotation_cost_change(poset)]
    return matching_from_closed_subset(poset, max_weight_closure(poset.preds, gain))


def _force(inst: Instance, man: int, w_fixed: int, woman: int, m_fixed: int) -> Instance:
    # pin man to w_fixed and woman to m_fixed; every pair that could only
    # survive in a matching blocked by one of the pins is deleted
    mr, wr = inst.man_rank, inst.woman_rank
    gone = set()
    for w2 in inst.men_prefs[man]:
        if mr[man][w2] < mr[man][w_fixed]:
            for m2 in inst.women_prefs[w2]:
                if wr[w2][m2] > wr[w2][man]:
                    gone.add((m2, w2))
    for m2 in inst.women_prefs[woman]:
        if wr[woman][m2] < wr[woman][m_fixed]:
            for w2 in inst.men_prefs[m2]:
                if mr[m2][w2] > mr[m2][woman]:
                    gone.add((m2, w2))
    gone.update((man, w2) for w2 in inst.men_prefs[man] if w2 != w_fixed)
    gone.update((m2, woman) for m2 in inst.women_prefs[woman] if m2 != m_fixed)
    return delete_pairs(inst, gone)


def _perfect(matching: Matching) -> bool:
    return all(w is not None for w in matching.man_partner) and all(
        m is not None for m in matching.woman_partner
    )


def min_cost_regret_equal(inst: Instance) -> Matching:
    """Cheapest matching among the regret-equal stable matchings.

    For every degree pair (a, b) with |a - b| equal to the optimal
    regret-equality score, lists are truncated at a (men) and b (women);
    then a witness man is pinned to his a-th choice and a witness woman to
    her b-th choice, and an egalitarian matching of what remains is taken.
    """
    base = redi(inst)
    best_cost = score(inst, base).cost
    r_star = score(inst, base).regret_equality
    best = base
    top = inst.max_rank
    choice_m = [{r: w for w, r in t.items()} for t in inst.man_rank]
    choice_w = [{r: m for m, r in t.items()} for t in inst.woman_rank]

    pairs = sorted({(a, a + s) for a in range(1, top + 1) for s in (-r_star, r_star)})
    for a, b in pairs:
        if not 1 <= b <= top:
            continue
        trunc = truncate_women(truncate_men(inst, a), b)
        if not _perfect(man_oriented_gs(trunc)):
            continue
        poset = build_poset(trunc)
        if score(inst, egalitarian(trunc, poset)).cost >= best_cost:
            continue
        men = [(m, choice_m[m][a]) for m in range(inst.n_men)
               if a in choice_m[m] and poset.is_stable_pair(m, choice_m[m][a])]
        women = [(w, choice_w[w][b]) for w in range(inst.n_women)
                 if b in choice_w[w] and poset.is_stable_pair(choice_w[w][b], w)]
        for man, w_fixed in men:
            for woman, m_fixed in women:
                if (man == m_fixed) != (woman == w_fixed):
                    continue
                forced = _force(trunc, man, w_fixed, woman, m_fixed)
                if not _perfect(man_oriented_gs(forced)):
                    continue
                cand = egalitarian(forced)
                rep = score(inst, cand)
                if rep.cost < best_cost:
                    best, best_cost = cand, rep.cost
    return best


def optimal_by_enumeration(inst: Instance, measure, tiebreak=None) -> tuple[int, Matching]:
    """Exact optimum of any measure by folding over all stable matchings.

    Works on unreduced instances too; the returned matching is on ``inst``.
    """
    measure = Measure(measure)
    tiebreak = measure if tiebreak is None else Measure(tiebreak)
    reduced, report = reduce_rural_hospitals(inst)
    matching, rep = select_best(enumerate_all(reduced), measure, tiebreak, reduced)
    if not report.empty:
        matching = lift_matching(reduced, matching, inst)
    return rep[measure], matching


def enumeration_fold(poset: RotationPoset, deadline: Optional[float] = None) -> list[ScoreReport]:
    """Scores of every stable matching of a reduced instance, in stream order."""
    inst = poset.instance
    out = []
    for i, matching in enumerate(enumerate_reduced(poset)):
        if i % 64 == 0:
            _check_deadline(deadline)
        out.append(score(inst, matching))
    return out


ALGORITHMS: dict[str, Callable[[Instance], Matching]] = {
    "redi": redi,
    "mrs": mrs,
    "egalitarian": egalitarian,
    "min-cost-regret-equal": min_cost_regret_equal,
}


def resolve_algorithm(name: str) -> Callable[[Instance], Matching]:
    """Map a solver name (``redi``, ``optimal:<measure>[:<tiebreak>]`` ...) to a callable."""
    if name in ALGORITHMS:
        return ALGORITHMS[name]
    if name.startswith("optimal:"):
        parts = name.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad solver name {name!r}")
        measure = Measure(parts[1])
        tiebreak = Measure(parts[2]) if len(parts) == 3 else None
        return lambda inst: optimal_by_enumeration(inst, measure, tiebreak)[1]
    raise ValueError(f"unknown solver {name!r}")


def solve(inst: Instance, algorithm: str) -> tuple[Matching, Optional[ScoreReport]]:
    """Reduce, run the named solver, and lift the result back to ``inst``.

    The score report is computed on the reduced instance (``None`` when
    every agent was removed).
    """
    fn = resolve_algorithm(algorithm)
    reduced, report = reduce_rural_hospitals(inst)
    if reduced.n_men == 0:
        return Matching([None] * inst.n_men, inst.n_women), None
    matching = fn(reduced)
    rep = score(reduced, matching)
    if not report.empty:
        matching = lift_matching(reduced, matching, inst)
    return matching, rep
