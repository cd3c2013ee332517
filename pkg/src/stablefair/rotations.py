"""Rotations, the rotation poset, closures and enumeration of stable matchings.

All functions here expect a reduced instance (everyone matched in every
stable matching) except :func:`enumerate_all`, which reduces on its own.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .gs import Matching, lift_matching, man_oriented_gs, reduce_rural_hospitals, woman_oriented_gs
from .instance import Instance


@dataclass(frozen=True)
class Rotation:
    """Cyclic sequence of pairs ``(m_i, w_i)``; eliminating it gives each
    ``m_i`` the woman ``w_{i+1}``.

    Equality ignores ``id`` so rotations found independently compare equal.
    """

    pairs: tuple
    id: int = field(default=-1, compare=False)

    @classmethod
    def canonical(cls, pairs, id: int = -1) -> "Rotation":
        pairs = list(pairs)
        k = min(range(len(pairs)), key=lambda i: pairs[i][0])
        return cls(tuple(pairs[k:] + pairs[:k]), id)

    def __len__(self):
        return len(self.pairs)

    @property
    def men(self) -> tuple:
        return tuple(m for m, _ in self.pairs)

    @property
    def women(self) -> tuple:
        return tuple(w for _, w in self.pairs)

    def moves(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(man, old woman, new woman)`` for every man in the cycle."""
        q = len(self.pairs)
        for i, (m, w) in enumerate(self.pairs):
            yield m, w, self.pairs[(i + 1) % q][1]


class RotationError(ValueError):
    pass


def _require_perfect(matching: Matching, what: str) -> None:
    if any(w is None for w in matching.man_partner) or any(
        m is None for m in matching.woman_partner
    ):
        raise RotationError(f"{what}: instance must be reduced so that everyone is matched")


def next_successor(inst: Instance, matching: Matching, m: int) -> Optional[int]:
    """s(m, M): first woman after M(m) on m's list who prefers m to her partner."""
    cur = matching.man_partner[m]
    if cur is None:
        raise RotationError(f"man {m + 1} is unmatched")
    plist = inst.men_prefs[m]
    wp = matching.woman_partner
    for w in plist[plist.index(cur) + 1 :]:
        other = wp[w]
        if other is None or inst.woman_rank[w][m] < inst.woman_rank[w][other]:
            return w
    return None


def find_exposed_rotations(inst: Instance, matching: Matching) -> list[Rotation]:
    """Every rotation whose pairs all lie in ``matching`` (cycles of the
    man -> M(s(m, M)) map)."""
    n = inst.n_men
    nxt: list[Optional[int]] = [None] * n
    for m in range(n):
        if matching.man_partner[m] is None:
            continue
        s = next_successor(inst, matching, m)
        if s is not None:
            nxt[m] = matching.woman_partner[s]
    state = [0] * n  # 0 unseen, 1 on current path, 2 finished
    found = []
    for start in range(n):
        path = []
        m = start
        while m is not None and state[m] == 0:
            state[m] = 1
            path.append(m)
            m = nxt[m]
        if m is not None and state[m] == 1:
            cycle = path[path.index(m) :]
            found.append(
                Rotation.canonical([(x, matching.man_partner[x]) for x in cycle], len(found))
            )
        for x in path:
            state[x] = 2
    return found


def eliminate(matching: Matching, rho: Rotation) -> Matching:
    for pair in rho.pairs:
        if pair not in matching:
            raise RotationError(f"rotation is not exposed: pair {pair} missing")
    mp = list(matching.man_partner)
    for m, _, new in rho.moves():
        mp[m] = new
    return Matching(mp, len(matching.woman_partner))


def _discover(inst: Instance):
    """Walk from M_0 to M_z eliminating rotations as their cycles close.

    Stack-based search: the top man's successor pointer only moves forward,
    so the whole walk is linear in the total list length. Returns
    ``(m0, mz, rotations)`` with rotations in elimination order.
    """
    m0 = man_oriented_gs(inst)
    mz = woman_oriented_gs(inst)
    _require_perfect(m0, "rotation search")
    prefs = inst.men_prefs
    wrank = inst.woman_rank
    mp = list(m0.man_partner)
    wp = list(m0.woman_partner)
    target = mz.man_partner
    ptr = [prefs[m].index(mp[m]) + 1 for m in range(inst.n_men)]
    on_stack = [False] * inst.n_men
    stack: list[int] = []
    rotations: list[Rotation] = []

    def successor(m):
        plist = prefs[m]
        i = ptr[m]
        while True:
            w = plist[i]  # exists while m is above his M_z partner
            wr = wrank[w]
            if wr[m] < wr[wp[w]]:
                ptr[m] = i
                return w
            i += 1

    for start in range(inst.n_men):
        while mp[start] != target[start]:
            stack.append(start)
            on_stack[start] = True
            while stack:
                top = stack[-1]
                nxt = wp[successor(top)]
                if not on_stack[nxt]:
                    stack.append(nxt)
                    on_stack[nxt] = True
                    continue
                cycle = []
                while True:
                    x = stack.pop()
                    on_stack[x] = False
                    cycle.append(x)
                    if x == nxt:
                        break
                cycle.reverse()
                old = [mp[x] for x in cycle]
                q = len(cycle)
                for i, x in enumerate(cycle):
                    w = old[(i + 1) % q]
                    mp[x] = w
                    wp[w] = x
                    ptr[x] += 1
                rotations.append(
                    Rotation.canonical(list(zip(cycle, old)), len(rotations))
                )
    return m0, mz, rotations


def all_rotations(inst: Instance) -> list[Rotation]:
    """The complete rotation set, ids in a valid elimination order."""
    return _discover(inst)[2]


@dataclass
class RotationPoset:
    """Rotations of a reduced instance with their precedence edges.

    ``preds[r]`` holds the direct predecessors of rotation ``r`` (not the
    transitive closure). Ids are a topological order.
    """

    instance: Instance
    m0: Matching
    mz: Matching
    rotations: tuple
    preds: tuple
    succs: tuple
    pair_rotation: dict  # (m, w) -> id of the rotation that contains the pair

    def __len__(self):
        return len(self.rotations)

    @property
    def order(self) -> range:
        return range(len(self.rotations))

    def edges(self) -> Iterator[tuple[int, int]]:
        for r, ps in enumerate(self.preds):
            for p in sorted(ps):
                yield p, r

    def is_stable_pair(self, m: int, w: int) -> bool:
        return (m, w) in self.pair_rotation or self.mz.man_partner[m] == w


def build_poset(inst: Instance, rotations: Optional[list[Rotation]] = None) -> RotationPoset:
    """Rotation poset from the two classical edge rules.

    Rule 1: the rotation that gives m the woman w precedes the rotation that
    takes her away again. Rule 2: if rotation rho moves m past w'' (strictly
    between his old and new partner), the rotation that lifts w'' from a man
    she ranks below m to one she ranks above m precedes rho.
    """
    m0, mz, found = _discover(inst)
    if rotations is not None and set(rotations) != set(found):
        raise RotationError("given rotations are not the rotation set of this instance")
    rotations = found
    pair_rotation = {}
    producer = {}
    # partner history of each woman: [(rank of partner, rotation that brought him)]
    history = [[(inst.woman_rank[w][m0.woman_partner[w]], None)] for w in range(inst.n_women)]
    for rho in rotations:
        for m, old, new in rho.moves():
            pair_rotation[(m, old)] = rho.id
            producer[(m, new)] = rho.id
            history[new].append((inst.woman_rank[new][m], rho.id))
    for h in history:
        h.sort(key=lambda t: -t[0])

    preds: list[set] = [set() for _ in rotations]
    for rho in rotations:
        r = rho.id
        for m, old, new in rho.moves():
            p = producer.get((m, old))
            if p is not None:
                preds[r].add(p)
            plist = inst.men_prefs[m]
            i, j = plist.index(old), plist.index(new)
            for w2 in plist[i + 1 : j]:
                rank_m = inst.woman_rank[w2][m]
                h = history[w2]
                if h[0][0] < rank_m:
                    continue
                for rank_p, lifter in h[1:]:
                    if rank_p < rank_m:
                        preds[r].add(lifter)
                        break
    succs: list[set] = [set() for _ in rotations]
    for r, ps in enumerate(preds):
        ps.discard(r)
        for p in ps:
            succs[p].add(r)
    return RotationPoset(
        instance=inst,
        m0=m0,
        mz=mz,
        rotations=tuple(rotations),
        preds=tuple(frozenset(p) for p in preds),
        succs=tuple(frozenset(s) for s in succs),
        pair_rotation=pair_rotation,
    )


def closure(poset: RotationPoset, subset: Iterable[int]) -> frozenset:
    """Smallest predecessor-closed superset of ``subset`` (rotation ids)."""
    seen = set()
    todo = [r for r in subset if r is not None]
    while todo:
        r = todo.pop()
        if r in seen:
            continue
        seen.add(r)
        todo.extend(p for p in poset.preds[r] if p not in seen)
    return frozenset(seen)


def is_closed(poset: RotationPoset, subset: Iterable[int]) -> bool:
    s = set(subset)
    return all(poset.preds[r] <= s for r in s)


def rotations_with_woman_rank(poset: RotationPoset, matching: Matching, j: int) -> frozenset:
    """Rotations that move a woman away from a partner she ranks ``j``.

    For each woman whose partner in ``matching`` has rank ``j``, this is the
    rotation containing that very pair (none if the pair is in M_z).
    """
    inst = poset.instance
    out = set()
    for w, m in enumerate(matching.woman_partner):
        if m is not None and inst.woman_rank[w][m] == j:
            r = poset.pair_rotation.get((m, w))
            if r is not None:
                out.add(r)
    return frozenset(out)


def rotation_containing_pair(poset: RotationPoset, m: int, w: int) -> Optional[Rotation]:
    """phi(m, w); ``None`` for pairs of M_z, error for non-stable pairs."""
    r = poset.pair_rotation.get((m, w))
    if r is not None:
        return poset.rotations[r]
    if poset.mz.man_partner[m] == w:
        return None
    raise RotationError(f"({m + 1}, {w + 1}) is not a stable pair")


def matching_from_closed_subset(poset: RotationPoset, subset: Iterable[int]) -> Matching:
    s = sorted(set(subset))
    if not is_closed(poset, s):
        raise RotationError("rotation set is not closed")
    mp = list(poset.m0.man_partner)
    for r in s:
        for m, _, new in poset.rotations[r].moves():
            mp[m] = new
    return Matching(mp, poset.instance.n_women)


def poset_to_dot(poset: RotationPoset) -> str:
    lines = ["digraph {"]
    for rho in poset.rotations:
        label = " ".join(f"({m + 1},{w + 1})" for m, w in rho.pairs)
        lines.append(f'  {rho.id} [label="{label}"];')
    for p, r in poset.edges():
        lines.append(f"  {p} -> {r};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _walk(poset: RotationPoset) -> Iterator[tuple]:
    # Binary partition over the exposed rotations: each branch either
    # eliminates the smallest exposed candidate or forbids it for the rest of
    # the subtree. A rotation is exposed once all its predecessors are gone.
    mp = list(poset.m0.man_partner)
    waiting = [len(p) for p in poset.preds]
    exposed = {r for r in poset.order if waiting[r] == 0}
    forbidden: set = set()
    moves = [list(r.moves()) for r in poset.rotations]
    succs = poset.succs

    def rec():
        cands = exposed - forbidden
        if not cands:
            yield tuple(mp)
            return
        r = min(cands)
        exposed.discard(r)
        for m, _, new in moves[r]:
            mp[m] = new
        for t in succs[r]:
            waiting[t] -= 1
            if waiting[t] == 0:
                exposed.add(t)
        yield from rec()
        for t in succs[r]:
            if waiting[t] == 0:
                exposed.discard(t)
            waiting[t] += 1
        for m, old, _ in moves[r]:
            mp[m] = old
        exposed.add(r)
        forbidden.add(r)
        yield from rec()
        forbidden.discard(r)

    if sys.getrecursionlimit() < 2 * len(poset) + 200:
        sys.setrecursionlimit(2 * len(poset) + 200)
    yield from rec()


def enumerate_reduced(poset: RotationPoset) -> Iterator[Matching]:
    """Stream every stable matching of the poset's (reduced) instance once."""
    n_women = poset.instance.n_women
    for mp in _walk(poset):
        yield Matching(mp, n_women)


def enumerate_all(inst: Instance) -> Iterator[Matching]:
    """Stream every stable matching of ``inst`` exactly once."""
    reduced, report = reduce_rural_hospitals(inst)
    for matching in enumerate_reduced(build_poset(reduced)):
        yield matching if report.empty else lift_matching(reduced, matching, inst)
