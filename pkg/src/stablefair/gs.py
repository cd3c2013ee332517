"""Gale-Shapley in both orientations, the stability checker and the
rural-hospitals reduction."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .instance import Instance, restrict


class MatchingError(ValueError):
    """A matching that violates capacity or uses an unacceptable pair."""


class Matching:
    """A set of man-woman pairs with partner lookup on both sides.

    ``man_partner[m]`` is the woman matched to ``m`` or ``None``.
    """

    __slots__ = ("man_partner", "woman_partner", "_hash")

    def __init__(self, man_partner: Sequence[Optional[int]], n_women: int):
        self.man_partner = tuple(man_partner)
        wp: list[Optional[int]] = [None] * n_women
        for m, w in enumerate(self.man_partner):
            if w is None:
                continue
            if wp[w] is not None:
                raise MatchingError(f"woman {w + 1} is matched twice")
            wp[w] = m
        self.woman_partner = tuple(wp)
        self._hash = None

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], n_men: int, n_women: int) -> "Matching":
        mp: list[Optional[int]] = [None] * n_men
        for m, w in pairs:
            if not (0 <= m < n_men and 0 <= w < n_women):
                raise MatchingError(f"pair ({m + 1}, {w + 1}) is out of range")
            if mp[m] is not None:
                raise MatchingError(f"man {m + 1} is matched twice")
            mp[m] = w
        return cls(mp, n_women)

    @property
    def pairs(self) -> frozenset:
        return frozenset((m, w) for m, w in enumerate(self.man_partner) if w is not None)

    def __len__(self) -> int:
        return sum(w is not None for w in self.man_partner)

    def __contains__(self, pair) -> bool:
        m, w = pair
        return 0 <= m < len(self.man_partner) and self.man_partner[m] == w

    def __eq__(self, other):
        if not isinstance(other, Matching):
            return NotImplemented
        return self.man_partner == other.man_partner and len(self.woman_partner) == len(
            other.woman_partner
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.man_partner)
        return self._hash

    def __repr__(self):
        body = ", ".join(f"({m + 1},{w + 1})" for m, w in sorted(self.pairs))
        return f"Matching({body})"


def format_matching(matching: Matching, inst: Optional[Instance] = None) -> str:
    """One ``m w`` line per pair, sorted by man, 1-based.

    With ``inst`` given, ids are translated to the root instance's agents.
    """
    lines = []
    for m, w in sorted(matching.pairs, key=lambda p: (inst.men_ids[p[0]] if inst else p[0])):
        if inst is not None:
            m, w = inst.men_ids[m], inst.women_ids[w]
        lines.append(f"{m + 1} {w + 1}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_matching(text: str, n_men: int, n_women: int) -> Matching:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MatchingError(f"line {lineno}: expected 'man woman', got {line!r}")
        try:
            m, w = int(parts[0]) - 1, int(parts[1]) - 1
        except ValueError:
            raise MatchingError(f"line {lineno}: ids must be integers") from None
        pairs.append((m, w))
    return Matching.from_pairs(pairs, n_men, n_women)


def _propose(prefs, rank, n_receivers):
    # proposer-optimal GS with a FIFO queue of free proposers
    n = len(prefs)
    nxt = [0] * n
    holds: list[Optional[int]] = [None] * n_receivers
    free = deque(range(n))
    while free:
        p = free.popleft()
        plist = prefs[p]
        while nxt[p] < len(plist):
            r = plist[nxt[p]]
            nxt[p] += 1
            cur = holds[r]
            if cur is None:
                holds[r] = p
                break
            if rank[r][p] < rank[r][cur]:
                holds[r] = p
                free.append(cur)
                break
    partner: list[Optional[int]] = [None] * n
    for r, p in enumerate(holds):
        if p is not None:
            partner[p] = r
    return partner


def man_oriented_gs(inst: Instance) -> Matching:
    """The man-optimal stable matching M_0."""
    mp = _propose(inst.men_prefs, inst.woman_rank, inst.n_women)
    return Matching(mp, inst.n_women)


def woman_oriented_gs(inst: Instance) -> Matching:
    """The woman-optimal stable matching M_z."""
    wp = _propose(inst.women_prefs, inst.man_rank, inst.n_men)
    mp: list[Optional[int]] = [None] * inst.n_men
    for w, m in enumerate(wp):
        if m is not None:
            mp[m] = w
    return Matching(mp, inst.n_women)


def check_matching(inst: Instance, matching: Matching) -> None:
    """Raise :class:`MatchingError` unless every pair is acceptable in ``inst``."""
    if len(matching.man_partner) != inst.n_men or len(matching.woman_partner) != inst.n_women:
        raise MatchingError("matching does not fit the instance dimensions")
    for m, w in enumerate(matching.man_partner):
        if w is not None and not inst.is_acceptable(m, w):
            raise MatchingError(f"pair ({m + 1}, {w + 1}) is not acceptable")


def is_stable(inst: Instance, matching: Matching) -> list[tuple[int, int]]:
    """All blocking pairs of ``matching``; an empty list means stable.

    Each man's list is scanned only up to his partner, so this is O(m).
    """
    check_matching(inst, matching)
    wp = matching.woman_partner
    blocking = []
    for m, plist in enumerate(inst.men_prefs):
        cur = matching.man_partner[m]
        for w in plist:
            if w == cur:
                break
            other = wp[w]
            wr = inst.woman_rank[w]
            if other is None or wr[m] < wr[other]:
                blocking.append((m, w))
    return blocking


@dataclass(frozen=True)
class RuralReport:
    """Agents (ids of the input instance) dropped by the reduction."""

    removed_men: tuple = field(default=())
    removed_women: tuple = field(default=())

    @property
    def empty(self) -> bool:
        return not self.removed_men and not self.removed_women


def reduce_rural_hospitals(inst: Instance) -> tuple[Instance, RuralReport]:
    """Drop the agents left single by man-oriented GS.

    The same agents are matched in every stable matching. Dropping them
    alone could let a dropped agent's pairs block, so the lists are first
    cut to the GS-lists: w keeps only the men she ranks at least as high as
    her M_0 partner, m only the women he ranks at least as high as his M_z
    partner. Every stable pair survives the cut, every pair of a dropped
    agent is removed, and the stable matchings of the result are exactly
    those of ``inst``, all perfect. Returns ``inst`` itself when nobody is
    dropped.
    """
    m0 = man_oriented_gs(inst)
    men = [m for m, w in enumerate(m0.man_partner) if w is not None]
    women = [w for w, m in enumerate(m0.woman_partner) if m is not None]
    if len(men) == inst.n_men and len(women) == inst.n_women:
        return inst, RuralReport()
    mz = woman_oriented_gs(inst)
    report = RuralReport(
        removed_men=tuple(m for m in range(inst.n_men) if m0.man_partner[m] is None),
        removed_women=tuple(w for w in range(inst.n_women) if m0.woman_partner[w] is None),
    )
    mr, wr = inst.man_rank, inst.woman_rank

    def keep(m, w):
        w_floor, m_floor = m0.woman_partner[w], mz.man_partner[m]
        return (
            w_floor is not None
            and m_floor is not None
            and wr[w][m] <= wr[w][w_floor]
            and mr[m][w] <= mr[m][m_floor]
        )

    men_prefs = [[w for w in p if keep(m, w)] for m, p in enumerate(inst.men_prefs)]
    women_prefs = [[m for m in p if keep(m, w)] for w, p in enumerate(inst.women_prefs)]
    cut = Instance._derived(inst, men_prefs, women_prefs)
    return restrict(cut, men, women), report


def lift_matching(reduced: Instance, matching: Matching, parent: Instance) -> Matching:
    """Translate a matching on a restricted instance back to ``parent``'s agents."""
    pos_m = {root: i for i, root in enumerate(parent.men_ids)}
    pos_w = {root: j for j, root in enumerate(parent.women_ids)}
    pairs = [
        (pos_m[reduced.men_ids[m]], pos_w[reduced.women_ids[w]]) for m, w in matching.pairs
    ]
    return Matching.from_pairs(pairs, parent.n_men, parent.n_women)
