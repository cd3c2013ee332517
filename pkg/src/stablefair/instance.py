"""SMI instance model, text format, random generation and list surgery.

Agents are 0-based internally and 1-based in files. Every instance keeps the
ranks of the instance it was derived from, so truncated or reduced instances
still report costs against the original preference lists.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

import numpy as np


class InstanceFormatError(ValueError):
    """Raised for malformed instance text; carries the offending line number."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Instance:
    """Two-sided strict preferences with O(1) rank lookup.

    ``man_rank[m][w]`` is the 1-based rank of woman ``w`` on man ``m``'s list
    and is defined exactly for the acceptable pairs of this instance. For an
    instance built by truncation or deletion the value is the rank in the
    root instance, not the position in the shortened list.
    """

    __slots__ = (
        "men_prefs",
        "women_prefs",
        "man_rank",
        "woman_rank",
        "men_ids",
        "women_ids",
    )

    def __init__(
        self,
        men_prefs: Sequence[Sequence[int]],
        women_prefs: Sequence[Sequence[int]],
        man_rank: Optional[Sequence[dict]] = None,
        woman_rank: Optional[Sequence[dict]] = None,
        men_ids: Optional[Sequence[int]] = None,
        women_ids: Optional[Sequence[int]] = None,
    ):
        n_men, n_women = len(men_prefs), len(women_prefs)
        men_sets = [set(p) for p in men_prefs]
        women_sets = [set(p) for p in women_prefs]
        for m, p in enumerate(men_prefs):
            if len(men_sets[m]) != len(p):
                raise ValueError(f"duplicate entry in preference list of man {m + 1}")
            for w in p:
                if not 0 <= w < n_women:
                    raise ValueError(f"man {m + 1} lists unknown woman {w + 1}")
        for w, p in enumerate(women_prefs):
            if len(women_sets[w]) != len(p):
                raise ValueError(f"duplicate entry in preference list of woman {w + 1}")
            for m in p:
                if not 0 <= m < n_men:
                    raise ValueError(f"woman {w + 1} lists unknown man {m + 1}")

        # drop one-sided entries
        self.men_prefs = tuple(
            tuple(w for w in p if m in women_sets[w]) for m, p in enumerate(men_prefs)
        )
        self.women_prefs = tuple(
            tuple(m for m in p if w in men_sets[m]) for w, p in enumerate(women_prefs)
        )
        # without explicit ranks, rank is the position in the cleaned list
        if man_rank is None:
            man_rank = [{w: r for r, w in enumerate(p, 1)} for p in self.men_prefs]
        if woman_rank is None:
            woman_rank = [{m: r for r, m in enumerate(p, 1)} for p in self.women_prefs]
        self.man_rank = tuple(
            {w: man_rank[m][w] for w in p} for m, p in enumerate(self.men_prefs)
        )
        self.woman_rank = tuple(
            {m: woman_rank[w][m] for m in p} for w, p in enumerate(self.women_prefs)
        )
        self.men_ids = tuple(range(n_men)) if men_ids is None else tuple(men_ids)
        self.women_ids = tuple(range(n_women)) if women_ids is None else tuple(women_ids)

    @classmethod
    def _derived(cls, parent: "Instance", men_prefs, women_prefs) -> "Instance":
        # lists are already mutually consistent subsets of the parent's lists
        inst = cls.__new__(cls)
        inst.men_prefs = tuple(tuple(p) for p in men_prefs)
        inst.women_prefs = tuple(tuple(p) for p in women_prefs)
        inst.man_rank = tuple(
            {w: parent.man_rank[m][w] for w in p} for m, p in enumerate(inst.men_prefs)
        )
        inst.woman_rank = tuple(
            {m: parent.woman_rank[w][m] for m in p} for w, p in enumerate(inst.women_prefs)
        )
        inst.men_ids = parent.men_ids
        inst.women_ids = parent.women_ids
        return inst

    @property
    def n_men(self) -> int:
        return len(self.men_prefs)

    @property
    def n_women(self) -> int:
        return len(self.women_prefs)

    @property
    def n(self) -> int:
        return max(self.n_men, self.n_women)

    @property
    def total_pref_length(self) -> int:
        return sum(map(len, self.men_prefs)) + sum(map(len, self.women_prefs))

    @property
    def max_rank(self) -> int:
        """Largest rank value that can occur (bounds degree histograms)."""
        best = 0
        for table in self.man_rank + self.woman_rank:
            if table:
                best = max(best, max(table.values()))
        return best

    def is_acceptable(self, m: int, w: int) -> bool:
        return w in self.man_rank[m]

    def pairs(self) -> Iterable[tuple[int, int]]:
        for m, p in enumerate(self.men_prefs):
            for w in p:
                yield m, w

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.men_prefs == other.men_prefs
            and self.women_prefs == other.women_prefs
            and self.man_rank == other.man_rank
            and self.woman_rank == other.woman_rank
        )

    def __hash__(self):
        return hash((self.men_prefs, self.women_prefs))

    def __repr__(self):
        return f"Instance(n_men={self.n_men}, n_women={self.n_women}, m={self.total_pref_length})"


def parse_instance(text: str) -> Instance:
    """Read the text format: ``n_men``, ``n_women``, then one list per line.

    Blank lines and ``#`` comments are skipped, so an empty list is written
    as a line holding a single ``-``.
    """
    rows: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line))
    if len(rows) < 2:
        raise InstanceFormatError("missing header (n_men and n_women)", rows[0][0] if rows else None)

    def header(i: int, what: str) -> int:
        lineno, line = rows[i]
        try:
            value = int(line)
        except ValueError:
            raise InstanceFormatError(f"{what} must be a single integer, got {line!r}", lineno) from None
        if value < 0:
            raise InstanceFormatError(f"{what} must be non-negative", lineno)
        return value

    n_men = header(0, "n_men")
    n_women = header(1, "n_women")
    body = rows[2:]
    if len(body) != n_men + n_women:
        last = body[-1][0] if body else rows[1][0]
        raise InstanceFormatError(
            f"expected {n_men + n_women} preference lines, found {len(body)}", last
        )

    def read_list(lineno: int, line: str, limit: int, kind: str) -> list[int]:
        if line == "-":
            return []
        out = []
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError:
                raise InstanceFormatError(f"bad {kind} id {tok!r}", lineno) from None
            if not 1 <= v <= limit:
                raise InstanceFormatError(f"{kind} id {v} out of range 1..{limit}", lineno)
            out.append(v - 1)
        if len(set(out)) != len(out):
            raise InstanceFormatError("duplicate entry in preference list", lineno)
        return out

    men = [read_list(ln, s, n_women, "woman") for ln, s in body[:n_men]]
    women = [read_list(ln, s, n_men, "man") for ln, s in body[n_men:]]
    return Instance(men, women)


def format_instance(inst: Instance) -> str:
    """Inverse of :func:`parse_instance` (lists in current preference order)."""
    lines = [str(inst.n_men), str(inst.n_women)]
    for p in inst.men_prefs + inst.women_prefs:
        lines.append(" ".join(str(x + 1) for x in p) if p else "-")
    return "\n".join(lines) + "\n"


def generate_random(n: int, seed: int) -> Instance:
    """Complete instance, every list an independent uniform permutation.

    Uses numpy's PCG64 bit generator; ``Generator.permutation`` is a
    Fisher-Yates shuffle, so output is identical across platforms.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    men = [rng.permutation(n).tolist() for _ in range(n)]
    women = [rng.permutation(n).tolist() for _ in range(n)]
    return Instance(men, women)


def _filter(inst: Instance, keep) -> Instance:
    men = [[w for w in p if keep(m, w)] for m, p in enumerate(inst.men_prefs)]
    women = [[m for m in p if keep(m, w)] for w, p in enumerate(inst.women_prefs)]
    return Instance._derived(inst, men, women)


def truncate_men(inst: Instance, a: int) -> Instance:
    """Delete every pair whose (original) man-side rank exceeds ``a``."""
    if a < 1:
        raise ValueError("rank bound must be at least 1")
    mr = inst.man_rank
    return _filter(inst, lambda m, w: mr[m][w] <= a)


def truncate_women(inst: Instance, b: int) -> Instance:
    """Delete every pair whose (original) woman-side rank exceeds ``b``."""
    if b < 1:
        raise ValueError("rank bound must be at least 1")
    wr = inst.woman_rank
    return _filter(inst, lambda m, w: wr[w][m] <= b)


def delete_pairs(inst: Instance, pairs: Iterable[tuple[int, int]]) -> Instance:
    """Delete a batch of pairs; pairs that are already absent are ignored."""
    gone = set(pairs)
    if not gone:
        return inst
    return _filter(inst, lambda m, w: (m, w) not in gone)


def delete_pair(inst: Instance, m: int, w: int) -> Instance:
    if not (0 <= m < inst.n_men and inst.is_acceptable(m, w)):
        raise KeyError(f"pair ({m + 1}, {w + 1}) is not acceptable in this instance")
    return delete_pairs(inst, [(m, w)])


def restrict(inst: Instance, men: Sequence[int], women: Sequence[int]) -> Instance:
    """Sub-instance on the given agents, renumbered densely in the given order.

    ``men_ids``/``women_ids`` of the result still name agents of the root
    instance, and ranks stay the original ones.
    """
    new_m = {m: i for i, m in enumerate(men)}
    new_w = {w: j for j, w in enumerate(women)}
    men_prefs = [[new_w[w] for w in inst.men_prefs[m] if w in new_w] for m in men]
    women_prefs = [[new_m[m] for m in inst.women_prefs[w] if m in new_m] for w in women]
    man_rank = [{new_w[w]: r for w, r in inst.man_rank[m].items() if w in new_w} for m in men]
    woman_rank = [{new_m[m]: r for m, r in inst.woman_rank[w].items() if m in new_m} for w in women]
    return Instance(
        men_prefs,
        women_prefs,
        man_rank,
        woman_rank,
        men_ids=[inst.men_ids[m] for m in men],
        women_ids=[inst.women_ids[w] for w in women],
    )
