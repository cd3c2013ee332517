"""Cost/degree measures of a matching and "best on A, then on B" selection."""

from __future__ import annotations

import enum
from dataclasses import astuple, dataclass, fields
from typing import Iterable, Mapping

from .gs import Matching
from .instance import Instance


class Measure(str, enum.Enum):
    MAN_COST = "man_cost"
    WOMAN_COST = "woman_cost"
    COST = "cost"
    MAN_DEGREE = "man_degree"
    WOMAN_DEGREE = "woman_degree"
    DEGREE = "degree"
    BALANCED = "balanced"
    SEX_EQUAL = "sex_equal"
    REGRET_EQUALITY = "regret_equality"
    REGRET_SUM = "regret_sum"


# the six fairness criteria, in table order
CRITERIA = (
    Measure.BALANCED,
    Measure.SEX_EQUAL,
    Measure.COST,
    Measure.DEGREE,
    Measure.REGRET_EQUALITY,
    Measure.REGRET_SUM,
)

CRITERION_NAMES = {
    Measure.BALANCED: "balanced",
    Measure.SEX_EQUAL: "sex_equal",
    Measure.COST: "egalitarian",
    Measure.DEGREE: "min_regret",
    Measure.REGRET_EQUALITY: "regret_equal",
    Measure.REGRET_SUM: "min_regret_sum",
}


@dataclass(frozen=True)
class ScoreReport:
    man_cost: int
    woman_cost: int
    cost: int
    man_degree: int
    woman_degree: int
    degree: int
    balanced: int
    sex_equal: int
    regret_equality: int
    regret_sum: int

    @classmethod
    def from_primitives(cls, cu: int, cw: int, du: int, dw: int) -> "ScoreReport":
        return cls(cu, cw, cu + cw, du, dw, max(du, dw), max(cu, cw), abs(cu - cw), abs(du - dw), du + dw)

    def __getitem__(self, measure) -> int:
        return getattr(self, Measure(measure).value)

    @staticmethod
    def csv_header() -> list[str]:
        return [f.name for f in fields(ScoreReport)]

    def to_csv_row(self) -> list[int]:
        return list(astuple(self))

    @classmethod
    def from_csv_row(cls, row) -> "ScoreReport":
        return cls(*(int(v) for v in row))


class ScoreError(ValueError):
    pass


def score(inst: Instance, matching: Matching) -> ScoreReport:
    """All measures of a perfect matching, using the ranks stored in ``inst``
    (original ranks for derived instances)."""
    cu = cw = du = dw = 0
    mr, wr = inst.man_rank, inst.woman_rank
    if any(m is None for m in matching.woman_partner):
        raise ScoreError("matching leaves a woman unmatched; reduce the instance first")
    for m, w in enumerate(matching.man_partner):
        if w is None:
            raise ScoreError(f"man {m + 1} is unmatched; reduce the instance first")
        a = mr[m][w]
        b = wr[w][m]
        cu += a
        cw += b
        if a > du:
            du = a
        if b > dw:
            dw = b
    return ScoreReport.from_primitives(cu, cw, du, dw)


def select_best(
    matchings: Iterable[Matching],
    primary,
    secondary,
    inst: Instance,
) -> tuple[Matching, ScoreReport]:
    """Minimise ``primary``; among ties minimise ``secondary``; first wins."""
    p, s = Measure(primary).value, Measure(secondary).value
    best = None
    best_key = None
    for matching in matchings:
        rep = score(inst, matching)
        key = (getattr(rep, p), getattr(rep, s))
        if best_key is None or key < best_key:
            best, best_key = (matching, rep), key
    if best is None:
        raise ValueError("select_best needs at least one matching")
    return best


def optima(reports: Iterable[ScoreReport]) -> dict:
    """Minimum of each of the six criteria over the given reports."""
    best: dict = {}
    for rep in reports:
        for c in CRITERIA:
            v = rep[c]
            if c not in best or v < best[c]:
                best[c] = v
    return best


def criteria_satisfied(rep: ScoreReport, optimal: Mapping) -> int:
    return sum(rep[c] == optimal[Measure(c)] for c in CRITERIA)


def count_criteria_satisfied(inst: Instance, matching: Matching, optimal: Mapping) -> int:
    """How many of the six criteria ``matching`` attains the optimum of."""
    optimal = {Measure(k): v for k, v in optimal.items()}
    return criteria_satisfied(score(inst, matching), optimal)
