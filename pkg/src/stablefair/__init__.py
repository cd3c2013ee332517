"""Stable marriage with fairness criteria: Gale-Shapley, rotation posets,
regret-equal and min-regret-sum solvers, and an experiment harness."""

from .fairness import CRITERIA, Measure, ScoreReport, score, select_best
from .gs import (
    Matching,
    MatchingError,
    is_stable,
    man_oriented_gs,
    reduce_rural_hospitals,
    woman_oriented_gs,
)
from .instance import Instance, InstanceFormatError, generate_random, parse_instance
from .rotations import Rotation, RotationPoset, build_poset, enumerate_all
from .solvers import (
    egalitarian,
    min_cost_regret_equal,
    mrs,
    optimal_by_enumeration,
    redi,
    solve,
)

__all__ = [
    "CRITERIA",
    "Instance",
    "InstanceFormatError",
    "Matching",
    "MatchingError",
    "Measure",
    "Rotation",
    "RotationPoset",
    "ScoreReport",
    "build_poset",
    "egalitarian",
    "enumerate_all",
    "generate_random",
    "is_stable",
    "man_oriented_gs",
    "min_cost_regret_equal",
    "mrs",
    "optimal_by_enumeration",
    "parse_instance",
    "redi",
    "reduce_rural_hospitals",
    "score",
    "select_best",
    "solve",
    "woman_oriented_gs",
]
