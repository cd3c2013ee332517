"""Six notions of a fair stable matching, side by side.

For one instance, finds the optimum of each criterion by enumeration and
compares them with the polynomial-time solvers: REDI (regret-equal), MRS
(min-regret-sum), the egalitarian min-cut solver and the cheapest
regret-equal matching.
"""

import argparse

from stablefair import CRITERIA, generate_random, optimal_by_enumeration, score
from stablefair.fairness import CRITERION_NAMES, Measure
from stablefair.solvers import egalitarian, min_cost_regret_equal, mrs, redi

COLUMNS = [Measure.BALANCED, Measure.SEX_EQUAL, Measure.COST, Measure.DEGREE,
           Measure.REGRET_EQUALITY, Measure.REGRET_SUM]


def row(label, rep):
    cells = "".join(f"{rep[m]:>17}" for m in COLUMNS)
    print(f"{label:<24}{cells}")


def main(n: int, seed: int) -> None:
    inst = generate_random(n, seed)
    print(f"instance n={n} seed={seed}\n")
    print(f"{'matching':<24}" + "".join(f"{m.value:>17}" for m in COLUMNS))
    for c in CRITERIA:
        # ties on the criterion are broken by the criterion itself
        _, m = optimal_by_enumeration(inst, c)
        row(f"{CRITERION_NAMES[c]} optimum", score(inst, m))
    print()
    row("redi", score(inst, redi(inst)))
    row("mrs", score(inst, mrs(inst)))
    row("egalitarian (min cut)", score(inst, egalitarian(inst)))
    row("cheapest regret-equal", score(inst, min_cost_regret_equal(inst)))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--seed", type=int, default=1)
    a = p.parse_args()
    main(a.n, a.seed)
