"""How REDI searches for a regret-equal matching.

Starting at the man-optimal matching, men's degree d_U is low and women's
degree d_W is high. REDI moves through a grid of candidate degree pairs one
column (fixed d_U) at a time, walking down a column by improving the worst-off
women. This script prints the grid and the columns REDI actually visited.
"""

import argparse

from stablefair import build_poset, generate_random, score
from stablefair.solvers import column_grid, run_redi


def main(n: int, seed: int) -> None:
    inst = generate_random(n, seed)
    poset = build_poset(inst)
    rep0 = score(inst, poset.m0)
    a0, b0 = rep0.man_degree, rep0.woman_degree
    print(f"instance n={n} seed={seed}: d(M_0) = ({a0}, {b0}), {len(poset)} rotations")
    if a0 >= b0:
        print("men are already no better off than women; M_0 is regret-equal")
        return

    grid = column_grid(a0, b0, n)
    print(f"\ncandidate grid: {len(grid)} columns, {sum(map(len, grid))} cells")
    for col in grid[:2] + grid[-2:]:
        cells = [f"({a},{b})" for a, b in col]
        print(f"  d_U={col[0][0]}: {' '.join(cells[:3])} ... {' '.join(cells[-2:])}")

    res = run_redi(inst, poset)
    print(f"\nREDI ran {len(res.columns)} column operations, {res.pair_eliminations} pair moves")
    for a, visited, start in res.columns:
        path = " -> ".join(f"({du},{dw})" for du, dw in visited)
        print(f"  column d_U={a} from {len(start)} eliminated rotations: {path}")
    rep = score(inst, res.matching)
    print(f"\nresult: d = ({rep.man_degree}, {rep.woman_degree}), regret-equality {rep.regret_equality}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=60)
    p.add_argument("--seed", type=int, default=5)
    a = p.parse_args()
    main(a.n, a.seed)
