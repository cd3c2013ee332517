"""From Gale-Shapley to the full set of stable matchings.

Builds a random instance, runs both orientations of Gale-Shapley, lists the
rotations that lead from the man-optimal to the woman-optimal matching, and
walks the lattice of stable matchings they generate.
"""

import argparse

from stablefair import build_poset, enumerate_all, generate_random, man_oriented_gs, score, woman_oriented_gs
from stablefair.gs import format_matching
from stablefair.rotations import poset_to_dot


def main(n: int, seed: int) -> None:
    inst = generate_random(n, seed)
    m0, mz = man_oriented_gs(inst), woman_oriented_gs(inst)
    print(f"instance n={n} seed={seed}")
    print("man-optimal matching:", score(inst, m0))
    print("woman-optimal matching:", score(inst, mz))

    poset = build_poset(inst)
    print(f"\n{len(poset)} rotations")
    for rho in poset.rotations:
        pairs = " ".join(f"({m + 1},{w + 1})" for m, w in rho.pairs)
        needs = sorted(poset.preds[rho.id])
        print(f"  rotation {rho.id}: {pairs}   needs {needs or 'nothing'}")
    print("\nprecedence graph in DOT:\n" + poset_to_dot(poset))

    matchings = list(enumerate_all(inst))
    print(f"{len(matchings)} stable matchings; men's cost and women's cost of each:")
    for m in matchings:
        rep = score(inst, m)
        print(f"  c_U={rep.man_cost:4d}  c_W={rep.woman_cost:4d}")
    print("\nthe first one, pair by pair:\n" + format_matching(matchings[0]))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=12)
    p.add_argument("--seed", type=int, default=3)
    a = p.parse_args()
    main(a.n, a.seed)
