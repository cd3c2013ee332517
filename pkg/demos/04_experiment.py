"""A desk-scale experiment: random complete instances of a few sizes.

Runs REDI and the enumeration fold on each instance, then prints the mean
instance statistics, the regret-equality table and the timing summary.
Pass --out DIR to also write every CSV table and a manifest.
"""

import argparse

from stablefair.harness import ExperimentConfig, build_tables, run_experiment, write_outputs


def show(name, table):
    head, body = table
    print(f"\n{name}")
    print("  " + "".join(f"{h:>16}" for h in head))
    for line in body:
        cells = (f"{v:>16.4g}" if isinstance(v, float) else f"{v!s:>16}" for v in line)
        print("  " + "".join(cells))


def main(sizes, instances, out) -> None:
    cfg = ExperimentConfig(sizes, instances_per_size=instances)
    rows = run_experiment(cfg)
    tables = build_tables(rows)
    for name in ("instance_info", "regret_equality", "optima_frequency", "duration"):
        show(name, tables[name])
    if out:
        for path in write_outputs(cfg, rows, out):
            print("wrote", path)


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 50])
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--out")
    a = p.parse_args()
    main(a.sizes, a.instances, a.out)
