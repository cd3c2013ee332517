"""Command-line entry point: gen, solve, enumerate, poset, experiment, check.

Exit status: 0 success, 1 usage error, 2 malformed instance or matching
file, 3 infeasible request (invalid matching, time budget exceeded).
"""

from __future__ import annotations

import argparse
import signal
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

from .fairness import ScoreReport
from .gs import MatchingError, format_matching, is_stable, parse_matching, reduce_rural_hospitals
from .instance import Instance, InstanceFormatError, format_instance, generate_random, parse_instance
from .rotations import build_poset, enumerate_all, poset_to_dot
from .solvers import resolve_algorithm, solve

EXIT_USAGE = 1
EXIT_MALFORMED = 2
EXIT_INFEASIBLE = 3

SOLVER_HELP = "redi | mrs | egalitarian | min-cost-regret-equal | optimal:<measure>[:<tiebreak>]"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", help="instance file ('-' for stdin)")
    p.add_argument("--n", type=int, help="generate a random complete instance of this size")
    p.add_argument("--seed", type=int, default=0, help="seed for --n (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stablefair", description="Fair stable matchings.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="write a random complete instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("solve", help="compute a stable matching and its scores")
    _add_instance_args(p)
    p.add_argument("--algorithm", required=True, help=SOLVER_HELP)
    p.add_argument("--csv", action="store_true", help="print the score report as a CSV row")
    p.add_argument("--timeout-secs", type=float, help="give up after this many seconds")
    p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("enumerate", help="list every stable matching")
    _add_instance_args(p)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--timeout-secs", type=float)
    p.add_argument("--out")

    p = sub.add_parser("poset", help="print the rotation poset as Graphviz DOT")
    _add_instance_args(p)
    p.add_argument("--out")

    p = sub.add_parser("experiment", help="run a batch of random instances and write CSV tables")
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--instances", type=int, default=500)
    p.add_argument("--seed", type=int, default=0, help="base seed; instance i uses seed+i")
    p.add_argument("--timeout-secs", type=float, default=60.0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("check", help="validate a matching and list its blocking pairs")
    _add_instance_args(p)
    p.add_argument("--matching", required=True, help="matching file, one 'man woman' per line")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _load_instance(args) -> Instance:
    if args.instance is not None and args.n is not None:
        raise UsageError("give either --instance or --n, not both")
    if args.instance is not None:
        return parse_instance(_read(args.instance))
    if args.n is not None:
        if args.n < 1:
            raise UsageError("--n must be at least 1")
        return generate_random(args.n, args.seed)
    raise UsageError("an instance is required (--instance FILE or --n N)")


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


@contextmanager
def _time_limit(seconds: Optional[float]):
    if not seconds or not hasattr(signal, "setitimer"):
        yield
        return

    def fire(signum, frame):
        raise TimeoutError

    old = signal.signal(signal.SIGALRM, fire)
    signal.setitimer(signal.ITIMER_REAL, seconds)
    try:
        yield
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


def format_report(rep: Optional[ScoreReport], as_csv: bool) -> str:
    header = ScoreReport.csv_header()
    if as_csv:
        values = [""] * len(header) if rep is None else rep.to_csv_row()
        return ",".join(header) + "\n" + ",".join(map(str, values)) + "\n"
    if rep is None:
        return "# no agent can be matched\n"
    width = max(map(len, header))
    return "".join(f"# {name:<{width}} {getattr(rep, name)}\n" for name in header)


def cmd_gen(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    _emit(format_instance(generate_random(args.n, args.seed)), args.out)
    return 0


def cmd_solve(args) -> int:
    try:
        resolve_algorithm(args.algorithm)
    except ValueError as e:
        raise UsageError(f"{e}; expected {SOLVER_HELP}") from None
    inst = _load_instance(args)
    with _time_limit(args.timeout_secs):
        matching, rep = solve(inst, args.algorithm)
    _emit(format_matching(matching) + format_report(rep, args.csv), args.out)
    return 0


def cmd_enumerate(args) -> int:
    inst = _load_instance(args)
    with _time_limit(args.timeout_secs):
        if args.count_only:
            text = f"{sum(1 for _ in enumerate_all(inst))}\n"
        else:
            blocks = [format_matching(m) for m in enumerate_all(inst)]
            text = "\n".join(blocks)
    _emit(text, args.out)
    return 0


def cmd_poset(args) -> int:
    reduced, _ = reduce_rural_hospitals(_load_instance(args))
    _emit(poset_to_dot(build_poset(reduced)), args.out)
    return 0


def cmd_experiment(args) -> int:
    from .harness import ExperimentConfig, run_experiment, write_outputs

    try:
        cfg = ExperimentConfig(
            sizes=args.sizes,
            instances_per_size=args.instances,
            base_seed=args.seed,
            timeout=args.timeout_secs,
            workers=args.workers,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    rows = run_experiment(cfg)
    for path in write_outputs(cfg, rows, args.out):
        print(path)
    return 0


def cmd_check(args) -> int:
    inst = _load_instance(args)
    matching = parse_matching(_read(args.matching), inst.n_men, inst.n_women)
    blocking = is_stable(inst, matching)
    if not blocking:
        print("stable")
    else:
        print(f"unstable: {len(blocking)} blocking pair(s)")
        for m, w in blocking:
            print(f"{m + 1} {w + 1}")
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "enumerate": cmd_enumerate,
    "poset": cmd_poset,
    "experiment": cmd_experiment,
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"stablefair: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InstanceFormatError as e:
        print(f"stablefair: malformed instance: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    except MatchingError as e:
        msg = str(e)
        # a syntactically broken file is malformed; a well-formed but invalid matching is infeasible
        code = EXIT_MALFORMED if msg.startswith("line ") else EXIT_INFEASIBLE
        print(f"stablefair: invalid matching: {msg}", file=sys.stderr)
        return code
    except TimeoutError:
        print("stablefair: time budget exceeded", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
