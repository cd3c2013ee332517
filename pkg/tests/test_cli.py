import subprocess
import sys

import pytest

from helpers import mutual_first
from stablefair.cli import main
from stablefair.fairness import score
from stablefair.gs import man_oriented_gs
from stablefair.instance import format_instance, generate_random


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def report_line(out):
    lines = out.strip().splitlines()
    header, values = lines[-2].split(","), lines[-1].split(",")
    return dict(zip(header, map(int, values)))


def m0_heavy_instance():
    for seed in range(200):
        inst = generate_random(8, seed)
        rep = score(inst, man_oriented_gs(inst))
        if rep.man_degree >= rep.woman_degree:
            return inst
    raise AssertionError


def test_solve_redi_on_m0_instance(tmp_path, capsys):
    inst = m0_heavy_instance()
    f = write(tmp_path, "i.txt", format_instance(inst))
    assert main(["solve", "--algorithm", "redi", "--instance", f]) == 0
    out = capsys.readouterr().out
    pairs = [tuple(map(int, line.split())) for line in out.splitlines() if not line.startswith("#")]
    assert pairs == [(m + 1, w + 1) for m, w in enumerate(man_oriented_gs(inst).man_partner)]


def test_count_only_unique(tmp_path, capsys):
    f = write(tmp_path, "i.txt", format_instance(mutual_first(4)))
    assert main(["enumerate", "--count-only", "--instance", f]) == 0
    assert capsys.readouterr().out == "1\n"


@pytest.mark.parametrize("seed", range(5))
def test_redi_matches_optimal(capsys, seed):
    args = ["--n", "12", "--seed", str(seed), "--csv"]
    main(["solve", "--algorithm", "redi", *args])
    a = report_line(capsys.readouterr().out)
    main(["solve", "--algorithm", "optimal:regret_equality", *args])
    b = report_line(capsys.readouterr().out)
    assert a["regret_equality"] == b["regret_equality"]


@pytest.mark.parametrize("algo", ["redi", "mrs", "egalitarian", "min-cost-regret-equal", "optimal:balanced"])
def test_solve_output_passes_check(tmp_path, capsys, algo):
    inst = write(tmp_path, "i.txt", format_instance(generate_random(10, 4)))
    out = write(tmp_path, "m.txt", "")
    assert main(["solve", "--algorithm", algo, "--instance", inst, "--out", out]) == 0
    assert main(["check", "--instance", inst, "--matching", out]) == 0
    assert capsys.readouterr().out == "stable\n"


def test_check_lists_blocking_pairs(tmp_path, capsys):
    inst = write(tmp_path, "i.txt", "2\n2\n1 2\n1 2\n2 1\n1 2\n")
    m = write(tmp_path, "m.txt", "1 1\n2 2\n")
    assert main(["check", "--instance", inst, "--matching", m]) == 0
    assert capsys.readouterr().out == "unstable: 1 blocking pair(s)\n2 1\n"


def test_check_infeasible_matching(tmp_path):
    inst = write(tmp_path, "i.txt", "2\n2\n1\n2\n1\n2\n")
    m = write(tmp_path, "m.txt", "1 2\n2 1\n")
    assert main(["check", "--instance", inst, "--matching", m]) == 3
    m = write(tmp_path, "m2.txt", "1 1\n2 1\n")
    assert main(["check", "--instance", inst, "--matching", m]) == 3


def test_exit_codes(tmp_path):
    bad = write(tmp_path, "bad.txt", "2\n2\n1 2\n")
    assert main(["solve", "--algorithm", "redi", "--instance", bad]) == 2
    assert main(["solve", "--algorithm", "nope", "--n", "3"]) == 1
    assert main(["frobnicate"]) == 1
    assert main([]) == 1
    assert main(["solve", "--algorithm", "redi"]) == 1
    assert main(["solve", "--algorithm", "redi", "--instance", str(tmp_path / "missing")]) == 1
    m = write(tmp_path, "m.txt", "1 x\n")
    good = write(tmp_path, "i.txt", "1\n1\n1\n1\n")
    assert main(["check", "--instance", good, "--matching", m]) == 2


def test_timeout_is_infeasible():
    assert main(["enumerate", "--n", "400", "--seed", "1", "--timeout-secs", "0.01"]) == 3


def test_gen_deterministic(capsys):
    main(["gen", "--n", "6", "--seed", "3"])
    a = capsys.readouterr().out
    main(["gen", "--n", "6", "--seed", "3"])
    assert capsys.readouterr().out == a == format_instance(generate_random(6, 3))


def test_poset_dot(capsys):
    assert main(["poset", "--n", "12", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph {") and "->" in out


def test_experiment_writes_tables(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["experiment", "--sizes", "5", "6", "--instances", "4", "--out", str(out)]) == 0
    assert (out / "instance_info.csv").exists() and (out / "manifest.json").exists()
    assert main(["experiment", "--sizes", "0", "--out", str(out)]) == 1


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "stablefair", "enumerate", "--n", "6", "--seed", "1", "--count-only"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and res.stdout.strip().isdigit()
