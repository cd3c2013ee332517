import subprocess
import sys
from pathlib import Path

import pytest

DEMOS = Path(__file__).resolve().parent.parent / "demos"
ARGS = {"04_experiment.py": ["--sizes", "8", "--instances", "5"]}


@pytest.mark.parametrize("script", sorted(p.name for p in DEMOS.glob("*.py")))
def test_demo_runs(script):
    out = subprocess.run(
        [sys.executable, str(DEMOS / script), *ARGS.get(script, [])],
        capture_output=True, text=True, timeout=120,
    )
    assert out.returncode == 0, out.stderr
    assert out.stdout
