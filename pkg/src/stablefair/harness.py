"""Batch experiments on random complete instances: timings, optimum values of
every criterion, optimum frequencies, and CSV tables summarising a run."""

from __future__ import annotations

import csv
import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .fairness import CRITERIA, CRITERION_NAMES, Measure, ScoreReport, criteria_satisfied, score
from .gs import reduce_rural_hospitals
from .instance import Instance, generate_random
from .rotations import build_poset, enumerate_reduced
from .solvers import enumeration_fold, run_redi

MEASURE_COLUMNS = (
    Measure.BALANCED,
    Measure.SEX_EQUAL,
    Measure.COST,
    Measure.DEGREE,
    Measure.REGRET_EQUALITY,
    Measure.REGRET_SUM,
)


class AgreementError(AssertionError):
    """REDI disagreed with the enumerated regret-equal optimum."""


@dataclass
class ExperimentConfig:
    sizes: list
    instances_per_size: int = 500
    base_seed: int = 0
    timeout: Optional[float] = 60.0  # seconds per instance and algorithm
    measures: tuple = MEASURE_COLUMNS
    workers: int = 1

    def __post_init__(self):
        if not self.sizes:
            raise ValueError("sizes must be non-empty")
        if any(int(n) < 1 for n in self.sizes):
            raise ValueError("every size must be at least 1")
        if self.instances_per_size < 1:
            raise ValueError("instances_per_size must be at least 1")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        self.sizes = [int(n) for n in self.sizes]
        self.measures = tuple(Measure(m) for m in self.measures)

    def seed(self, index: int) -> int:
        return self.base_seed + index


@dataclass(frozen=True)
class StatsSummary:
    mean: float
    median: float
    p5: float
    p95: float
    count: int


def _nearest_rank(sorted_values: Sequence, p: float):
    k = max(1, math.ceil(p * len(sorted_values)))
    return sorted_values[k - 1]


def summarize(values: Iterable) -> StatsSummary:
    """Mean, median and nearest-rank 5th/95th percentiles."""
    vals = sorted(values)
    if not vals:
        raise ValueError("cannot summarize an empty sample")
    return StatsSummary(
        mean=statistics.fmean(vals),
        median=statistics.median(vals),
        p5=_nearest_rank(vals, 0.05),
        p95=_nearest_rank(vals, 0.95),
        count=len(vals),
    )


@dataclass
class FrequencyReport:
    optimum: dict  # criterion -> optimal value
    counts: dict  # criterion -> number of stable matchings attaining it
    histogram: list  # histogram[c] = matchings meeting exactly c criteria


def frequency_from_reports(reports: Sequence[ScoreReport]) -> FrequencyReport:
    optimum = {c: min(r[c] for r in reports) for c in CRITERIA}
    counts = {c: sum(r[c] == optimum[c] for r in reports) for c in CRITERIA}
    histogram = [0] * (len(CRITERIA) + 1)
    for r in reports:
        histogram[criteria_satisfied(r, optimum)] += 1
    return FrequencyReport(optimum, counts, histogram)


def optimal_frequency_report(inst: Instance) -> FrequencyReport:
    """Per criterion, how many stable matchings are optimal; and how many
    matchings meet exactly c of the six criteria."""
    reduced, _ = reduce_rural_hospitals(inst)
    poset = build_poset(reduced)
    return frequency_from_reports([score(reduced, m) for m in enumerate_reduced(poset)])


def optimum_table(reports: Sequence[ScoreReport], measures=MEASURE_COLUMNS) -> dict:
    """value[(a, b)]: best measure b over the matchings optimal for criterion a."""
    out = {}
    for a in CRITERIA:
        best = min(r[a] for r in reports)
        tied = [r for r in reports if r[a] == best]
        for b in measures:
            out[(a, b)] = min(r[b] for r in tied)
    return out


@dataclass
class InstanceRow:
    size: int
    index: int
    seed: int
    n_stable: Optional[int] = None
    n_rotations: Optional[int] = None
    redi_time: Optional[float] = None
    enum_time: Optional[float] = None
    redi: Optional[ScoreReport] = None
    optimum: dict = field(default_factory=dict)  # (criterion, measure) -> value
    counts: dict = field(default_factory=dict)  # criterion -> count
    histogram: Optional[list] = None

    def to_dict(self) -> dict:
        """Flat string-free dict, one column per value (``None`` = timed out)."""
        d = {
            "size": self.size,
            "index": self.index,
            "seed": self.seed,
            "n_stable": self.n_stable,
            "n_rotations": self.n_rotations,
            "redi_time": self.redi_time,
            "enum_time": self.enum_time,
        }
        for name in ScoreReport.csv_header():
            d[f"redi_{name}"] = None if self.redi is None else getattr(self.redi, name)
        for a in CRITERIA:
            for b in MEASURE_COLUMNS:
                d[f"opt_{CRITERION_NAMES[a]}__{b.value}"] = self.optimum.get((a, b))
        for a in CRITERIA:
            d[f"count_{CRITERION_NAMES[a]}"] = self.counts.get(a)
        for c in range(len(CRITERIA) + 1):
            d[f"hist_{c}"] = None if self.histogram is None else self.histogram[c]
        return d

    @staticmethod
    def columns() -> list:
        return list(InstanceRow(0, 0, 0).to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "InstanceRow":
        def num(key, kind=int):
            v = d.get(key)
            return None if v in (None, "") else kind(v)

        row = cls(num("size"), num("index"), num("seed"))
        row.n_stable = num("n_stable")
        row.n_rotations = num("n_rotations")
        row.redi_time = num("redi_time", float)
        row.enum_time = num("enum_time", float)
        redi_vals = [num(f"redi_{name}") for name in ScoreReport.csv_header()]
        if None not in redi_vals:
            row.redi = ScoreReport(*redi_vals)
        for a in CRITERIA:
            for b in MEASURE_COLUMNS:
                v = num(f"opt_{CRITERION_NAMES[a]}__{b.value}")
                if v is not None:
                    row.optimum[(a, b)] = v
            v = num(f"count_{CRITERION_NAMES[a]}")
            if v is not None:
                row.counts[a] = v
        hist = [num(f"hist_{c}") for c in range(len(CRITERIA) + 1)]
        if None not in hist:
            row.histogram = hist
        return row

    def __eq__(self, other):
        if not isinstance(other, InstanceRow):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def run_cell(size: int, index: int, seed: int, timeout: Optional[float] = None) -> InstanceRow:
    """One instance: time REDI and the enumeration fold, then aggregate."""
    row = InstanceRow(size, index, seed)
    inst = generate_random(size, seed)

    start = time.perf_counter()
    deadline = None if timeout is None else start + timeout
    try:
        reduced, _ = reduce_rural_hospitals(inst)
        res = run_redi(reduced, build_poset(reduced), deadline=deadline)
        row.redi_time = time.perf_counter() - start
        row.redi = score(reduced, res.matching)
    except TimeoutError:
        pass

    start = time.perf_counter()
    deadline = None if timeout is None else start + timeout
    try:
        reduced, _ = reduce_rural_hospitals(inst)
        poset = build_poset(reduced)
        reports = enumeration_fold(poset, deadline=deadline)
        row.enum_time = time.perf_counter() - start
    except TimeoutError:
        return row

    row.n_stable = len(reports)
    row.n_rotations = len(poset)
    row.optimum = optimum_table(reports)
    freq = frequency_from_reports(reports)
    row.counts = freq.counts
    row.histogram = freq.histogram
    if row.redi is not None:
        want = row.optimum[(Measure.REGRET_EQUALITY, Measure.REGRET_EQUALITY)]
        if row.redi.regret_equality != want:
            raise AgreementError(
                f"n={size} seed={seed}: redi gives {row.redi.regret_equality}, optimum is {want}"
            )
    return row


def _cell_args(cfg: ExperimentConfig):
    for n in cfg.sizes:
        for i in range(cfg.instances_per_size):
            yield n, i, cfg.seed(i), cfg.timeout


def _run_star(args):
    return run_cell(*args)


def run_experiment(cfg: ExperimentConfig) -> list[InstanceRow]:
    """Rows in (size, index) order; identical for equal configs apart from timings."""
    cells = list(_cell_args(cfg))
    if cfg.workers == 1:
        return [run_cell(*c) for c in cells]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(_run_star, cells, chunksize=max(1, len(cells) // (8 * cfg.workers))))


def counts_nondecreasing(rows: Sequence[InstanceRow]) -> bool:
    """Whether the mean stable-matching count never drops as n grows."""
    means = [m for _, m in sorted(mean_by_size(rows, lambda r: r.n_stable).items())]
    return all(a <= b for a, b in zip(means, means[1:]))


def mean_by_size(rows: Sequence[InstanceRow], get) -> dict:
    by: dict = {}
    for r in rows:
        v = get(r)
        if v is not None:
            by.setdefault(r.size, []).append(v)
    return {n: statistics.fmean(v) for n, v in sorted(by.items())}


def _sizes(rows):
    return sorted({r.size for r in rows})


def _table_rows(rows, get):
    out = {}
    for n in _sizes(rows):
        vals = [v for v in (get(r) for r in rows if r.size == n) if v is not None]
        out[n] = statistics.fmean(vals) if vals else None
    return out


def build_tables(rows: Sequence[InstanceRow], measures=MEASURE_COLUMNS) -> dict:
    """Table name -> (header, rows). Values are means over the instances of a size."""
    tables = {}
    head = ["n", "algorithm", "mean", "median", "p5", "p95", "count"]
    body = []
    for n in _sizes(rows):
        for name, attr in (("redi", "redi_time"), ("enumeration", "enum_time")):
            vals = [getattr(r, attr) for r in rows if r.size == n and getattr(r, attr) is not None]
            if vals:
                s = summarize(vals)
                body.append([n, name, s.mean, s.median, s.p5, s.p95, s.count])
            else:
                body.append([n, name, None, None, None, None, 0])
    tables["duration"] = (head, body)

    kinds = [CRITERION_NAMES[c] for c in CRITERIA] + ["redi"]
    for b in measures:
        b = Measure(b)
        cols = [
            _table_rows(rows, lambda r, a=a, b=b: r.optimum.get((a, b))) for a in CRITERIA
        ] + [_table_rows(rows, lambda r, b=b: None if r.redi is None else r.redi[b])]
        body = [[n] + [c[n] for c in cols] for n in _sizes(rows)]
        tables[b.value] = (["n"] + kinds, body)

    stable = _table_rows(rows, lambda r: r.n_stable)
    rot = _table_rows(rows, lambda r: r.n_rotations)
    tables["instance_info"] = (
        ["n", "stable_matchings", "rotations"],
        [[n, stable[n], rot[n]] for n in _sizes(rows)],
    )
    cols = [_table_rows(rows, lambda r, a=a: r.counts.get(a)) for a in CRITERIA]
    tables["optima_frequency"] = (
        ["n"] + [CRITERION_NAMES[c] for c in CRITERIA],
        [[n] + [c[n] for c in cols] for n in _sizes(rows)],
    )
    cols = [
        _table_rows(rows, lambda r, c=c: None if r.histogram is None else r.histogram[c])
        for c in range(len(CRITERIA) + 1)
    ]
    tables["criteria_histogram"] = (
        ["n"] + [f"c{c}" for c in range(len(CRITERIA) + 1)],
        [[n] + [c[n] for c in cols] for n in _sizes(rows)],
    )
    return tables


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_rows_csv(rows: Sequence[InstanceRow], path) -> None:
    cols = InstanceRow.columns()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for r in rows:
            d = r.to_dict()
            w.writerow([_fmt(d[c]) for c in cols])


def read_rows_csv(path) -> list[InstanceRow]:
    with open(path, newline="") as fh:
        return [InstanceRow.from_dict(d) for d in csv.DictReader(fh)]


def write_outputs(cfg: ExperimentConfig, rows: Sequence[InstanceRow], outdir) -> list[Path]:
    """Write instances.csv, one CSV per table and manifest.json into ``outdir``."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    p = outdir / "instances.csv"
    write_rows_csv(rows, p)
    written.append(p)
    for name, (head, body) in build_tables(rows, cfg.measures).items():
        p = outdir / f"{name}.csv"
        with open(p, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(head)
            w.writerows([_fmt(v) for v in line] for line in body)
        written.append(p)
    manifest = {
        "config": {**asdict(cfg), "measures": [m.value for m in cfg.measures]},
        "seeds": {str(n): [cfg.seed(i) for i in range(cfg.instances_per_size)] for n in cfg.sizes},
        "timed_out": sum(r.redi_time is None or r.enum_time is None for r in rows),
    }
    p = outdir / "manifest.json"
    p.write_text(json.dumps(manifest, indent=2) + "\n")
    written.append(p)
    return written
