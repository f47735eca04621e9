"""Seeded Monte Carlo campaigns over random regular graphs.

Every trial draws from its own seed ``mix_seed(master, n, trial)``, so any
single record can be regenerated in isolation and a rerun with the same
master seed writes identical bytes.  Wall-clock time is only recorded when
``timing`` is switched on (the ``ms`` column is 0 otherwise).
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .decompose import SolveOptions, independence_number, solve, verify
from .pairing import count_cycles, is_simple, mix_seed, sample_pairing, sample_simple_graph

CSV_COLUMNS = ["n", "trial", "seed", "simple", "x1", "x2", "x3", "x4", "found", "status", "ms"]
Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials <= 0:
        return (0.0, 1.0)
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return (lo, hi)


def _map(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


# --------------------------------------------------------------------------
# decomposition existence


@dataclass
class TrialConfig:
    d: int
    k: int
    n_list: list[int]
    trials: int
    seed: int = 0
    solver: SolveOptions = field(default_factory=SolveOptions)
    simple_only: bool = True
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be positive")
        for n in self.n_list:
            if n < 1 or (self.d * n) % (2 * self.k):
                raise ValueError(f"2k must divide dn, got d={self.d}, k={self.k}, n={n}")


@dataclass
class TrialRecord:
    n: int
    trial: int
    seed: int
    simple: bool
    x1: int
    x2: int
    x3: int
    x4: int
    found: bool
    status: str
    ms: int = 0

    def row(self) -> list:
        return [self.n, self.trial, self.seed, int(self.simple), self.x1, self.x2, self.x3, self.x4,
                int(self.found), self.status, self.ms]


def _existence_trial(task) -> TrialRecord:
    cfg, n, trial = task
    seed = mix_seed(cfg.seed, n, trial)
    t0 = time.perf_counter()
    if cfg.simple_only:
        g, _ = sample_simple_graph(n, cfg.d, seed)
    else:
        g = sample_pairing(n, cfg.d, seed).multigraph()
    xs = count_cycles(g, 4)
    simple = is_simple(g)
    if not simple:
        status, found = "not-simple", False
    else:
        res = solve(g, cfg.k, cfg.solver)
        status, found = res.status, res.found
        if found and not verify(g, res.decomposition, cfg.k):
            raise RuntimeError(f"solver returned an invalid decomposition (n={n}, trial={trial})")
    ms = int(round((time.perf_counter() - t0) * 1000)) if cfg.timing else 0
    return TrialRecord(n, trial, seed, simple, *xs, found=found, status=status, ms=ms)


def summarize(records: list[TrialRecord]) -> dict:
    """Per-n counts, frequency of found, and its Wilson interval; uses only the records."""
    out = {}
    for n in sorted({r.n for r in records}):
        rs = [r for r in records if r.n == n]
        found = sum(r.found for r in rs)
        lo, hi = wilson_interval(found, len(rs))
        out[str(n)] = {
            "trials": len(rs),
            "simple": sum(r.simple for r in rs),
            "found": found,
            "proven_none": sum(r.status == "proven-none" for r in rs),
            "unknown": sum(r.status == "unknown" for r in rs),
            "frequency": found / len(rs),
            "wilson_lo": lo,
            "wilson_hi": hi,
        }
    return out


@dataclass
class ExistenceResult:
    config: TrialConfig
    records: list[TrialRecord]
    summary: dict

    def csv(self) -> str:
        return records_csv(self.records)

    def json(self) -> str:
        meta = {"d": self.config.d, "k": self.config.k, "seed": self.config.seed,
                "trials": self.config.trials, "n_list": list(self.config.n_list)}
        return json.dumps({"config": meta, "per_n": self.summary}, indent=2, sort_keys=True) + "\n"


def run_existence(config: TrialConfig) -> ExistenceResult:
    tasks = [(config, n, t) for n in config.n_list for t in range(config.trials)]
    records = _map(_existence_trial, tasks, config.workers)
    records.sort(key=lambda r: (r.n, r.trial))
    return ExistenceResult(config, records, summarize(records))


def records_csv(records: list[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def read_records(text: str) -> list[TrialRecord]:
    rows = list(csv.DictReader(io.StringIO(text)))
    ints = ("n", "trial", "seed", "x1", "x2", "x3", "x4", "ms")
    return [
        TrialRecord(**{c: int(r[c]) for c in ints}, simple=r["simple"] == "1", found=r["found"] == "1", status=r["status"])
        for r in rows
    ]


# --------------------------------------------------------------------------
# short cycles in the pairing model


@dataclass
class CycleRow:
    j: int
    mean: float
    var: float
    lam: float
    se: float
    z: float


@dataclass
class CycleResult:
    d: int
    n: int
    trials: int
    rows: list[CycleRow]
    simple_freq: float
    simple_expected: float
    simple_se: float
    simple_z: float

    def json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "mean", "var", "lambda", "se", "z"])
        for r in self.rows:
            w.writerow([r.j, repr(r.mean), repr(r.var), repr(r.lam), repr(r.se), repr(r.z)])
        return buf.getvalue()


def _cycle_trial(task):
    d, n, m, seed = task
    return count_cycles(sample_pairing(n, d, seed).multigraph(), m)


def run_cycle_poisson(d: int, n: int, trials: int, m: int, seed: int, workers: int = 1) -> CycleResult:
    if trials < 100:
        raise ValueError("run_cycle_poisson needs at least 100 trials")
    if m < 2:
        raise ValueError("m must be at least 2 (simplicity needs X_1 and X_2)")
    tasks = [(d, n, m, mix_seed(seed, n, t)) for t in range(trials)]
    counts = _map(_cycle_trial, tasks, workers)
    rows = []
    for j in range(1, m + 1):
        xs = [c[j - 1] for c in counts]
        mean = sum(xs) / trials
        var = sum((x - mean) ** 2 for x in xs) / (trials - 1)
        lam = (d - 1) ** j / (2 * j)
        se = math.sqrt(var / trials) if var > 0 else math.sqrt(lam / trials)
        rows.append(CycleRow(j, mean, var, lam, se, (mean - lam) / se))
    simple = sum(1 for c in counts if c[0] == 0 and c[1] == 0)
    p = simple / trials
    expected = math.exp(-(d * d - 1) / 4)
    sse = math.sqrt(expected * (1 - expected) / trials)
    return CycleResult(d, n, trials, rows, p, expected, sse, (p - expected) / sse)


# --------------------------------------------------------------------------
# the independent-leaf necessary condition


@dataclass
class LeafRecord:
    n: int
    trial: int
    seed: int
    alpha: int
    need: int
    condition: bool
    found: bool
    status: str


@dataclass
class LeafResult:
    d: int
    k: int
    n: int
    records: list[LeafRecord]
    condition_freq: float
    condition_interval: tuple[float, float]
    found_freq: float
    found_interval: tuple[float, float]
    implication_holds: bool

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "trial", "seed", "alpha", "need", "condition", "found", "status"])
        for r in self.records:
            w.writerow([r.n, r.trial, r.seed, r.alpha, r.need, int(r.condition), int(r.found), r.status])
        return buf.getvalue()

    def json(self) -> str:
        body = {k: v for k, v in asdict(self).items() if k != "records"}
        return json.dumps(body, indent=2, sort_keys=True) + "\n"


def _leaf_trial(task) -> LeafRecord:
    d, k, n, trial, seed, opts, cap = task
    g, _ = sample_simple_graph(n, d, seed)
    need = (2 * k - d) * n // (2 * k)
    alpha = independence_number(g, cap)
    res = solve(g, k, opts)
    if res.found and not verify(g, res.decomposition, k):
        raise RuntimeError(f"solver returned an invalid decomposition (n={n}, trial={trial})")
    return LeafRecord(n, trial, seed, alpha, need, alpha >= need, res.found, res.status)


def run_leaf_condition(d: int, k: int, n: int, trials: int, seed: int,
                       solver: SolveOptions | None = None, cap: int = 60, workers: int = 1) -> LeafResult:
    if not 2 * k > d:
        raise ValueError("leaf condition needs 2k > d")
    if (d * n) % (2 * k):
        raise ValueError(f"2k must divide dn, got d={d}, k={k}, n={n}")
    if n > cap:
        raise ValueError(f"n={n} above independence cap {cap}")
    opts = solver or SolveOptions()
    tasks = [(d, k, n, t, mix_seed(seed, n, t), opts, cap) for t in range(trials)]
    recs = _map(_leaf_trial, tasks, workers)
    cond = sum(r.condition for r in recs)
    found = sum(r.found for r in recs)
    return LeafResult(
        d, k, n, recs,
        cond / trials, wilson_interval(cond, trials),
        found / trials, wilson_interval(found, trials),
        all(r.condition for r in recs if r.found),
    )


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")
