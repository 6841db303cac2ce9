"""Entropy statistics over ensembles of Haar-random or generated AME states."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .entropy import ame_lower_bound, max_entropy, renyi_entropy, support_upper_bound
from .generate import GenConfig, generate_kuniform
from .minentropy import MinEntropyConfig, minimize_entropy
from .seesaw import s_infinity_min
from .states import random_haar_state, read_state

QUANTITIES = ("S2", "S2min", "Sinf", "Sinfmin")
SOURCES = ("haar", "ame_generated", "state_files")


@dataclass
class EnsembleSpec:
    source: str = "haar"
    n: int = 3
    d: int = 2
    size: int = 1000
    quantities: tuple[str, ...] = ("S2",)
    restarts: int = 20
    seesaw_restarts: int = 50
    rng_seed: int = 20240601
    bins: int = 60
    files: tuple[str, ...] = ()
    gen_restarts: int = 10
    gen_max_iters: int = 5000

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source {self.source!r}")
        self.quantities = tuple(self.quantities)
        self.files = tuple(self.files)
        if not self.quantities or any(q not in QUANTITIES for q in self.quantities):
            raise ValueError(f"quantities must be a nonempty subset of {QUANTITIES}")
        if self.source == "state_files":
            if not self.files:
                raise ValueError("state_files source needs at least one file")
            self.size = len(self.files)
        if self.size < 1:
            raise ValueError("size must be >= 1")


@dataclass
class EnsembleReport:
    spec: EnsembleSpec
    records: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    histograms: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    failures: list[dict] = field(default_factory=list)

    def values(self, quantity: str) -> np.ndarray:
        return np.array([r[quantity] for r in self.records])

    def to_dict(self) -> dict:
        return {
            "spec": asdict(self.spec),
            "bounds": self.bounds,
            "stats": self.stats,
            "histograms": self.histograms,
            "failures": self.failures,
            "records": self.records,
        }


def _one_state(spec: EnsembleSpec, index: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    record = {"index": index, "seed": seed}
    if spec.source == "haar":
        state = random_haar_state(spec.n, spec.d, rng)
    elif spec.source == "ame_generated":
        gen = generate_kuniform(GenConfig(
            spec.n, spec.d, rng_seed=seed, restarts=spec.gen_restarts,
            max_iters=spec.gen_max_iters,
        ))
        if not gen.success:
            return {**record, "error": f"generator failed, best f = {gen.f_final!r}"}
        state = gen.state
    else:
        record["file"] = spec.files[index]
        state = read_state(spec.files[index])
    sub_seed = int(rng.integers(2**63))
    for qty in spec.quantities:
        if qty == "S2":
            record[qty] = renyi_entropy(state, 2)
        elif qty == "Sinf":
            record[qty] = renyi_entropy(state, math.inf)
        elif qty == "S2min":
            cfg = MinEntropyConfig(q=2.0, restarts=spec.restarts, rng_seed=sub_seed)
            record[qty] = minimize_entropy(state, cfg).entropy
        elif qty == "Sinfmin":
            record[qty] = s_infinity_min(state, restarts=spec.seesaw_restarts, rng_seed=sub_seed).s_inf_min
    return record


def _summary(values: list[float]) -> dict:
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1) if n > 1 else 0.0
    return {
        "count": n,
        "mean": mean,
        "std": math.sqrt(var),
        "stderr": math.sqrt(var / n),
        "min": min(values),
        "max": max(values),
    }


def run_ensemble(spec: EnsembleSpec, n_jobs: int = 1) -> EnsembleReport:
    """Sample ``spec.size`` states and evaluate the requested quantities.

    Deterministic for a given ``spec.rng_seed`` regardless of ``n_jobs``:
    every state draws from its own child seed and records stay in index order.
    """
    seeds = np.random.SeedSequence(spec.rng_seed).generate_state(spec.size, dtype=np.uint64)
    seeds = [int(s) for s in seeds]
    if n_jobs == 1:
        out = [_one_state(spec, i, s) for i, s in enumerate(seeds)]
    else:
        from joblib import Parallel, delayed

        out = Parallel(n_jobs=n_jobs)(delayed(_one_state)(spec, i, s) for i, s in enumerate(seeds))
    records = [r for r in out if "error" not in r]
    failures = [r for r in out if "error" in r]
    top = max_entropy(spec.n, spec.d)
    report = EnsembleReport(spec=spec, records=records, failures=failures)
    report.bounds = {
        "ame_lower": ame_lower_bound(spec.n, spec.d),
        "max": top,
        "support_upper": support_upper_bound(spec.n, spec.d),
    }
    if records:
        for qty in spec.quantities:
            vals = [r[qty] for r in records]
            report.stats[qty] = _summary(vals)
            clipped = np.clip(vals, 0.0, top)
            counts, edges = np.histogram(clipped, bins=spec.bins, range=(0.0, top))
            report.histograms[qty] = {
                "edges": [float(e) for e in edges],
                "counts": [int(c) for c in counts],
            }
    return report


def report_to_csv(report: EnsembleReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    qs = list(report.spec.quantities)
    w.writerow(["index", "seed"] + qs)
    for r in report.records:
        w.writerow([r["index"], r["seed"]] + [repr(float(r[q])) for q in qs])
    for q in qs:
        if q not in report.histograms:
            continue
        h = report.histograms[q]
        w.writerow([])
        w.writerow([f"# histogram {q}"])
        w.writerow(["bin_lo", "bin_hi", "count"])
        for lo, hi, c in zip(h["edges"][:-1], h["edges"][1:], h["counts"]):
            w.writerow([repr(lo), repr(hi), c])
    return buf.getvalue()


def report_to_json(report: EnsembleReport) -> str:
    return json.dumps(report.to_dict(), indent=1) + "\n"


def export(report: EnsembleReport, fmt: str, path) -> None:
    if fmt == "csv":
        text = report_to_csv(report)
    elif fmt == "json":
        text = report_to_json(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", newline="") as fh:
        fh.write(text)


def load_report(path) -> EnsembleReport:
    """Read a JSON report written by :func:`export`."""
    with open(path) as fh:
        data = json.load(fh)
    return EnsembleReport(
        spec=EnsembleSpec(**data["spec"]),
        records=data["records"],
        stats=data["stats"],
        histograms=data["histograms"],
        bounds=data["bounds"],
        failures=data["failures"],
    )
