"""Seeded experiment runs and their JSON reports.

A *cell* is one method configuration run once per seed. Each run records
the ARI against ground truth (when labels exist), per-phase wall times and
diagnostics; ``ExperimentReport`` collects the per-seed arrays and their
summaries. Everything in a report apart from ``created`` and the timing
fields is a deterministic function of the inputs.
"""

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from .cluster import PHASES, ClusterConfig, anchornn_cluster, spectral_cluster
from .metrics import adjusted_rand_index
from .theory import covering_radius, per_cluster_connectivity

SCHEMA = 1
METHODS = ("spectral", "anchornn")
SWEEP_COLUMNS = ("m", "K", "mean_ari", "std_ari", "mean_time")


@dataclass
class RunResult:
    seed: int
    labels: np.ndarray
    ari: Optional[float]
    degenerate: bool
    timings: dict
    covering_radius: Optional[float]
    components: Optional[dict]


def run_once(points, method, cfg, diagnostics=True):
    """One clustering run; ``cfg.seed`` selects every random stream."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    timings = {p: 0.0 for p in PHASES}
    start = time.perf_counter()
    radius = comps = None
    if method == "spectral":
        part = spectral_cluster(points, cfg, timings=timings)
        if diagnostics and points.has_labels:
            comps = per_cluster_connectivity(points, cfg.K)
    else:
        part, anchors = anchornn_cluster(points, cfg, timings=timings)
        if diagnostics:
            sub = points.subset(anchors)
            radius = covering_radius(sub, points)
            if points.has_labels:
                comps = per_cluster_connectivity(sub, cfg.K)
    timings["total"] = time.perf_counter() - start
    ari = adjusted_rand_index(part, points.labels) if points.has_labels else None
    if comps is not None:
        comps = {str(k): v for k, v in comps.items()}
    return RunResult(cfg.seed, part.labels, ari, part.degenerate, timings, radius, comps)


def _run_star(args):
    return run_once(*args)


@dataclass
class ExperimentReport:
    method: str
    config: dict
    seeds: list
    ari: list
    mean_ari: Optional[float]
    std_ari: Optional[float]
    degenerate: list
    timings: list
    diagnostics: dict
    schema: int = SCHEMA
    created: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    @property
    def mean_time(self):
        return float(np.mean([t["total"] for t in self.timings]))

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    @classmethod
    def from_dict(cls, d):
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls(**d)


def summarize(values):
    """Mean and population standard deviation; ``(None, None)`` if any value is missing."""
    if not values or any(v is None for v in values):
        return None, None
    a = np.asarray(values, dtype=np.float64)
    return float(a.mean()), float(a.std())


def run_cell(points, method, cfg, seeds, jobs=1, delta=None, runs_out=None):
    """Run ``cfg`` once per seed and build the report.

    ``jobs > 1`` runs seeds in worker processes; results are ordered by
    seed, so the report does not depend on scheduling.
    """
    seeds = [int(s) for s in seeds]
    tasks = [(points, method, _with_seed(cfg, s)) for s in seeds]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(_run_star, tasks))
    else:
        runs = [_run_star(t) for t in tasks]
    if runs_out is not None:
        runs_out.extend(runs)

    aris = [r.ari for r in runs]
    mean, std = summarize(aris)
    config = {
        "n": points.n,
        "d": points.d,
        "m": cfg.m if method == "anchornn" else None,
        "K": cfg.K,
        "k": cfg.k,
        "kind": cfg.laplacian_kind,
        "eigen_tol": cfg.eigen_tol,
        "kmeans_restarts": cfg.kmeans_restarts,
    }
    return ExperimentReport(
        method=method,
        config=config,
        seeds=seeds,
        ari=aris,
        mean_ari=mean,
        std_ari=std,
        degenerate=[r.degenerate for r in runs],
        timings=[r.timings for r in runs],
        diagnostics={
            "delta": delta,
            "covering_radius": [r.covering_radius for r in runs],
            "components": [r.components for r in runs],
        },
    )


def _with_seed(cfg, seed):
    d = asdict(cfg)
    d["seed"] = seed
    return ClusterConfig(**d)


def sweep_row(report):
    m = report.config["m"] if report.config["m"] is not None else report.config["n"]
    return {
        "m": m,
        "K": report.config["K"],
        "mean_ari": report.mean_ari,
        "std_ari": report.std_ari,
        "mean_time": report.mean_time,
    }


def write_sweep_csv(path, reports):
    """Flat table with one row per cell; full spectral cells report ``m = n``."""
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        w.writeheader()
        for rep in reports:
            row = sweep_row(rep)
            w.writerow({k: _fmt(v) for k, v in row.items()})


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "nan" if math.isnan(v) else "%.17g" % v
    return str(v)
