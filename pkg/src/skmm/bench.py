"""Benchmark harness: (method, n, seed) cells -> mean/std empirical risk table."""

import csv
import io as _io
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import io
from .errors import InvalidArgument
from .evaluator import DEFAULT_FOLDS, DEFAULT_GRID, fit_and_evaluate
from .moments import leverage_scores
from .selectors import METHODS, resolved_params, run_selector
from .synth import GmmSpec, gmm_generate

log = logging.getLogger(__name__)

CSV_COLUMNS = ("method", "n", "mean_risk", "std_risk", "num_seeds", "full_data_risk")


@dataclass
class MethodSpec:
    name: str
    label: str
    params: dict = field(default_factory=dict)


@dataclass
class BenchPlan:
    dataset: dict
    methods: list
    budgets: list
    seeds: list
    evaluator: dict = field(default_factory=dict)
    output: str = "bench.csv"
    jobs: int = 1

    def validate(self):
        if not self.methods:
            raise InvalidArgument("plan lists no methods")
        for m in self.methods:
            if m.name not in METHODS:
                raise InvalidArgument(f"unknown method {m.name!r}")
        labels = [m.label for m in self.methods]
        if len(set(labels)) != len(labels):
            raise InvalidArgument("method labels must be unique")
        if not self.budgets or list(self.budgets) != sorted(self.budgets):
            raise InvalidArgument("budgets must be a non-empty ascending list")
        if not self.seeds or len(set(self.seeds)) != len(self.seeds):
            raise InvalidArgument("seeds must be a non-empty list of distinct values")
        if self.jobs < 1:
            raise InvalidArgument("jobs must be positive")

    def resolved(self):
        out = asdict(self)
        out["methods"] = [
            {"name": m.name, "label": m.label, "params": resolved_params(m.name, m.params)}
            for m in self.methods
        ]
        out["evaluator"] = evaluator_settings(self.evaluator)
        return out


def parse_grid(grid):
    """Accept a list of alphas or {"start", "stop", "num"} for a linear grid."""
    if grid is None:
        return list(DEFAULT_GRID)
    if isinstance(grid, dict):
        return list(np.linspace(float(grid["start"]), float(grid["stop"]), int(grid["num"])))
    return [float(a) for a in grid]


def evaluator_settings(cfg):
    cfg = dict(cfg or {})
    return {
        "grid": parse_grid(cfg.get("grid")),
        "folds": int(cfg.get("folds", DEFAULT_FOLDS)),
        "cv_seed": int(cfg.get("cv_seed", 0)),
    }


def load_plan(path, overrides=None):
    """Read a JSON plan; ``overrides`` (e.g. from CLI flags) win over file values."""
    raw = io.load_json(path)
    raw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    base = os.path.dirname(os.path.abspath(path))
    dataset = dict(raw["dataset"])
    for key in ("features", "labels"):
        if key in dataset and not os.path.isabs(dataset[key]):
            dataset[key] = os.path.join(base, dataset[key])
    methods = []
    for entry in raw["methods"]:
        if isinstance(entry, str):
            entry = {"name": entry}
        methods.append(MethodSpec(entry["name"], entry.get("label", entry["name"]), entry.get("params", {})))
    output = raw.get("output", "bench.csv")
    if not os.path.isabs(output):
        output = os.path.join(base, output)
    plan = BenchPlan(
        dataset=dataset,
        methods=methods,
        budgets=[int(b) for b in raw["budgets"]],
        seeds=[int(s) for s in raw["seeds"]],
        evaluator=raw.get("evaluator", {}),
        output=output,
        jobs=int(raw.get("jobs", 1)),
    )
    plan.validate()
    return plan


def load_dataset(dataset):
    if "synth" in dataset:
        ds = gmm_generate(GmmSpec(**dataset["synth"]))
        return ds.features, ds.labels
    return io.read_matrix(dataset["features"]), io.read_vector(dataset["labels"])


# per-process state for cell workers
_STATE = {}


def _init_worker(dataset, evaluator):
    X, y = load_dataset(dataset)
    _STATE.clear()
    _STATE.update(X=X, y=y, evaluator=evaluator, scores={})


def _scores_for(method):
    variant = {"t-leverage": ("truncated", "k"), "r-leverage": ("ridge", "rho"), "leverage": ("plain", None)}
    if method.name not in variant:
        return None
    kind, key = variant[method.name]
    params = resolved_params(method.name, method.params)
    cache_key = (kind, params.get(key) if key else None)
    if cache_key not in _STATE["scores"]:
        kw = {key: params[key]} if key else {}
        _STATE["scores"][cache_key] = leverage_scores(_STATE["X"], kind, **kw)
    return _STATE["scores"][cache_key]


def _run_cell(cell):
    method, n, seed = cell
    X, y, ev = _STATE["X"], _STATE["y"], _STATE["evaluator"]
    params = dict(method.params)
    scores = _scores_for(method)
    if scores is not None:
        params["scores"] = scores
    sel = run_selector(method.name, X, n, seed, params)
    report = fit_and_evaluate(X, y, sel.indices, ev["grid"], ev["folds"], ev["cv_seed"])
    return report.empirical_risk


def run_bench(plan):
    """Run every cell and return (rows, cell_risks, full_data_risk)."""
    ev = evaluator_settings(plan.evaluator)
    cells = [(m, n, s) for m in plan.methods for n in plan.budgets for s in plan.seeds]
    log.info("running %d cells with %d job(s)", len(cells), plan.jobs)
    if plan.jobs == 1:
        _init_worker(plan.dataset, ev)
        risks = [_run_cell(c) for c in cells]
    else:
        with ProcessPoolExecutor(plan.jobs, initializer=_init_worker, initargs=(plan.dataset, ev)) as pool:
            risks = list(pool.map(_run_cell, cells))
        _init_worker(plan.dataset, ev)
    X, y = _STATE["X"], _STATE["y"]
    full = fit_and_evaluate(X, y, np.arange(len(y)), ev["grid"], ev["folds"], ev["cv_seed"]).empirical_risk

    by_cell = {}
    for (m, n, s), risk in zip(cells, risks):
        by_cell.setdefault((m.label, n), []).append((s, risk))
    rows = []
    for m in plan.methods:
        for n in plan.budgets:
            vals = np.array([r for _, r in by_cell[(m.label, n)]])
            rows.append(
                {
                    "method": m.label,
                    "n": n,
                    "mean_risk": float(vals.mean()),
                    "std_risk": float(vals.std()),
                    "num_seeds": int(vals.size),
                    "full_data_risk": full,
                }
            )
    cell_risks = [
        {"method": m.label, "n": n, "seed": s, "risk": float(r)} for (m, n, s), r in zip(cells, risks)
    ]
    return rows, cell_risks, full


def format_csv(rows):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row["method"],
                row["n"],
                f"{row['mean_risk']:.10e}",
                f"{row['std_risk']:.10e}",
                row["num_seeds"],
                f"{row['full_data_risk']:.10e}",
            ]
        )
    return buf.getvalue()


def write_outputs(plan, rows, cell_risks, full):
    """CSV table plus a JSON sidecar with the resolved plan and per-cell risks."""
    with open(plan.output, "w") as fh:
        fh.write(format_csv(rows))
    io.dump_json(
        {"plan": plan.resolved(), "full_data_risk": full, "cells": cell_risks},
        plan.output + ".json",
    )
