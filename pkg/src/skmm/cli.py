"""Command-line interface: ``skmm synth|select|eval|bench``.

Exit codes: 0 success, 1 usage / invalid input, 2 numeric-domain error.
"""

import argparse
import logging
import os
import sys

import numpy as np

from . import bench, io
from .errors import InvalidArgument, NumericDomainError
from .evaluator import (
    DEFAULT_FOLDS,
    cv_grid_search,
    empirical_risk,
    ridge_fit,
    tradeoff_diagnostics,
)
from .selectors import METHODS, Selection, resolved_params, run_selector
from .sketch import apply_sketch, build_gaussian_sketch
from .synth import GmmSpec, gmm_generate

log = logging.getLogger("skmm")

EXIT_USAGE = 1
EXIT_NUMERIC = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_grid_arg(text):
    """``linspace:START:STOP:NUM`` or a comma-separated list of alphas."""
    text = text.strip()
    if text.startswith("linspace:"):
        try:
            _, start, stop, num = text.split(":")
            return list(np.linspace(float(start), float(stop), int(num)))
        except ValueError as exc:
            raise InvalidArgument(f"bad grid spec {text!r}") from exc
    values = [v for v in text.split(",") if v.strip()]
    if not values:
        raise InvalidArgument("alpha grid is empty")
    return [float(v) for v in values]


def _write_or_print(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_synth(args):
    spec = GmmSpec(args.samples, args.dim, args.clusters, args.sigma_max, args.seed)
    ds = gmm_generate(spec)
    os.makedirs(args.out, exist_ok=True)
    io.write_matrix(os.path.join(args.out, "features.skmm"), ds.features)
    io.write_matrix(os.path.join(args.out, "labels.skmm"), ds.labels)
    meta = ds.metadata()
    meta["cluster_assignment"] = ds.cluster_assignment.tolist()
    meta["config"] = {"command": "synth", **vars_for_config(args)}
    io.dump_json(meta, os.path.join(args.out, "meta.json"))
    log.info("wrote %d x %d features to %s", *ds.features.shape, args.out)
    return 0


def _method_params(args):
    if args.method == "skmm":
        params = {
            "m": args.m,
            "c_s": args.c_s,
            "iterations": args.iters,
            "learning_rate": args.lr,
            "optimizer": args.optimizer,
            "keep_best": args.keep_best,
            "sampling_mode": args.sampling_mode,
            "drop_null_eigendirections": args.drop_null,
            "sketch_kind": args.sketch,
            "sketch_sparsity": args.sparsity,
        }
        return {k: v for k, v in params.items() if v is not None}
    if args.method == "t-leverage" and args.rank is not None:
        return {"k": args.rank}
    if args.method == "r-leverage" and args.rho is not None:
        return {"rho": args.rho}
    return {}


def cmd_select(args):
    F = io.read_matrix(args.inp)
    params = _method_params(args)
    sel = run_selector(args.method, F, args.n, args.seed, params)
    config = {
        "command": "select",
        "input": args.inp,
        "method": args.method,
        "n": args.n,
        "seed": args.seed,
        "params": resolved_params(args.method, params),
    }
    _write_or_print(io.dump_json(sel.to_dict(config)), args.out)
    return 0


def cmd_eval(args):
    sel = Selection.from_dict(io.load_json(args.selection))
    X = io.read_matrix(args.data)
    y = io.read_vector(args.labels)
    if X.shape[0] != y.size:
        raise InvalidArgument("feature and label row counts differ")
    if sel.indices.size and (sel.indices.min() < 0 or sel.indices.max() >= X.shape[0]):
        raise InvalidArgument("selection indices out of range for the data")
    grid = parse_grid_arg(args.grid)
    X_S, y_S = X[sel.indices], y[sel.indices]
    cv = cv_grid_search(X_S, y_S, grid, args.folds, args.cv_seed)
    model = ridge_fit(X_S, y_S, cv["best_alpha"])
    report = {
        "empirical_risk": empirical_risk(model, X, y),
        "chosen_alpha": cv["best_alpha"],
        "cv_grid": [[a, l] for a, l in cv["cv_grid"]],
        "solve_route": model.solve_route,
        "method": sel.method,
        "n": sel.n,
        "seed": sel.seed,
    }
    if args.diagnostics:
        op = build_gaussian_sketch(X.shape[1], args.sketch_m, args.sketch_seed)
        report["diagnostics"] = tradeoff_diagnostics(
            apply_sketch(X, op), sel.indices, args.k, args.c_s_probe, features=X
        )
    report["config"] = {"command": "eval", **vars_for_config(args), "grid": grid}
    _write_or_print(io.dump_json(report), args.out)
    return 0


def cmd_bench(args):
    overrides = {"jobs": args.jobs, "output": os.path.abspath(args.out) if args.out else None}
    plan = bench.load_plan(args.plan, overrides)
    rows, cells, full = bench.run_bench(plan)
    bench.write_outputs(plan, rows, cells, full)
    sys.stdout.write(bench.format_csv(rows))
    return 0


def vars_for_config(args):
    skip = {"func", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def build_parser():
    p = _Parser(prog="skmm", description="Coreset selection by sketchy moment matching and baselines.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="generate the Gaussian-mixture benchmark")
    s.add_argument("--samples", "-N", type=int, default=2000)
    s.add_argument("--dim", "-r", type=int, default=2400)
    s.add_argument("--clusters", type=int, default=8)
    s.add_argument("--sigma-max", type=float, default=0.04)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("select", help="select a coreset")
    s.add_argument("--method", required=True, choices=METHODS)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--in", dest="inp", required=True, help="feature/gradient matrix (.skmm or CSV)")
    s.add_argument("--out", default=None, help="selection JSON (default: stdout)")
    g = s.add_argument_group("skmm")
    g.add_argument("--m", type=int, default=None, help="sketch dimension")
    g.add_argument("--c-s", type=float, default=None)
    g.add_argument("--iters", type=int, default=None)
    g.add_argument("--lr", type=float, default=None, help="learning rate (default: auto)")
    g.add_argument("--optimizer", choices=("plain-pgd", "adam"), default=None)
    g.add_argument("--sampling-mode", choices=("weighted-without-replacement", "top-n"), default=None)
    g.add_argument("--keep-best", action=argparse.BooleanOptionalAction, default=None)
    g.add_argument("--drop-null", action=argparse.BooleanOptionalAction, default=None)
    g.add_argument("--sketch", choices=("gaussian", "sparse-sign"), default=None)
    g.add_argument("--sparsity", type=int, default=None)
    g = s.add_argument_group("leverage")
    g.add_argument("--rank", type=int, default=None, help="truncation rank for t-leverage")
    g.add_argument("--rho", type=float, default=None, help="ridge parameter for r-leverage")
    s.set_defaults(func=cmd_select)

    s = sub.add_parser("eval", help="fit CV-tuned ridge on a selection and report full-data risk")
    s.add_argument("--selection", required=True)
    s.add_argument("--data", required=True)
    s.add_argument("--labels", required=True)
    s.add_argument("--grid", default="linspace:0.01:100:100")
    s.add_argument("--folds", type=int, default=DEFAULT_FOLDS)
    s.add_argument("--cv-seed", type=int, default=0)
    s.add_argument("--diagnostics", action="store_true")
    s.add_argument("--sketch-m", type=int, default=32)
    s.add_argument("--sketch-seed", type=int, default=0)
    s.add_argument("--k", type=int, default=None, help="truncation for the diagnostics")
    s.add_argument("--c-s-probe", type=float, default=1.0)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("bench", help="run a benchmark plan")
    s.add_argument("plan")
    s.add_argument("--jobs", type=int, default=None)
    s.add_argument("--out", default=None, help="CSV path (overrides the plan)")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except NumericDomainError as exc:
        print(f"skmm: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidArgument, OSError, KeyError) as exc:
        print(f"skmm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
