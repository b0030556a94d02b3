"""Command-line front end: ``kfpls simulate|fit|predict|cv|benchmark|tecator``.

Every command writes a ``key=value`` run manifest next to its output.  Flags
override values from an optional ``--config`` JSON file.  Errors are reported
on stderr as ``kfpls: error[<category>]: <message>`` with these exit codes:

    2  config     invalid flags or parameter values
    3  structural mismatched grids, shapes or row counts
    4  numerical  rank exhaustion, singular system, no convergence, undefined metric
    5  parse      malformed input file
    6  io         missing or unwritable file
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .benchmark import run_benchmark, run_random_splits
from .errors import ConfigError, KfplsError
from .files import (
    default_threads,
    load_dataset,
    load_model,
    load_spectra,
    save_dataset,
    save_model,
    write_column,
    write_manifest,
)
from .kernel import KernelSpec
from .kpls import FitConfig, fit
from .metrics import evaluate
from .simgen import ScenarioSpec, generate
from .tuning import DEFAULT_GAMMA_GRID, DEFAULT_Q_GRID, CvPlan, grid_search

EXIT_IO = 6


def _float_list(text):
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _pair(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected Q,GAMMA")
    try:
        return int(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError("expected Q,GAMMA")


def _add_cv_flags(p):
    p.add_argument("--folds", type=int, default=5, help="number of CV folds (default 5)")
    p.add_argument("--cv-seed", type=int, default=0, help="fold assignment seed")
    p.add_argument("--q-grid", type=_int_list, default=DEFAULT_Q_GRID,
                   help="candidate component counts, comma-separated")
    p.add_argument("--gamma-grid", type=_float_list, default=DEFAULT_GAMMA_GRID,
                   help="candidate bandwidths, comma-separated")


def _add_kernel_flags(p):
    p.add_argument("--kernel", choices=("gaussian", "linear"), default="gaussian")


def _add_common(p):
    p.add_argument("--config", help="JSON file of flag values; explicit flags take precedence")
    p.add_argument("--threads", type=int, default=None,
                   help="worker count (default: available CPUs)")
    p.add_argument("--manifest", help="manifest path (default: next to the output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kfpls", description="Kernel functional PLS regression")
    parser.add_argument("--version", action="version", version=f"kfpls {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a simulated train/test dataset")
    p.add_argument("--scenario", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--case", type=int, default=1)
    p.add_argument("--n-train", type=int, default=200)
    p.add_argument("--n-test", type=int, default=500)
    p.add_argument("--noise-sd", type=float, default=0.05)
    p.add_argument("--grid-size", type=int, default=101)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    _add_common(p)

    p = sub.add_parser("fit", help="fit a model on a dataset directory")
    p.add_argument("--data", required=True)
    p.add_argument("--q", type=int, default=None, help="number of components")
    p.add_argument("--gamma", type=float, default=None, help="gaussian bandwidth")
    p.add_argument("--auto", action="store_true", help="select q and gamma by cross-validation")
    p.add_argument("--init", choices=("response", "random"), default="response")
    p.add_argument("--init-seed", type=int, default=0)
    p.add_argument("--out", required=True, help="model file")
    _add_kernel_flags(p)
    _add_cv_flags(p)
    _add_common(p)

    p = sub.add_parser("predict", help="predict responses with a fitted model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="predictions CSV")
    _add_common(p)

    p = sub.add_parser("cv", help="cross-validate the (q, gamma) grid")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True, help="score table CSV")
    _add_kernel_flags(p)
    _add_cv_flags(p)
    _add_common(p)

    p = sub.add_parser("benchmark", help="Monte Carlo study of a simulation scenario")
    p.add_argument("--scenario", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--case", type=int, default=1)
    p.add_argument("--n-train", type=int, default=200)
    p.add_argument("--n-test", type=int, default=500)
    p.add_argument("--noise-sd", type=float, default=0.05)
    p.add_argument("--grid-size", type=int, default=101)
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="master seed; replicate r uses seed + r")
    p.add_argument("--fixed-params", type=_pair, default=None, metavar="Q,GAMMA",
                   help="skip CV and use these parameters")
    p.add_argument("--replicates-out", help="optional per-replicate CSV")
    p.add_argument("--out", required=True, help="summary CSV")
    _add_kernel_flags(p)
    _add_cv_flags(p)
    _add_common(p)

    p = sub.add_parser("tecator", help="random-split evaluation on a spectra dataset")
    p.add_argument("--path", required=True, help="spectra table or dataset directory")
    p.add_argument("--layout", choices=("npfda", "csv"), default="npfda")
    p.add_argument("--response-column", type=int, default=None,
                   help="0-based response column (default: right after the spectrum)")
    p.add_argument("--n-points", type=int, default=100, help="spectrum columns per row")
    p.add_argument("--splits", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="master seed; split i uses seed + i")
    p.add_argument("--fixed-params", type=_pair, default=None, metavar="Q,GAMMA",
                   help="skip per-split CV and use these parameters")
    p.add_argument("--replicates-out", help="optional per-split CSV")
    p.add_argument("--out", required=True, help="summary CSV")
    _add_kernel_flags(p)
    _add_cv_flags(p)
    _add_common(p)
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    args = parser.parse_args(argv)
    if not known.config:
        return args
    try:
        with open(known.config) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{known.config}: invalid JSON ({exc.msg})") from None
    if not isinstance(cfg, dict):
        raise ConfigError(f"{known.config}: expected a JSON object")
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    valid = {a.dest for a in subparser._actions}
    unknown = sorted(set(k.replace("-", "_") for k in cfg) - valid)
    if unknown:
        raise ConfigError(f"{known.config}: unknown keys {unknown}")
    converted = {}
    for action in subparser._actions:
        for key in (action.dest, action.dest.replace("_", "-")):
            if key in cfg:
                v = cfg[key]
                if isinstance(v, list):
                    v = ",".join(str(x) for x in v)
                if action.type is not None and isinstance(v, str):
                    v = action.type(v)
                converted[action.dest] = v
    subparser.set_defaults(**converted)
    return parser.parse_args(argv)


def _plan(args) -> CvPlan:
    return CvPlan(args.folds, args.cv_seed, args.q_grid, args.gamma_grid, args.kernel)


def _manifest_path(args, default):
    return Path(args.manifest) if args.manifest else default


def _effective(args) -> dict:
    out = {"version": __version__}
    for k, v in vars(args).items():
        if k in ("config", "manifest"):
            continue
        if v is None:
            continue
        out[k] = v
    return out


def cmd_simulate(args):
    spec = ScenarioSpec(args.scenario, args.case, args.n_train, args.n_test, args.noise_sd,
                        args.grid_size, args.seed)
    data = generate(spec)
    out = Path(args.out)
    save_dataset(out / "train", data.train, data.truth_train)
    save_dataset(out / "test", data.test, data.truth_test)
    for name, ds, truth in (("train", data.train, data.truth_train), ("test", data.test, data.truth_test)):
        noise = ds.responses - truth
        print(f"{name}: n={len(ds)} truth mean={truth.mean():.4f} sd={truth.std(ddof=1):.4f} "
              f"noise sd={noise.std(ddof=1):.4f}")
    write_manifest(_manifest_path(args, out / "manifest.txt"), _effective(args))


def _fit_params(args, ds):
    if args.auto:
        cv = grid_search(ds, _plan(args), n_jobs=args.threads)
        print(f"cv selected q={cv.best_q} gamma={cv.best_gamma!r} score={cv.best_score:.6g}")
        return cv.best_q, cv.best_gamma
    if args.q is None or (args.kernel == "gaussian" and args.gamma is None):
        raise ConfigError("fit needs --q and --gamma (or --auto)")
    return args.q, args.gamma if args.gamma is not None else 1.0


def cmd_fit(args):
    ds = load_dataset(args.data, require_responses=True)
    q, gamma = _fit_params(args, ds)
    model = fit(ds, KernelSpec(args.kernel, gamma), FitConfig(q, init=args.init, seed=args.init_seed))
    save_model(args.out, model)
    rep = evaluate(model.fitted_values(), ds.responses)
    print(f"fitted q={q} gamma={gamma!r}: train RASE={rep.rase:.6g} ARPE={rep.arpe:.6g}")
    eff = _effective(args)
    eff.update(selected_q=q, selected_gamma=float(gamma))
    write_manifest(_manifest_path(args, Path(str(args.out) + ".manifest.txt")), eff)


def cmd_predict(args):
    model = load_model(args.model)
    ds = load_dataset(args.data)
    yhat = model.predict(ds)
    write_column(args.out, yhat, "prediction")
    eff = _effective(args)
    if ds.responses is not None:
        rep = evaluate(yhat, ds.responses)
        print(f"RASE={rep.rase:.6g} ARPE={rep.arpe:.6g}")
        eff.update(rase=rep.rase, arpe=rep.arpe)
    write_manifest(_manifest_path(args, Path(str(args.out) + ".manifest.txt")), eff)


def cmd_cv(args):
    ds = load_dataset(args.data, require_responses=True)
    cv = grid_search(ds, _plan(args), n_jobs=args.threads)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["q", "gamma", "cv_score", "selected"])
        for i, q in enumerate(cv.q_grid):
            for j, g in enumerate(cv.gamma_grid):
                chosen = int(q == cv.best_q and g == cv.best_gamma)
                w.writerow([q, repr(g), repr(float(cv.scores[i, j])), chosen])
    print(f"selected q={cv.best_q} gamma={cv.best_gamma!r} score={cv.best_score:.6g}")
    eff = _effective(args)
    eff.update(selected_q=cv.best_q, selected_gamma=cv.best_gamma, selected_score=cv.best_score)
    write_manifest(_manifest_path(args, Path(str(args.out) + ".manifest.txt")), eff)


SUMMARY_HEADER = ["label", "n_train", "method", "train_rase", "train_arpe", "test_rase",
                  "test_arpe", "n_runs", "n_failed"]


def _write_summary(path, label, n_train, result):
    tr = result.train.format()
    te = result.test.format()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        w.writerow([label, n_train, "KFPLS", tr[0], tr[1], te[0], te[1],
                    result.test.n_runs, result.n_failed])


def _write_replicates(path, result):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "seed", "q", "gamma", "train_rase", "train_arpe", "test_rase", "test_arpe"])
        for r in result.replicates:
            w.writerow([r.index, r.seed, r.q, repr(r.gamma), repr(r.train.rase), repr(r.train.arpe),
                        repr(r.test.rase), repr(r.test.arpe)])


def _report(args, label, n_train, result):
    _write_summary(args.out, label, n_train, result)
    if args.replicates_out:
        _write_replicates(args.replicates_out, result)
    if result.n_failed:
        print(f"warning: {result.n_failed} run(s) failed and were excluded", file=sys.stderr)
    tr, te = result.train.format(), result.test.format()
    print(f"{label} n={n_train} KFPLS train RASE {tr[0]} ARPE {tr[1]} | test RASE {te[0]} ARPE {te[1]}")
    eff = _effective(args)
    eff.update(
        n_runs=result.test.n_runs, n_failed=result.n_failed,
        test_rase_mean=result.test.mean_rase, test_rase_sd=result.test.sd_rase,
    )
    write_manifest(_manifest_path(args, Path(str(args.out) + ".manifest.txt")), eff)


def cmd_benchmark(args):
    spec = ScenarioSpec(args.scenario, args.case, args.n_train, args.n_test, args.noise_sd,
                        args.grid_size, args.seed)
    result = run_benchmark(spec, args.replicates, _plan(args), n_jobs=args.threads,
                           fixed=args.fixed_params)
    _report(args, f"S{args.scenario}C{args.case}", args.n_train, result)


def cmd_tecator(args):
    ds = load_spectra(args.path, args.layout, args.response_column, args.n_points)
    result = run_random_splits(ds, args.splits, args.seed, _plan(args), n_jobs=args.threads,
                               fixed=args.fixed_params)
    _report(args, "tecator", result.replicates[0].train.n, result)


COMMANDS = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "predict": cmd_predict,
    "cv": cmd_cv,
    "benchmark": cmd_benchmark,
    "tecator": cmd_tecator,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="kfpls: %(levelname)s: %(message)s")
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _apply_config(parser, argv)
        if args.threads is None:
            args.threads = default_threads()
        COMMANDS[args.command](args)
    except KfplsError as exc:
        print(f"kfpls: error[{exc.category}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"kfpls: error[io]: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
