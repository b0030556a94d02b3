"""On-disk formats: dataset CSV directories, model files, manifests, and
Tecator-style spectra tables.

Dataset directory layout::

    grid.csv    one row of grid points per predictor
    x1.csv ...  one file per predictor, n rows x G_j columns
    y.csv       n rows, one response per row (optional)
    truth.csv   n rows of noise-free responses (simulated data only)

A header row is optional in every CSV file; it is detected by a non-numeric
first cell.  Numbers are written with ``repr`` so files round-trip exactly.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

import numpy as np

from .errors import ParseError, StructuralError
from .fdata import FunctionalDataset, Grid
from .kernel import KernelSpec, gram
from .kpls import FitConfig, KfplsModel

MODEL_FORMAT = "kfpls-model"
MODEL_FORMAT_VERSION = 1


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_matrix(path, delimiter=",") -> np.ndarray:
    """Read a rectangular numeric table, skipping an optional header row."""
    path = Path(path)
    rows = []
    header_seen = False
    with open(path, newline="") as fh:
        if delimiter is None:
            lines = ((i, line.split()) for i, line in enumerate(fh, 1))
        else:
            lines = enumerate(csv.reader(fh, delimiter=delimiter), 1)
        for lineno, cells in lines:
            cells = [c.strip() for c in cells]
            if not cells or all(c == "" for c in cells):
                continue
            if not rows and not header_seen and not _is_number(cells[0]):
                header_seen = True
                continue
            try:
                row = [float(c) for c in cells]
            except ValueError:
                raise ParseError("non-numeric cell", path=path, line=lineno) from None
            if rows and len(row) != len(rows[0]):
                raise ParseError(
                    f"expected {len(rows[0])} columns, found {len(row)}", path=path, line=lineno
                )
            rows.append(row)
    if not rows:
        raise ParseError("no data rows", path=path)
    return np.array(rows, dtype=float)


def write_matrix(path, values, header=None):
    values = np.atleast_2d(np.asarray(values, dtype=float))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header is not None:
            w.writerow(header)
        for row in values:
            w.writerow([repr(float(v)) for v in row])


def write_column(path, values, name):
    write_matrix(path, np.asarray(values, dtype=float).reshape(-1, 1), header=[name])


def read_column(path) -> np.ndarray:
    m = read_matrix(path)
    if m.shape[1] != 1:
        raise ParseError(f"expected a single column, found {m.shape[1]}", path=path)
    return m[:, 0]


def save_dataset(directory, ds: FunctionalDataset, truth=None):
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    with open(d / "grid.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for g in ds.grids:
            w.writerow([repr(float(v)) for v in g.points])
    for j, v in enumerate(ds.values, 1):
        write_matrix(d / f"x{j}.csv", v)
    if ds.responses is not None:
        write_column(d / "y.csv", ds.responses, "y")
    if truth is not None:
        write_column(d / "truth.csv", truth, "truth")


def load_dataset(directory, require_responses=False) -> FunctionalDataset:
    d = Path(directory)
    if not d.is_dir():
        raise FileNotFoundError(f"dataset directory {d} does not exist")
    grids = _read_grid_rows(d / "grid.csv")
    values = []
    for j in range(1, len(grids) + 1):
        path = d / f"x{j}.csv"
        if not path.exists():
            raise ParseError(f"missing predictor file x{j}.csv", path=d)
        m = read_matrix(path)
        if m.shape[1] != len(grids[j - 1]):
            raise StructuralError(
                f"{path}: {m.shape[1]} columns but grid row {j} has {len(grids[j - 1])} points"
            )
        values.append(m)
    if len({v.shape[0] for v in values}) != 1:
        raise StructuralError("predictor files have different row counts")
    y = None
    if (d / "y.csv").exists():
        y = read_column(d / "y.csv")
        if y.size != values[0].shape[0]:
            raise StructuralError(f"y.csv has {y.size} rows, predictors have {values[0].shape[0]}")
    elif require_responses:
        raise ParseError("missing y.csv", path=d)
    return FunctionalDataset(grids, values, y)


def _read_grid_rows(path) -> list:
    # rows may differ in length, so read without the rectangular check
    path = Path(path)
    if not path.exists():
        raise ParseError("missing grid.csv", path=path.parent)
    grids = []
    with open(path, newline="") as fh:
        for lineno, cells in enumerate(csv.reader(fh), 1):
            cells = [c.strip() for c in cells if c.strip() != ""]
            if not cells:
                continue
            if not grids and not _is_number(cells[0]):
                continue
            try:
                pts = [float(c) for c in cells]
            except ValueError:
                raise ParseError("non-numeric grid point", path=path, line=lineno) from None
            try:
                grids.append(Grid(pts))
            except StructuralError as exc:
                raise ParseError(str(exc), path=path, line=lineno) from None
    if not grids:
        raise ParseError("no grid rows", path=path)
    return grids


def _matrix(a):
    return [[float(x) for x in row] for row in np.asarray(a)]


def model_to_dict(model: KfplsModel) -> dict:
    cfg = model.config
    return {
        "format": MODEL_FORMAT,
        "format_version": MODEL_FORMAT_VERSION,
        "kernel": {"family": model.spec.family, "gamma": float(model.spec.gamma)},
        "n_components": model.n_components,
        "fit_config": {"tol": cfg.tol, "max_iter": cfg.max_iter, "init": cfg.init, "seed": cfg.seed},
        "y_mean": float(model.y_mean),
        "T": _matrix(model.T),
        "U": _matrix(model.U),
        "coef": [float(c) for c in model.coef],
        "train": {
            "grids": [[float(x) for x in g.points] for g in model.train.grids],
            "values": [_matrix(v) for v in model.train.values],
            "responses": [float(y) for y in model.train.responses],
        },
    }


def model_from_dict(doc: dict) -> KfplsModel:
    if doc.get("format") != MODEL_FORMAT:
        raise ParseError("not a kfpls model file")
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ParseError(f"unsupported model format version {version!r}")
    try:
        spec = KernelSpec(doc["kernel"]["family"], doc["kernel"]["gamma"])
        fc = doc["fit_config"]
        cfg = FitConfig(doc["n_components"], fc["tol"], fc["max_iter"], fc["init"], fc["seed"])
        tr = doc["train"]
        train = FunctionalDataset(tr["grids"], [np.array(v) for v in tr["values"]], tr["responses"])
        T = np.array(doc["T"], dtype=float)
        U = np.array(doc["U"], dtype=float)
        coef = np.array(doc["coef"], dtype=float)
        y_mean = float(doc["y_mean"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"model file is missing or has a malformed field: {exc}") from None
    n = len(train)
    if T.shape != (n, cfg.n_components) or U.shape != T.shape or coef.shape != (n,):
        raise ParseError("model arrays have inconsistent shapes")
    G = gram(train, spec)
    for a in (T, U, coef):
        a.setflags(write=False)
    return KfplsModel(spec, T, U, G.raw, G.centered, coef, y_mean, train, cfg)


def save_model(path, model: KfplsModel):
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=1)
        fh.write("\n")


def load_model(path) -> KfplsModel:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, path=path, line=exc.lineno) from None
    return model_from_dict(doc)


def write_manifest(path, entries: dict):
    """Write ``key=value`` lines, keys sorted."""
    with open(path, "w") as fh:
        for k in sorted(entries):
            v = entries[k]
            if isinstance(v, (list, tuple)):
                v = ",".join(repr(x) if isinstance(x, float) else str(x) for x in v)
            elif isinstance(v, float):
                v = repr(v)
            fh.write(f"{k}={v}\n")


def read_manifest(path) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line:
                k, _, v = line.partition("=")
                out[k] = v
    return out


def load_spectra(path, layout="npfda", response_column=None, n_points=100,
                 wavelengths=(850.0, 1050.0)) -> FunctionalDataset:
    """Load a spectra table with one subject per row.

    ``layout="npfda"`` reads whitespace-separated rows; ``"csv"`` reads
    comma-separated rows with an optional header.  Either way the first
    ``n_points`` columns are the spectrum and ``response_column`` (default:
    the column right after the spectrum) is the response.  A directory path is
    read as a dataset directory.  The wavelength axis is rescaled to [0, 1].
    """
    from .fdata import rescale_domain

    path = Path(path)
    if path.is_dir():
        return rescale_domain(load_dataset(path, require_responses=True))
    if layout not in ("npfda", "csv"):
        raise ParseError(f"unknown layout {layout!r}")
    m = read_matrix(path, delimiter=None if layout == "npfda" else ",")
    col = n_points if response_column is None else response_column
    if m.shape[1] <= max(col, n_points - 1):
        raise ParseError(
            f"rows have {m.shape[1]} columns; need {n_points} spectrum columns plus a response",
            path=path,
        )
    grid = Grid(np.linspace(wavelengths[0], wavelengths[1], n_points))
    ds = FunctionalDataset([grid], [m[:, :n_points]], m[:, col])
    return rescale_domain(ds)


def default_threads() -> int:
    return os.cpu_count() or 1
