"""CSV and JSON persistence with config hashes.

Every CSV written here starts with a ``# config_hash: <hex>`` comment line,
followed by a fixed header.  Floats are written with 17 significant digits,
which round-trips IEEE doubles exactly.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cadlag import GridPath, PathOfPaths
from .errors import DataError, SchemaError
from .prm import PointSet, SheetGrid

FMT = "%.17g"
HASH_PREFIX = "# config_hash: "
SCHEMA_VERSION = 1


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_json_default)


def _json_default(o):
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Path):
        return str(o)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()[:16]


def _write_text(path: Path, text: str):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as f:
        f.write(text)


def _rows_to_text(header: str, rows: np.ndarray, chash: str) -> str:
    buf = io.StringIO()
    buf.write(f"{HASH_PREFIX}{chash}\n{header}\n")
    np.savetxt(buf, rows, fmt=FMT, delimiter=",")
    return buf.getvalue()


def write_json(path, meta: dict):
    _write_text(Path(path), json.dumps(meta, sort_keys=True, indent=2, default=_json_default) + "\n")


def read_json(path) -> dict:
    with open(path) as f:
        return json.load(f)


def sidecar(path) -> Path:
    return Path(path).with_suffix(".json")


# ---------------------------------------------------------------------------
# sheets and paths

def sheet_rows(values: np.ndarray, T_max: float = 1.0) -> np.ndarray:
    n, m = values.shape[0] - 1, values.shape[1] - 1
    t = T_max * np.arange(n + 1) / n
    s = np.arange(m + 1) / m
    tt, ss = np.meshgrid(t, s, indexing="ij")
    return np.column_stack([tt.ravel(), ss.ravel(), values.ravel()])


def write_sheet(path, sheet: SheetGrid, chash: str, meta: Optional[dict] = None):
    """Long-format CSV (t,s,value) plus a JSON sidecar."""
    path = Path(path)
    _write_text(path, _rows_to_text("t,s,value", sheet_rows(sheet.values, sheet.T_max), chash))
    m = {"kind": "sheet", "schema": SCHEMA_VERSION, "config_hash": chash, "n": sheet.n, "m": sheet.m,
         "T_max": sheet.T_max, "centered": sheet.centered, "rows": (sheet.n + 1) * (sheet.m + 1)}
    m.update(sheet.meta)
    if meta:
        m.update(meta)
    write_json(sidecar(path), m)


def write_path(path, x: GridPath, chash: str = "none"):
    rows = np.column_stack([np.arange(x.m + 1) / x.m, x.values])
    _write_text(Path(path), _rows_to_text("s,value", rows, chash))


def write_path_of_paths(path, x: PathOfPaths, chash: str = "none"):
    _write_text(Path(path), _rows_to_text("t,s,value", sheet_rows(x.values, x.horizon), chash))


def gridpath_envelope(x: GridPath) -> dict:
    return {"kind": "grid_path", "m": x.m, "values": [float(v) for v in x.values]}


def gridpath_from_envelope(d: dict) -> GridPath:
    if d.get("kind") != "grid_path":
        raise SchemaError("envelope kind must be 'grid_path'")
    x = GridPath(np.array(d["values"], dtype=float))
    if x.m != d["m"]:
        raise SchemaError("envelope resolution does not match its values")
    return x


def _read_lines(path) -> Tuple[Optional[str], List[str]]:
    with open(path, newline="") as f:
        lines = f.read().splitlines()
    chash = None
    body = []
    for line in lines:
        if line.startswith(HASH_PREFIX):
            chash = line[len(HASH_PREFIX):].strip()
        elif line.startswith("#") or not line.strip():
            continue
        else:
            body.append(line)
    return chash, body


def read_hash(path) -> Optional[str]:
    return _read_lines(path)[0]


def _parse_numeric(rows: List[List[str]], first_line: int, ncol: int, path) -> np.ndarray:
    out = np.empty((len(rows), ncol))
    for i, row in enumerate(rows):
        if len(row) != ncol:
            raise SchemaError(f"{path}: line {first_line + i}: expected {ncol} fields, found {len(row)}")
        for j, cell in enumerate(row):
            try:
                out[i, j] = float(cell)
            except ValueError:
                raise SchemaError(f"{path}: line {first_line + i}, column {j + 1}: "
                                  f"not a number: {cell!r}") from None
    if not np.all(np.isfinite(out)):
        bad = np.argwhere(~np.isfinite(out))[0]
        raise SchemaError(f"{path}: line {first_line + bad[0]}, column {bad[1] + 1}: value is not finite")
    return out


def _load_table(path):
    """Returns (hash, header fields, data, line number of first data row)."""
    with open(path, newline="") as f:
        raw = f.read().splitlines()
    chash, header, rows, first = None, None, [], None
    for lineno, line in enumerate(raw, start=1):
        if line.startswith(HASH_PREFIX):
            chash = line[len(HASH_PREFIX):].strip()
            continue
        if line.startswith("#") or not line.strip():
            continue
        fields = next(csv.reader([line]))
        if header is None:
            header = [h.strip() for h in fields]
            continue
        if first is None:
            first = lineno
        rows.append((lineno, fields))
    if header is None:
        raise SchemaError(f"{path}: file has no header")
    data = np.empty((len(rows), len(header)))
    for i, (lineno, fields) in enumerate(rows):
        data[i] = _parse_numeric([fields], lineno, len(header), path)[0]
    return chash, header, data


def _grid_from_long(data: np.ndarray, path) -> Tuple[np.ndarray, float]:
    t = np.unique(data[:, 0])
    s = np.unique(data[:, 1])
    if data.shape[0] != t.size * s.size:
        raise SchemaError(f"{path}: long-format rows do not form a full t x s grid")
    vals = data[:, 2].reshape(t.size, s.size)
    return vals, float(t[-1])


def read_sheet(path) -> Tuple[SheetGrid, Optional[str]]:
    chash, header, data = _load_table(path)
    if header != ["t", "s", "value"]:
        raise SchemaError(f"{path}: expected header t,s,value, found {','.join(header)}")
    vals, T_max = _grid_from_long(data, path)
    meta = {}
    sc = sidecar(path)
    if sc.exists():
        meta = read_json(sc)
    return SheetGrid(vals, T_max if T_max > 0 else 1.0, bool(meta.get("centered", False)), meta), chash


def read_path_like(path):
    """A GridPath (header s,value) or a PathOfPaths (header t,s,value)."""
    chash, header, data = _load_table(path)
    if header == ["s", "value"]:
        return GridPath(data[:, 1]), chash
    if header == ["t", "s", "value"]:
        vals, T_max = _grid_from_long(data, path)
        return PathOfPaths(vals, T_max if T_max > 0 else 1.0), chash
    raise SchemaError(f"{path}: expected header 's,value' or 't,s,value', found {','.join(header)}")


# ---------------------------------------------------------------------------
# point sets

def write_points(path, pts: PointSet, chash: str, meta: Optional[dict] = None):
    """Atoms as T,R,annulus,path plus a companion CSV holding W row by row."""
    path = Path(path)
    idx = np.arange(len(pts))
    rows = np.column_stack([pts.T, pts.R, pts.annulus, idx])
    _write_text(path, _rows_to_text("T,R,annulus,path", rows, chash))
    wpath = path.with_name(path.stem + "_paths.csv")
    m = pts.W.shape[1] - 1
    header = ",".join(f"s{l}" for l in range(m + 1))
    _write_text(wpath, _rows_to_text(header, pts.W.reshape(len(pts), m + 1), chash))
    d = {"kind": "point_set", "schema": SCHEMA_VERSION, "config_hash": chash, "T_max": pts.T_max,
         "eps": pts.eps, "c": pts.c, "alpha": pts.alpha, "count": len(pts), "paths_file": wpath.name}
    if meta:
        d.update(meta)
    write_json(sidecar(path), d)


def read_points(path) -> PointSet:
    path = Path(path)
    meta = read_json(sidecar(path))
    _, header, data = _load_table(path)
    if header != ["T", "R", "annulus", "path"]:
        raise SchemaError(f"{path}: unexpected header {','.join(header)}")
    _, _, W = _load_table(path.with_name(meta["paths_file"]))
    W = W[data[:, 3].astype(int)] if len(data) else W.reshape(0, W.shape[1] if W.ndim == 2 else 1)
    return PointSet(meta["T_max"], meta["eps"], meta["c"], meta["alpha"], data[:, 0], data[:, 1],
                    W, data[:, 2].astype(np.intp))


# ---------------------------------------------------------------------------
# panels

def read_panel_csv(path) -> Tuple[np.ndarray, List[str]]:
    """Paths as columns: returns (paths x grid points, column names).

    A header row is optional; without it columns are named ``column 1`` etc.
    Ragged rows and non-numeric cells raise SchemaError naming the line.
    """
    with open(path, newline="") as f:
        raw = f.read().splitlines()
    rows = []
    names = None
    width = None
    for lineno, line in enumerate(raw, start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = [c.strip() for c in next(csv.reader([line]))]
        if names is None and width is None:
            try:
                [float(c) for c in fields]
            except ValueError:
                names = fields
                width = len(fields)
                continue
        if width is None:
            width = len(fields)
        if len(fields) != width:
            raise SchemaError(f"{path}: line {lineno}: ragged row with {len(fields)} fields, expected {width}")
        rows.append((lineno, fields))
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    data = np.empty((len(rows), width))
    for i, (lineno, fields) in enumerate(rows):
        data[i] = _parse_numeric([fields], lineno, width, path)[0]
    if data.shape[0] < 2:
        raise SchemaError(f"{path}: a path needs at least two grid points (m >= 1)")
    if names is None:
        names = [f"column {j + 1}" for j in range(width)]
    return data.T.copy(), names


def write_panel_csv(path, paths: np.ndarray, names: Sequence[str], chash: str):
    P = np.asarray(paths, dtype=float)
    _write_text(Path(path), _rows_to_text(",".join(names), P.T, chash))


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def output_dir(cli_value: Optional[str], config_value: Optional[str] = None) -> Path:
    """--out flag, then DLEVY_OUT, then the config file, then ./out."""
    if cli_value:
        return Path(cli_value)
    env = os.environ.get("DLEVY_OUT")
    if env:
        return Path(env)
    return Path(config_value or "out")


def check_hashes(paths: Sequence) -> str:
    hashes = {str(p): read_hash(p) for p in paths}
    distinct = set(hashes.values())
    if len(distinct) > 1:
        listing = ", ".join(f"{p}={h}" for p, h in hashes.items())
        raise DataError(f"inputs come from different configurations: {listing}")
    return distinct.pop() if distinct else None
