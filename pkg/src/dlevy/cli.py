"""``dlevy`` command-line entry point.

Verbs: simulate-sheet, simulate-prm, verify, distance, ingest, hill.
Settings come from built-in defaults, then ``--config`` (JSON), then flags.
Every output file carries the hash of the resolved configuration.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import cadlag as cd
from . import io
from .errors import DLevyError, InvalidParams
from .partial_sums import example1_sheet, example2_sheet
from .prm import build_sheet_prm, sample_ladder
from .rv import RVLaw, check_construction_alpha, hill_estimator, sample
from .seeds import LAW, as_seed
from .spectral import KINDS, SpectralSampler, normalize_panel

CONSTRUCTIONS = ("example1", "prm", "example2")
METRICS = ("sup", "j1", "j1_0", "d_D", "rho_D", "d_inf")


@dataclass
class RunConfig:
    verb: str
    construction: str = "example1"
    law: dict = field(default_factory=lambda: {"kind": "pareto", "alpha": 1.5})
    spectral: dict = field(default_factory=lambda: {"kind": "constant_one"})
    n: int = 400
    m: int = 250
    T_max: float = 1.0
    eps: float = 0.01
    c: float = 1.0
    K: int = 500
    seed: int = 0
    reps: Optional[int] = None
    out: Optional[str] = None
    threads: int = 1

    def validate(self):
        """Schema checks for the verb; runs before any sampling."""
        if self.threads < 1:
            raise InvalidParams("--threads must be >= 1")
        if self.reps is not None and self.reps < 1:
            raise InvalidParams("--reps must be >= 1")
        if self.seed < 0:
            raise InvalidParams("--seed must be non-negative")
        if self.verb not in ("simulate-sheet", "simulate-prm"):
            return
        if self.construction not in CONSTRUCTIONS:
            raise InvalidParams(f"unknown construction {self.construction!r}; choose from {', '.join(CONSTRUCTIONS)}")
        if self.n < 1 or self.m < 1:
            raise InvalidParams("grid sizes n and m must be >= 1")
        if not self.T_max > 0:
            raise InvalidParams("T_max must be positive")
        if self.construction == "example1" and self.verb == "simulate-sheet":
            law = RVLaw.from_config(self.law)
            check_construction_alpha(law.alpha, "the example1 double-sum sheet")
            return
        alpha = float(self.law.get("alpha", float("nan")))
        if not 0 < alpha < 2:
            raise InvalidParams("alpha must lie in (0, 2)")
        check_construction_alpha(alpha, f"the {self.construction} construction")
        if self.construction == "example2":
            if self.K < 1:
                raise InvalidParams("K must be >= 1")
            return
        if not self.eps > 0 or not self.c > 0:
            raise InvalidParams("eps and c must be positive")
        if self.spectral.get("kind") not in KINDS or self.spectral.get("kind") in ("user_paths", "size_biased_bm"):
            raise InvalidParams("spectral kind must be constant_one, signed_constant or geom_bm")

    def hashable(self) -> dict:
        d = asdict(self)
        for k in ("out", "threads", "reps"):
            d.pop(k)
        return d


def _spectral(cfg: RunConfig) -> SpectralSampler:
    s = cfg.spectral
    return SpectralSampler(s["kind"], cfg.m, p=float(s.get("p", 1.0)))


def build_sheet(cfg: RunConfig):
    if cfg.construction == "example1":
        return example1_sheet(RVLaw.from_config(cfg.law), cfg.n, cfg.m, cfg.seed)
    alpha = float(cfg.law["alpha"])
    if cfg.construction == "example2":
        return example2_sheet(alpha, cfg.K, cfg.n, cfg.m, cfg.seed)
    return build_sheet_prm(cfg.n, cfg.m, cfg.eps, cfg.c, alpha, _spectral(cfg), cfg.T_max, cfg.seed)


def simulate_sheet_files(config: dict, seed: int, out_dir) -> Path:
    """Library form of ``simulate-sheet``: returns the CSV path."""
    cfg = RunConfig("simulate-sheet", seed=seed, **config)
    cfg.validate()
    return _write_sheet(cfg, Path(out_dir))


def _write_sheet(cfg: RunConfig, out: Path) -> Path:
    chash = io.config_hash(cfg.hashable())
    sheet = build_sheet(cfg)
    path = out / f"sheet_{cfg.construction}_{chash}.csv"
    io.write_sheet(path, sheet, chash, {"config": cfg.hashable(), "seed": cfg.seed})
    return path


# ---------------------------------------------------------------------------
# verbs

def cmd_simulate_sheet(cfg: RunConfig, args) -> int:
    path = _write_sheet(cfg, io.output_dir(cfg.out))
    print(path)
    return 0


def cmd_simulate_prm(cfg: RunConfig, args) -> int:
    out = io.output_dir(cfg.out)
    chash = io.config_hash(cfg.hashable())
    alpha = float(cfg.law["alpha"])
    sp = _spectral(cfg)
    pts = sample_ladder(cfg.T_max, cfg.eps, cfg.c, alpha, sp, cfg.seed)
    ppath = out / f"points_{chash}.csv"
    io.write_points(ppath, pts, chash, {"config": cfg.hashable(), "spectral": sp.to_config()})
    sheet = build_sheet_prm(cfg.n, cfg.m, cfg.eps, cfg.c, alpha, sp, cfg.T_max, cfg.seed, points=pts)
    spath = out / f"sheet_prm_{chash}.csv"
    io.write_sheet(spath, sheet, chash, {"config": cfg.hashable()})
    print(ppath)
    print(spath)
    return 0


def cmd_verify(cfg: RunConfig, args) -> int:
    from .verify import run_suites
    if args.inputs:
        h = io.check_hashes(args.inputs)
        print(f"inputs share config hash {h}")
    names = args.suite or ["marginal"]
    report = run_suites(names, seed=cfg.seed, reps=cfg.reps)
    out = io.output_dir(cfg.out)
    stem = "report_" + "_".join(names)
    io.write_json(out / f"{stem}.json", report.to_dict())
    text = report.to_text()
    io._write_text(out / f"{stem}.txt", text + "\n")
    print(text)
    return 0 if report.passed else 1


def _metric_note(metric: str, max_step) -> str:
    if metric == "sup":
        return "exact"
    if max_step is None:
        return "exact minimax over lattice time changes"
    return f"upper bound: time-change segments limited to {max_step} grid steps"


def cmd_distance(cfg: RunConfig, args) -> int:
    x, hx = io.read_path_like(args.file_a)
    y, hy = io.read_path_like(args.file_b)
    metric = args.metric
    step = args.max_step
    if isinstance(x, cd.GridPath) != isinstance(y, cd.GridPath):
        raise InvalidParams("cannot compare a single path with a path-of-paths")
    if isinstance(x, cd.GridPath):
        if metric not in ("sup", "j1", "j1_0"):
            raise InvalidParams(f"metric {metric!r} needs path-of-paths files; use sup, j1 or j1_0")
        fn = {"sup": lambda a, b: cd.sup_norm(a - b), "j1": lambda a, b: cd.d_j1(a, b, step),
              "j1_0": lambda a, b: cd.d_j1_0(a, b, step)}[metric]
        xa, yb = cd.common_grid(x, y)
        val = fn(xa, yb)
    else:
        if x.values.shape[0] != y.values.shape[0] or x.horizon != y.horizon:
            raise InvalidParams("path-of-paths files must share the time grid")
        if x.m != y.m:
            L = cd.lcm_many([x.m, y.m])
            x = cd.PathOfPaths(cd.refine(x.values, L // x.m), x.horizon)
            y = cd.PathOfPaths(cd.refine(y.values, L // y.m), y.horizon)
        if metric == "sup":
            val = (x - y).norm()
        elif metric == "d_D":
            val = cd.d_big_d(x, y, step)
        elif metric == "rho_D":
            val = cd.rho_d(x, y, step)
        elif metric == "d_inf":
            val, tail = cd.d_infty(x, y, step)
            print(f"# truncation tail beyond the horizon <= {tail:.6g}")
        else:
            raise InvalidParams(f"metric {metric!r} applies to single paths; use sup, d_D, rho_D or d_inf")
    print(io.FMT % val)
    print(f"# {metric}: {_metric_note(metric, step)}")
    return 0


def cmd_ingest(cfg: RunConfig, args) -> int:
    P, names = io.read_panel_csv(args.panel)
    if args.normalize:
        P = normalize_panel(P, names)
    prov = {"source": str(args.panel), "source_sha256": io.file_sha256(args.panel), "normalized": bool(args.normalize),
            "paths": int(P.shape[0]), "m": int(P.shape[1] - 1), "columns": names}
    chash = io.config_hash(prov)
    out = io.output_dir(cfg.out) / f"panel_{chash}.csv"
    io.write_panel_csv(out, P, names, chash)
    io.write_json(io.sidecar(out), {"kind": "panel", "config_hash": chash, **prov})
    print(out)
    return 0


def cmd_hill(cfg: RunConfig, args) -> int:
    if args.panel:
        P, _ = io.read_panel_csv(args.panel)
        x = np.max(np.abs(P), axis=1)
    else:
        law = RVLaw.from_config(cfg.law)
        x = np.abs(sample(law, as_seed(cfg.seed).generator(LAW, 0), cfg.reps or 10_000))
    est = hill_estimator(x, args.k)
    print(io.FMT % est)
    return 0


VERBS = {"simulate-sheet": cmd_simulate_sheet, "simulate-prm": cmd_simulate_prm, "verify": cmd_verify,
         "distance": cmd_distance, "ingest": cmd_ingest, "hill": cmd_hill}


# ---------------------------------------------------------------------------
# argument parsing

def _law_flags(p):
    p.add_argument("--law", dest="law_kind", help="pareto, two_sided_pareto, frechet, burr or stable")
    p.add_argument("--alpha", type=float)
    for name in ("p", "a", "b", "sigma", "beta", "mu"):
        p.add_argument(f"--{name}", dest=f"law_{name}", type=float)


def _grid_flags(p):
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--T-max", dest="T_max", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--spectral", help="constant_one, signed_constant or geom_bm")
    p.add_argument("--spectral-p", dest="spectral_p", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dlevy", description="Simulate and verify D-valued Levy sheets.")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--config", help="JSON file with run settings")
    ap.add_argument("--out", help="output directory (else $DLEVY_OUT, then the config, then ./out)")
    ap.add_argument("--reps", type=int)
    ap.add_argument("--threads", type=int)
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("simulate-sheet", help="write a sheet grid as CSV plus JSON metadata")
    p.add_argument("--construction", choices=CONSTRUCTIONS)
    p.add_argument("--K", type=int, help="LePage terms (example2)")
    _law_flags(p)
    _grid_flags(p)

    p = sub.add_parser("simulate-prm", help="write PRM atoms and the resulting sheet")
    _law_flags(p)
    _grid_flags(p)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", action="append", help="suite name (repeatable); 'all' runs every suite")
    p.add_argument("--inputs", nargs="*", help="output files that must share one config hash")

    p = sub.add_parser("distance", help="distance between two path files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--metric", choices=METRICS, default="j1_0")
    p.add_argument("--max-step", dest="max_step", type=int)

    p = sub.add_parser("ingest", help="validate and store a CSV panel (one path per column)")
    p.add_argument("panel")
    p.add_argument("--normalize", action="store_true", help="divide each path by its sup norm")

    p = sub.add_parser("hill", help="Hill tail-index estimate")
    p.add_argument("--panel", help="panel CSV; uses the sup norm of each path")
    p.add_argument("--k", type=int, default=500)
    _law_flags(p)
    return ap


def resolve_config(args) -> RunConfig:
    base = {}
    if args.config:
        try:
            base = io.read_json(args.config)
        except (OSError, json.JSONDecodeError) as e:
            raise InvalidParams(f"cannot read config {args.config}: {e}") from None
        if not isinstance(base, dict):
            raise InvalidParams("config file must hold a JSON object")
    known = set(RunConfig.__dataclass_fields__) - {"verb"}
    unknown = set(base) - known
    if unknown:
        raise InvalidParams(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig(args.verb, **base)
    for k in ("seed", "reps", "out", "threads"):
        if getattr(args, k, None) is not None:
            setattr(cfg, k, getattr(args, k))
    for k in ("construction", "n", "m", "T_max", "eps", "c", "K"):
        v = getattr(args, k, None)
        if v is not None:
            setattr(cfg, k, v)
    law = dict(cfg.law)
    if getattr(args, "law_kind", None):
        law = {"kind": args.law_kind}
    if getattr(args, "alpha", None) is not None:
        law["alpha"] = args.alpha
    for name in ("p", "a", "b", "sigma", "beta", "mu"):
        v = getattr(args, f"law_{name}", None)
        if v is not None:
            law[name] = v
    cfg.law = law
    if getattr(args, "spectral", None):
        cfg.spectral = {"kind": args.spectral}
    if getattr(args, "spectral_p", None) is not None:
        cfg.spectral = {**cfg.spectral, "p": args.spectral_p}
    return cfg


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        cfg.validate()
        return VERBS[args.verb](cfg, args)
    except DLevyError as e:
        print(f"dlevy: error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"dlevy: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
