"""Command-line front end: ``ssw run``, ``ssw converge`` and ``ssw verify``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from . import __version__
from .cases import CASES, get_case
from .checks import run_all
from .diagnostics import (
    ConvergenceRow, EntropySeries, convergence_order, format_table, l1_error, output_stem,
    write_field_csv, write_series_csv, write_vtk,
)
from .kernels import set_threads
from .solver import SCHEMES, SchemeConfig, SolverAbort, run

log = logging.getLogger("ssw")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_ABORT = 0, 1, 2, 3

# config-file keys and how to parse them
_KEYS = {
    "case": str, "scheme": str, "n": int, "ny": int, "cfl": float, "tend": float,
    "out_dir": str, "seed": int, "wave_speed": str, "g": float,
}


class ConfigError(ValueError):
    pass


def read_config(path) -> dict:
    """Parse a ``key = value`` file (``#`` comments) or a JSON run manifest."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if text.lstrip().startswith("{"):
        try:
            raw = json.loads(text).get("config", {})
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON manifest: {exc}") from None
        items = raw.items()
    else:
        items = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            items.append((key.replace("-", "_"), value))
    out = {}
    for key, value in items:
        if key not in _KEYS:
            raise ConfigError(f"{path}: unknown key {key!r}")
        if value is None:
            continue
        try:
            out[key] = _KEYS[key](value)
        except (TypeError, ValueError):
            raise ConfigError(f"{path}: bad value {value!r} for {key}") from None
    return out


def effective_config(args) -> dict:
    """Merge case defaults < config file < command-line flags."""
    merged = {}
    if getattr(args, "config", None):
        merged.update(read_config(args.config))
    for key in _KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if "case" not in merged:
        raise ConfigError("no case given (use --case or a config file)")
    if merged["case"] not in CASES:
        raise ConfigError(f"unknown case {merged['case']!r}; choose from {', '.join(sorted(CASES))}")
    case = get_case(merged["case"])
    cfg = {
        "case": case.name, "scheme": "o4", "n": case.n, "ny": case.ny if case.dim == 2 else 1,
        "cfl": 0.45, "tend": case.end_time, "out_dir": ".", "seed": 0,
        "wave_speed": "flux", "g": case.params.g,
    }
    if case.dim == 2 and "n" in merged and "ny" not in merged:
        cfg["ny"] = round(merged["n"] * case.ny / case.n)
    cfg.update(merged)
    if cfg["scheme"] not in SCHEMES:
        raise ConfigError(f"invalid scheme {cfg['scheme']!r}; choose from {', '.join(SCHEMES)}")
    if cfg["n"] < 1 or cfg["ny"] < 1:
        raise ConfigError("cell counts must be positive")
    if case.dim == 1 and cfg["ny"] != 1:
        raise ConfigError(f"case {case.name} is one-dimensional; ny must be 1")
    if not cfg["cfl"] > 0 or cfg["tend"] < 0 or not cfg["g"] > 0:
        raise ConfigError("cfl and g must be positive and tend non-negative")
    if cfg["wave_speed"] not in ("flux", "full"):
        raise ConfigError("wave_speed must be 'flux' or 'full'")
    return cfg


def _setup(cfg):
    case = get_case(cfg["case"]).with_params(g=cfg["g"])
    case = replace(case, end_time=cfg["tend"])
    scheme = SchemeConfig(order=SCHEMES[cfg["scheme"]], cfl=cfg["cfl"], end_time=cfg["tend"],
                          wave_speed=cfg["wave_speed"])
    return case, scheme


def cmd_run(args) -> int:
    cfg = effective_config(args)
    case, scheme = _setup(cfg)
    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = output_stem(case.name, cfg["scheme"], cfg["n"])
    t0 = time.perf_counter()
    try:
        rec = run(case, scheme, nx=cfg["n"], ny=cfg["ny"] if case.dim == 2 else None)
    except SolverAbort as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.neighborhood is not None:
            np.set_printoptions(precision=6, linewidth=160)
            print(f"primitive states around the failing cell:\n{exc.neighborhood}", file=sys.stderr)
        return EXIT_ABORT
    wall = time.perf_counter() - t0
    w = rec.w
    files = {
        "field_csv": write_field_csv(out_dir / f"{stem}.csv", rec.mesh, w),
        "field_vtk": write_vtk(out_dir / f"{stem}.vtk", rec.mesh, w, title=stem),
        "series_csv": write_series_csv(out_dir / f"{stem}_entropy.csv",
                                       EntropySeries(rec.times, rec.entropy), rec.mass),
    }
    series = EntropySeries(rec.times, rec.entropy)
    manifest = {
        "version": __version__,
        "config": cfg,
        "scheme": asdict(scheme),
        "params": asdict(case.params),
        "mesh": {"nx": rec.mesh.nx, "ny": rec.mesh.ny, "dx": rec.mesh.dx,
                 "dy": rec.mesh.dy if rec.mesh.dim == 2 else None, "ghost": rec.mesh.ghost},
        "result": {"steps": rec.steps, "time": rec.time, "wall_seconds": wall,
                   "entropy_initial": rec.entropy[0], "entropy_final": rec.entropy[-1],
                   "entropy_max_relative_increase": series.max_increase(),
                   "mass_initial": rec.mass[0], "mass_final": rec.mass[-1]},
        "outputs": {k: str(v) for k, v in files.items()},
    }
    manifest_path = out_dir / f"{stem}_manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"{case.name} {cfg['scheme']} n={cfg['n']}: {rec.steps} steps to t={rec.time:g} "
          f"in {wall:.1f}s; wrote {manifest_path}")
    return EXIT_OK


def cmd_converge(args) -> int:
    cfg = effective_config(args)
    case, scheme = _setup(cfg)
    if case.exact is None:
        raise ConfigError(f"case {case.name} has no exact solution; use accuracy_1d or accuracy_2d")
    ns = args.n_list or [cfg["n"]]
    rows = []
    for n in ns:
        try:
            rec = run(case, scheme, nx=n, ny=n if case.dim == 2 else None)
        except SolverAbort as exc:
            print(f"error: N={n}: {exc}", file=sys.stderr)
            return EXIT_ABORT
        X, Y = rec.mesh.meshgrid()
        exact = case.exact(X, Y, rec.time, case.params)
        rows.append(ConvergenceRow(n, l1_error(rec.w[0], exact[0], rec.mesh)))
    rows = convergence_order(rows)
    table = format_table(rows)
    print(f"{case.name} {cfg['scheme']}: L1 error of h at t={cfg['tend']:g}")
    print(table)
    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{case.name}_{cfg['scheme']}_convergence.csv"
    with path.open("w") as fh:
        fh.write("N,l1_error,order\n")
        for r in rows:
            fh.write(f"{r.N},{r.l1_error:.17g},{'' if r.order is None else f'{r.order:.6f}'}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = 0 if args.seed is None else args.seed
    results = run_all(seed=seed, scale=args.scale)
    for r in results:
        print(r.line())
    failed = sum(r.failures for r in results)
    print(f"seed {seed}: {len(results) - failed} passed, {failed} failed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ssw", description="Entropy-stable shear shallow water solver")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--case", help=f"one of: {', '.join(CASES)}")
        sp.add_argument("--scheme", help="o1, o2, o3 or o4")
        sp.add_argument("--cfl", type=float)
        sp.add_argument("--tend", type=float, help="final time")
        sp.add_argument("--out-dir", dest="out_dir")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--wave-speed", dest="wave_speed", choices=("flux", "full"),
                        help="dissipation speed bound (default flux)")
        sp.add_argument("--g", type=float, help="gravity override")
        sp.add_argument("--config", help="key = value file or a run manifest")

    r = sub.add_parser("run", help="run one case and write outputs")
    common(r)
    r.add_argument("--n", type=int, help="cells in x")
    r.add_argument("--ny", type=int, help="cells in y (2D cases)")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("converge", help="L1 convergence table for a manufactured case")
    common(c)
    c.add_argument("--n", dest="n_list", type=int, nargs="+", help="resolutions")
    c.set_defaults(func=cmd_converge)

    v = sub.add_parser("verify", help="randomized invariant checks")
    v.add_argument("--seed", type=int)
    v.add_argument("--scale", type=float, default=1.0, help="multiplier on sample counts")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    set_threads()
    try:
        return args.func(args)
    except ConfigError as exc:
        parser.print_usage(sys.stderr)
        print(f"ssw: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
