"""Command-line front end: argument parsing, scans, and CSV/JSON emission.

Every subcommand reads a handful of long flags (optionally pre-seeded
from a flat key=value or JSON file via ``--config``), runs one library
operation, and writes either a flat JSON map of named scalars or CSV
rows in row-major grid order.  Numbers are printed with 12 significant
digits, so identical invocations produce byte-identical files.

Exit codes: 0 on success, 2 on invalid input or an unwritable output
path, 3 when a numerical routine fails to converge.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .analysis import (
    Axis,
    PureLossCoefficients,
    ideal_gain_expr,
    ideal_threshold_curve,
    scan_plane,
    threshold_energy,
)
from .bell import ReceiverConfig, monte_carlo_error, optimize_g_test, p_test
from .classical import classical_bound
from .errors import NumericalError
from .fock import conditional_output_fock, overlap_fock
from .gaussian import CellSpec, GaussianState, conditional_output_cm
from .quantum import bhattacharyya_bound, chernoff_bound, gaussian_overlap

__all__ = ["RunConfig", "dispatch", "emit", "main"]

_REQUIRED = object()


@dataclass(frozen=True)
class _Field:
    name: str
    ftype: type
    default: object = _REQUIRED
    help: str = ""
    choices: Optional[tuple] = None

    @property
    def flag(self) -> str:
        return "--" + self.name.replace("_", "-")


@dataclass(frozen=True)
class RunConfig:
    """One validated invocation: the subcommand and its merged parameters."""

    command: str
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]


def _fmt(v) -> str:
    """12-significant-digit text for one scalar (CSV cell)."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _json_value(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}" if math.isfinite(v) else "null"
    return json.dumps(str(v))


def _json_map_lines(mapping: dict, indent: str = "") -> str:
    body = ",\n".join(f'{indent}  {json.dumps(k)}: {_json_value(v)}'
                      for k, v in mapping.items())
    return f"{indent}{{\n{body}\n{indent}}}"


def emit(results, fmt: str = "json", path: Optional[str] = None) -> None:
    """Write a flat map or a sequence of flat records as JSON or CSV.

    CSV output is one header row plus one line per record; JSON output
    is a flat object or an array of flat objects.  All floats carry 12
    significant digits and key order follows insertion order, so the
    bytes are stable across reruns.
    """
    if fmt not in ("json", "csv"):
        raise ValueError("format must be 'json' or 'csv'")
    is_map = isinstance(results, dict)
    records = [results] if is_map else list(results)
    if fmt == "json":
        if is_map:
            text = _json_map_lines(results) + "\n"
        else:
            rows = ",\n".join(_json_map_lines(r, "  ") for r in records)
            text = f"[\n{rows}\n]\n"
        if path is None:
            sys.stdout.write(text)
        else:
            with open(path, "w") as fh:
                fh.write(text)
        return
    header = list(records[0].keys()) if records else []

    def write_rows(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for r in records:
            writer.writerow([_fmt(r[k]) for k in header])

    if path is None:
        write_rows(sys.stdout)
    else:
        with open(path, "w", newline="") as fh:
            write_rows(fh)


# --------------------------------------------------------------------------
# subcommand handlers


def _cell_from(cfg: RunConfig) -> CellSpec:
    return CellSpec(r0=cfg["r0"], r1=cfg["r1"], nbar=cfg["nbar"],
                    eps=cfg["eps"])


def _run_bounds(cfg: RunConfig) -> None:
    cell = _cell_from(cfg)
    c = classical_bound(cell, cfg["m"], cfg["n"])
    q = chernoff_bound(cell, cfg["m"], cfg["n"])
    b = bhattacharyya_bound(cell, cfg["m"], cfg["n"])
    out = {
        "command": "bounds",
        "r0": cfg["r0"], "r1": cfg["r1"], "n": cfg["n"], "m": cfg["m"],
        "nbar": cfg["nbar"], "eps": cfg["eps"],
        "c": c.value, "q": q.value, "b": b.value,
        "t_star": q.meta["t_star"],
    }
    emit(out, cfg["format"], cfg["out"])


def _run_gain_scan(cfg: RunConfig) -> None:
    grid = cfg["grid"]
    m = None if cfg["m"] == 0 else cfg["m"]
    axis_r0 = Axis("r0", 0.0, 1.0, points=grid)
    if cfg["plane"] == "r0r1":
        result = scan_plane("r0xr1", axis_r0, Axis("r1", 0.0, 1.0, points=grid),
                            m=m, energy_n=cfg["n"], nbar=cfg["nbar"],
                            eps=cfg["eps"], m_star=cfg["mstar"])
        col1 = "r1"
    else:
        n_top = cfg["n"]
        if n_top <= 0.0:
            raise ValueError("n must be positive")
        axis_n = Axis("n", n_top / grid, n_top, points=grid)
        result = scan_plane("r0xN", axis_r0, axis_n, m=m, r1=1.0,
                            nbar=cfg["nbar"], eps=cfg["eps"],
                            m_star=cfg["mstar"])
        col1 = "n"
    rows = []
    for cell in result.cells:
        res = cell.result
        rows.append({
            "r0": cell.coords[0], col1: cell.coords[1],
            "g": None if res is None else res.g,
            "c": None if res is None else res.c,
            "q": None if res is None else res.q,
            "flagged": cell.flagged, "note": cell.note,
        })
    emit(rows, "csv", cfg["out"])


def _run_ideal(cfg: RunConfig) -> None:
    point = ideal_threshold_curve(r0=cfg["r0"])
    sweep_flags = [cfg["n_min"], cfg["n_max"]]
    if any(v is not None for v in sweep_flags):
        if any(v is None for v in sweep_flags):
            raise ValueError("provide both --n-min and --n-max for a sweep")
        if not 0.0 < cfg["n_min"] < cfg["n_max"]:
            raise ValueError("need 0 < n-min < n-max")
        rows = []
        for n in np.linspace(cfg["n_min"], cfg["n_max"], cfg["n_points"]):
            y = math.exp(-n)
            kernel = ideal_gain_expr(point.x, y)
            rows.append({
                "n": float(n), "y": y, "kernel": kernel,
                "gain_possible": kernel > 0.0,
                "x": point.x, "ybar": point.ybar, "nbar": point.nbar,
            })
        emit(rows, "json", cfg["out"])
        return
    emit({
        "command": "ideal", "r0": cfg["r0"],
        "x": point.x, "ybar": point.ybar, "nbar": point.nbar,
    }, "json", cfg["out"])


def _run_threshold(cfg: RunConfig) -> None:
    co = PureLossCoefficients.from_reflectivities(cfg["r0"], cfg["r1"], 1.0)
    emit({
        "command": "threshold", "r0": cfg["r0"], "r1": cfg["r1"],
        "n_th": threshold_energy(cfg["r0"], cfg["r1"]),
        "x": co.x, "w": co.w, "f": co.f,
    }, "json", cfg["out"])


def _run_bell(cfg: RunConfig) -> None:
    if cfg["m_min"] < 1 or cfg["m_max"] < cfg["m_min"]:
        raise ValueError("need 1 <= m-min <= m-max")
    cell = _cell_from(cfg)
    phi_grid = np.geomspace(1e-6, 0.5, cfg["phi_points"])
    res = optimize_g_test(cell, cfg["n"],
                          m_range=range(cfg["m_min"], cfg["m_max"] + 1),
                          phi_grid=phi_grid, m_star=cfg["mstar"])
    best = p_test(cell, cfg["n"], ReceiverConfig(m=res.best_m,
                                                 phi=res.best_phi))
    out = {
        "command": "bell",
        "r0": cfg["r0"], "r1": cfg["r1"], "n": cfg["n"],
        "m_min": cfg["m_min"], "m_max": cfg["m_max"],
        "phi_points": cfg["phi_points"],
        "nbar": cfg["nbar"], "eps": cfg["eps"], "mstar": cfg["mstar"],
        "best_g": res.best_g, "best_m": res.best_m, "best_phi": res.best_phi,
        "p_test": best.p_test, "sigma": best.sigma,
    }
    if cfg["mc_trials"] is not None:
        mc = monte_carlo_error(cell, cfg["n"],
                               ReceiverConfig(m=res.best_m, phi=res.best_phi),
                               cfg["mc_trials"], cfg["seed"])
        out.update({"mc_trials": cfg["mc_trials"], "seed": cfg["seed"],
                    "mc_estimate": mc.estimate,
                    "mc_std_error": mc.std_error})
    emit(out, "json", None)
    if cfg["out"] is not None:
        rows = [{"m": m, "phi": float(phi), "g": float(res.surface[i, j])}
                for i, m in enumerate(res.m_values)
                for j, phi in enumerate(res.phi_values)]
        emit(rows, "csv", cfg["out"])


def _run_oracle_check(cfg: RunConfig) -> None:
    if cfg["tol"] <= 0.0:
        raise ValueError("tol must be positive")
    cell = _cell_from(cfg)
    states = [GaussianState(np.zeros(4), conditional_output_cm(cell, u,
                                                               cfg["ns"]))
              for u in (0, 1)]
    closed = gaussian_overlap(states[0], states[1], cfg["t"]).value
    rhos = [conditional_output_fock(cell, u, cfg["ns"], cfg["cutoff"])
            for u in (0, 1)]
    brute = overlap_fock(rhos[0], rhos[1], cfg["t"])
    rel = abs(closed - brute) / abs(closed)
    emit({
        "command": "oracle-check",
        "r0": cfg["r0"], "r1": cfg["r1"], "ns": cfg["ns"],
        "cutoff": cfg["cutoff"], "t": cfg["t"],
        "nbar": cfg["nbar"], "eps": cfg["eps"], "tol": cfg["tol"],
        "gaussian": closed, "fock": brute, "rel_error": rel,
        "ok": rel <= cfg["tol"],
    }, "json", cfg["out"])


# --------------------------------------------------------------------------
# command table, config merging, dispatch

_CELL_FIELDS = [
    _Field("r0", float, help="dark-bit reflectivity in [0, 1]"),
    _Field("r1", float, help="bright-bit reflectivity in [0, 1]"),
]
_NOISE_FIELDS = [
    _Field("nbar", float, 0.0, "environment thermal photons (default 0)"),
    _Field("eps", float, 0.0, "added noise variance per pass (default 0)"),
]

_COMMANDS = {
    "bounds": {
        "help": "classical floor and entangled-probe bounds at one point",
        "fields": _CELL_FIELDS + [
            _Field("n", float, help="total signal energy (mean photons)"),
            _Field("m", int, help="number of signal modes"),
        ] + _NOISE_FIELDS + [
            _Field("format", str, "json", "output format", ("json", "csv")),
            _Field("out", str, None, "output path (default stdout)"),
        ],
        "outputs": {"c", "q", "b", "t_star"},
        "handler": _run_bounds,
    },
    "gain-scan": {
        "help": "CSV map of the information gain over a parameter plane",
        "fields": [
            _Field("plane", str, help="scan plane", choices=("r0r1", "r0n")),
            _Field("n", float,
                   help="total energy (fixed for r0r1, axis top for r0n)"),
            _Field("m", int,
                   help="signal modes; 0 = infinite-bandwidth limit (r0n)"),
            _Field("mstar", float, None,
                   "classical bandwidth cap (needed with noise)"),
        ] + _NOISE_FIELDS + [
            _Field("grid", int, help="points per axis"),
            _Field("out", str, None, "output path (default stdout)"),
        ],
        "outputs": set(),
        "handler": _run_gain_scan,
    },
    "ideal": {
        "help": "zero-gain threshold of a lossless bright bit (r1 = 1)",
        "fields": [
            _Field("r0", float, help="dark-bit reflectivity in [0, 1)"),
            _Field("n_min", float, None, "sweep start (per-mode energy)"),
            _Field("n_max", float, None, "sweep end (per-mode energy)"),
            _Field("n_points", int, 200, "sweep points (default 200)"),
            _Field("out", str, None, "output path (default stdout)"),
        ],
        "outputs": {"x", "ybar", "nbar"},
        "handler": _run_ideal,
    },
    "threshold": {
        "help": "energy above which a finite bandwidth beats classical",
        "fields": _CELL_FIELDS + [
            _Field("out", str, None, "output path (default stdout)"),
        ],
        "outputs": {"n_th", "x", "w", "f"},
        "handler": _run_threshold,
    },
    "bell": {
        "help": "optimize the homodyne variance test over (m, phi)",
        "fields": _CELL_FIELDS + [
            _Field("n", float, help="total signal energy (mean photons)"),
            _Field("m_min", int, help="smallest probe-copy count"),
            _Field("m_max", int, help="largest probe-copy count"),
            _Field("phi_points", int,
                   help="log-spaced significance levels in [1e-6, 0.5]"),
            _Field("mstar", float, None,
                   "classical bandwidth cap (needed with noise)"),
        ] + _NOISE_FIELDS + [
            _Field("mc_trials", int, None,
                   "validate the best point with this many trials"),
            _Field("seed", int, 1234, "Monte Carlo seed (default 1234)"),
            _Field("out", str, None, "also write the full (m, phi, g) CSV"),
        ],
        "outputs": {"best_g", "best_m", "best_phi", "p_test", "sigma",
                    "mc_estimate", "mc_std_error"},
        "handler": _run_bell,
    },
    "oracle-check": {
        "help": "cross-check a closed-form overlap against the Fock oracle",
        "fields": _CELL_FIELDS + [
            _Field("ns", float, help="signal energy per mode"),
            _Field("cutoff", int, help="Fock truncation per mode"),
            _Field("t", float, help="overlap exponent in (0, 1)"),
        ] + _NOISE_FIELDS + [
            _Field("tol", float, 1e-6, "agreement tolerance (default 1e-6)"),
            _Field("out", str, None, "output path (default stdout)"),
        ],
        "outputs": {"gaussian", "fock", "rel_error", "ok"},
        "handler": _run_oracle_check,
    },
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qread",
        description="Bounds and receiver analysis for reading an optical "
                    "memory with entangled light.",
    )
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")
    for name, spec in _COMMANDS.items():
        sp = sub.add_parser(name, help=spec["help"], description=spec["help"])
        for f in spec["fields"]:
            kwargs = {"type": f.ftype, "default": None, "help": f.help}
            if f.choices:
                kwargs["choices"] = list(f.choices)
            sp.add_argument(f.flag, **kwargs)
        sp.add_argument("--config", default=None,
                        help="flat key=value or JSON file of defaults; "
                             "explicit flags win")
    return parser


def _parse_config_file(path: str) -> dict:
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ValueError("config JSON must be a flat map")
        return data
    data = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno} is not key=value: {raw!r}")
        key, _, value = line.partition("=")
        value = value.strip()
        try:
            data[key.strip()] = json.loads(value)
        except json.JSONDecodeError:
            data[key.strip()] = value
    return data


def _coerce(f: _Field, value):
    if value is None:
        return None
    if f.ftype is int:
        if isinstance(value, bool) or (isinstance(value, float)
                                       and value != int(value)):
            raise ValueError(f"{f.name} must be an integer, got {value!r}")
        value = int(value)
    elif f.ftype is float:
        value = float(value)
    else:
        value = str(value)
    if f.choices and value not in f.choices:
        raise ValueError(f"{f.name} must be one of {'/'.join(f.choices)}")
    return value


def _merge_config(args: argparse.Namespace) -> RunConfig:
    spec = _COMMANDS[args.command]
    fields = {f.name: f for f in spec["fields"]}
    values = {name: getattr(args, name) for name in fields}
    if args.config is not None:
        for raw_key, raw_value in _parse_config_file(args.config).items():
            key = raw_key.replace("-", "_")
            if key == "command":
                if raw_value != args.command:
                    raise ValueError(
                        f"config is for {raw_value!r}, not {args.command!r}")
                continue
            if key in spec["outputs"]:
                continue  # reloading a result file: outputs are not inputs
            if key not in fields:
                raise ValueError(f"unknown config key {raw_key!r}")
            if values[key] is None:
                values[key] = raw_value
    for name, f in fields.items():
        if values[name] is None:
            if f.default is _REQUIRED:
                raise ValueError(f"missing required {f.flag}")
            values[name] = f.default
        else:
            values[name] = _coerce(f, values[name])
    return RunConfig(command=args.command, values=values)


def dispatch(argv) -> int:
    """Parse, run exactly one subcommand, and map failures to exit codes."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _merge_config(args)
        _COMMANDS[cfg.command]["handler"](cfg)
    except NumericalError as exc:
        print(f"qread: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"qread: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
