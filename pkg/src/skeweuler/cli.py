"""Command-line entry points: verify, run, sweep and converge.

Run configurations are flat key/value text files with [section] headers
(documented with a full annotated example in the README). Exit codes:
0 success, 2 validation error, 3 numerical divergence, 4 verification
failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import (
    ConfigError,
    DivergenceError,
    SkewEulerError,
)
from .mms import manufactured_case
from .solver import RunRecord, SchemeConfig, run
from .state import Field, GasModel, Grid2D, PhysicalState, to_skew
from .verification import run_all

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DIVERGENCE = 3
EXIT_VERIFY_FAIL = 4


# ---------------------------------------------------------------------------
# configuration

_SCHEMA = {
    "grid": {
        "nx": (int, None),
        "ny": (int, None),
        "x0": (float, 0.0),
        "x1": (float, 1.0),
        "y0": (float, 0.0),
        "y1": (float, 1.0),
        "topology_x": (str, "bounded"),
        "topology_y": (str, "bounded"),
    },
    "gas": {
        "gamma": (float, None),
        "alpha2": (float, 1.0),
    },
    "scheme": {
        "order": (int, 4),
        "dt": (float, 0.0),            # 0: choose from the CFL limit
        "cfl": (float, 0.5),
        "t_end": (float, 1.0),
        "sigma": (float, 1.0),
    },
    "initial": {
        "kind": (str, "constant"),
        "rho": (float, 1.0),
        "u": (float, 0.0),
        "v": (float, 0.0),
        "p": (float, 1.0),
        "amplitude": (float, 0.4),
        "p_amplitude": (float, 0.2),
        "path": (str, ""),
    },
    "output": {
        "directory": (str, "out"),
        "snapshot_times": (str, ""),
        "sample_stride": (int, 1),
        "seed": (int, 0),
    },
}

_MANDATORY = (("grid", "nx"), ("grid", "ny"), ("gas", "gamma"))
_KINDS = ("constant", "density-bump", "manufactured", "file")


@dataclass
class RunConfig:
    """Fully resolved run configuration (defaults applied)."""

    values: dict = field(default_factory=dict)

    def get(self, section: str, key: str):
        return self.values[section][key]

    def dump(self) -> str:
        """Canonical text form; re-parsing it reproduces this config."""
        lines = []
        for section in _SCHEMA:
            lines.append(f"[{section}]")
            for key in _SCHEMA[section]:
                lines.append(f"{key} = {self.values[section][key]}")
            lines.append("")
        return "\n".join(lines)


def _parse_value(text: str, typ, section: str, key: str, lineno: int):
    try:
        if typ is int:
            return int(text)
        if typ is float:
            return float(text)
        return text
    except ValueError:
        raise ConfigError(
            f"value {text!r} for {section}.{key} is not a valid {typ.__name__}",
            lineno,
        ) from None


def parse_config_text(text: str) -> RunConfig:
    values = {s: {k: d for k, (_, d) in keys.items()} for s, keys in _SCHEMA.items()}
    seen = set()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        if section is None:
            raise ConfigError("key outside any [section]", lineno)
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _SCHEMA[section]:
            raise ConfigError(f"unknown key {key!r} in section [{section}]", lineno)
        typ, _ = _SCHEMA[section][key]
        values[section][key] = _parse_value(val, typ, section, key, lineno)
        seen.add((section, key))
    for section, key in _MANDATORY:
        if (section, key) not in seen:
            raise ConfigError(f"mandatory key {section}.{key} missing")
    cfg = RunConfig(values)
    _validate(cfg)
    return cfg


def parse_config(path: str) -> RunConfig:
    with open(path) as fh:
        return parse_config_text(fh.read())


def _validate(cfg: RunConfig) -> None:
    v = cfg.values
    for d in ("x", "y"):
        topo = v["grid"][f"topology_{d}"]
        if topo not in ("bounded", "periodic"):
            raise ConfigError(f"topology_{d} must be bounded|periodic, got {topo!r}")
    if v["scheme"]["order"] not in (2, 4):
        raise ConfigError(f"order must be 2 or 4, got {v['scheme']['order']}")
    if v["initial"]["kind"] not in _KINDS:
        raise ConfigError(
            f"initial kind must be one of {', '.join(_KINDS)}, got {v['initial']['kind']!r}"
        )
    if v["initial"]["kind"] == "file" and not v["initial"]["path"]:
        raise ConfigError("initial kind 'file' needs initial.path")
    for key in ("t_end", "cfl"):
        if not v["scheme"][key] > 0:
            raise ConfigError(f"scheme.{key} must be positive")
    if v["scheme"]["dt"] < 0:
        raise ConfigError("scheme.dt must be positive (or 0 for automatic)")
    # constructing the models validates gamma/alpha2/grid sizes
    build_grid(cfg)
    build_gas(cfg)
    snaps = v["output"]["snapshot_times"].strip()
    if snaps:
        try:
            [float(s) for s in snaps.split(",")]
        except ValueError:
            raise ConfigError(
                f"snapshot_times must be a comma list of floats, got {snaps!r}"
            ) from None


def build_grid(cfg: RunConfig) -> Grid2D:
    g = cfg.values["grid"]
    return Grid2D(
        nx=g["nx"], ny=g["ny"], x0=g["x0"], x1=g["x1"], y0=g["y0"], y1=g["y1"],
        topology_x=g["topology_x"], topology_y=g["topology_y"],
    )


def build_gas(cfg: RunConfig) -> GasModel:
    return GasModel(cfg.values["gas"]["gamma"], cfg.values["gas"]["alpha2"])


def snapshot_times(cfg: RunConfig) -> tuple[float, ...]:
    raw = cfg.values["output"]["snapshot_times"].strip()
    if not raw:
        return ()
    return tuple(float(s) for s in raw.split(","))


def build_scheme(cfg: RunConfig) -> SchemeConfig:
    grid = build_grid(cfg)
    gas = build_gas(cfg)
    s = cfg.values["scheme"]
    source = None
    if cfg.values["initial"]["kind"] == "manufactured":
        source = manufactured_case(gas).source
    return SchemeConfig(
        grid=grid,
        gas=gas,
        order=s["order"],
        dt=s["dt"] if s["dt"] > 0 else None,
        cfl=s["cfl"],
        t_end=s["t_end"],
        sigma=s["sigma"],
        source=source,
        snapshot_times=snapshot_times(cfg),
        sample_stride=cfg.values["output"]["sample_stride"],
    )


def build_initial(cfg: RunConfig, scheme: SchemeConfig) -> Field:
    kind = cfg.values["initial"]["kind"]
    grid = scheme.grid
    ini = cfg.values["initial"]
    if kind == "constant":
        return Field.constant(
            grid, to_skew(PhysicalState(ini["rho"], ini["u"], ini["v"], ini["p"]))
        )
    if kind == "density-bump":
        return density_bump(
            grid, rho0=ini["rho"], p0=ini["p"],
            amplitude=ini["amplitude"], p_amplitude=ini["p_amplitude"],
        )
    if kind == "manufactured":
        return manufactured_case(scheme.gas).exact(grid, 0.0)
    with open(ini["path"]) as fh:
        return Field.read_csv(grid, fh)


def density_bump(grid: Grid2D, rho0: float = 1.0, p0: float = 1.0,
                 amplitude: float = 0.4, p_amplitude: float = 0.2) -> Field:
    """Smooth stationary bump, exactly periodic on the domain:
    rho = rho0 + a sin^2(pi xi) sin^2(pi eta), u = v = 0, similarly p."""

    def fn(xx, yy):
        xi = (xx - grid.x0) / (grid.x1 - grid.x0)
        eta = (yy - grid.y0) / (grid.y1 - grid.y0)
        shape = np.sin(np.pi * xi) ** 2 * np.sin(np.pi * eta) ** 2
        rho = rho0 + amplitude * shape
        p = p0 + p_amplitude * shape
        z = np.zeros_like(rho)
        return np.sqrt(rho), z, z, np.sqrt(p)

    return Field.from_function(grid, fn)


# ---------------------------------------------------------------------------
# commands

def cmd_verify(args) -> int:
    results = run_all(args.seed)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"[{status}] {r.name:26s} max_residual={r.max_residual:.3e} tol={r.tolerance:.1e}"
        if r.note:
            line += f"  {r.note}"
        print(line)
    failures = [r.name for r in results if not r.passed]
    if failures:
        print(json.dumps({"failed_suites": failures}))
        return EXIT_VERIFY_FAIL
    print(f"all {len(results)} suites passed (seed {args.seed})")
    return EXIT_OK


def _write_run_outputs(record: RunRecord, outdir: str) -> None:
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "record.csv"), "w") as fh:
        record.write_csv(fh)
    for t, snap in record.snapshots:
        with open(os.path.join(outdir, f"snapshot_t{t:.6f}.csv"), "w") as fh:
            snap.write_csv(fh)


def cmd_run(args) -> int:
    cfg = parse_config(args.config)
    if args.echo:
        print(cfg.dump())
    scheme = build_scheme(cfg)
    initial = build_initial(cfg, scheme)
    record = run(scheme, initial)
    outdir = cfg.values["output"]["directory"]
    _write_run_outputs(record, outdir)
    # record the fully resolved configuration (defaults included)
    with open(os.path.join(outdir, "resolved.cfg"), "w") as fh:
        fh.write(cfg.dump())
    last = record.samples[-1]
    print(
        f"steps dt={record.dt:.6g} t_end={last.t:.6g} "
        f"energy={last.energy:.12e} drift={record.energy_drift():.3e}"
    )
    print(f"outputs in {outdir}/")
    return EXIT_OK


def cmd_sweep(args) -> int:
    from .boundary import sweep_eigenvalues, bc_threshold

    gas = GasModel(args.gamma)
    rows = sweep_eigenvalues(gas, args.mn_min, args.mn_max, args.steps)
    lines = ["Mn,lambda1,lambda2,re_lambda3,im_lambda3,re_lambda4,im_lambda4,neg_count"]
    for r in rows:
        lines.append(
            f"{r['Mn']!r},{r['lambda1']!r},{r['lambda2']!r},{r['re_lambda3']!r},"
            f"{r['im_lambda3']!r},{r['re_lambda4']!r},{r['im_lambda4']!r},{r['neg_count']}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    print(f"# b(gamma={args.gamma}) = {bc_threshold(gas)!r}")
    return EXIT_OK


def cmd_converge(args) -> int:
    cfg = parse_config(args.config)
    if cfg.values["initial"]["kind"] != "manufactured":
        raise ConfigError("converge requires initial.kind = manufactured")
    if args.levels < 3:
        raise ConfigError("converge needs at least 3 levels")
    base = build_scheme(cfg)
    case = manufactured_case(base.gas)
    rows = []
    prev_err = None
    for level in range(args.levels):
        factor = 2**level
        grid = Grid2D(
            nx=(base.grid.nx - 1) * factor + 1
            if base.grid.topology_x == "bounded" else base.grid.nx * factor,
            ny=(base.grid.ny - 1) * factor + 1
            if base.grid.topology_y == "bounded" else base.grid.ny * factor,
            x0=base.grid.x0, x1=base.grid.x1, y0=base.grid.y0, y1=base.grid.y1,
            topology_x=base.grid.topology_x, topology_y=base.grid.topology_y,
        )
        scheme = replace(base, grid=grid, dt=None, snapshot_times=(),
                         sample_stride=10**9)
        initial = case.exact(grid, 0.0)
        record = run(scheme, initial)
        exact = case.exact(grid, record.samples[-1].t)
        err = l2_error(scheme, record.final, exact)
        order = math.log2(prev_err / err) if prev_err else float("nan")
        rows.append((level, grid.nx, grid.ny, min(grid.hx, grid.hy), err, order))
        prev_err = err
    lines = ["level,nx,ny,h,l2_error,observed_order"]
    for level, nx, ny, h, err, order in rows:
        lines.append(f"{level},{nx},{ny},{h!r},{err!r},{order!r}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK


def l2_error(scheme: SchemeConfig, got: Field, exact: Field) -> float:
    from .solver import applicator

    app = applicator(scheme)
    diff = got.data - exact.data
    return math.sqrt(float(np.sum(app.w2d * diff * diff)))


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skeweuler",
        description="Energy-conserving split-form Euler solver and verification suite",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run every identity suite")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("run", help="time-integrate a configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--echo", action="store_true", help="print the resolved config")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("sweep", help="eigenvalue sweep over normal Mach numbers")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--mn-min", type=float, required=True)
    p.add_argument("--mn-max", type=float, required=True)
    p.add_argument("--steps", type=int, default=51)
    p.add_argument("--out", default="")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("converge", help="manufactured-solution refinement study")
    p.add_argument("--config", required=True)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--out", default="")
    p.set_defaults(fn=cmd_converge)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (SkewEulerError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
