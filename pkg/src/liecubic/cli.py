"""Command-line front end.

Subcommands:
    simulate   integrate the full / reduced / euler-lagrange system and write
               a trajectory file (jsonl or csv)
    report     print the invariant-counting report as a JSON object
    verify     run the acceptance property suite, one pass/fail line each

Configuration comes from a single JSON document (--config FILE, or "-" for
stdin); command-line flags override fields of that document.  Identical
config + seed produces byte-identical outputs.  Exit codes: 0 success,
2 configuration error, 3 numerical blow-up.

The LIECUBIC_LOG environment variable sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import algebra as alg
from . import full_dynamics as fd
from . import group as grp
from . import invariants as inv
from . import reduction as red
from . import verification as ver
from .errors import IntegrationError

log = logging.getLogger("liecubic")

MODES = ("full", "reduced", "euler-lagrange", "report", "verify")
FORMATS = ("jsonl", "csv")
MAX_STEPS = 10**7
DEFAULT_SCALE = 0.1  # amplitude of seeded random initial data


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending field."""


@dataclass
class RunConfig:
    algebra: str | None = None
    mode: str = "full"
    T: float | None = None
    h: float | None = None
    seed: int = 0
    output: str | None = None
    format: str = "jsonl"
    eta: list | None = None
    initial: dict = field(default_factory=dict)

    def resolved(self) -> dict:
        # everything needed to reproduce the run; the output destination is
        # deliberately not part of it (identical configs must give
        # byte-identical files wherever they are written)
        return {
            "algebra": self.algebra, "mode": self.mode, "T": self.T,
            "h": self.h, "seed": self.seed, "format": self.format,
            "eta": self.eta, "initial": self.initial,
        }


def _vector(sc, value, name):
    arr = np.asarray(value, dtype=float)
    if arr.shape != (sc.n,):
        raise ConfigError(f"{name}: expected {sc.n} components, got shape {arr.shape}")
    return arr


def _resolve_config(args) -> RunConfig:
    data = {}
    if args.config:
        raw = sys.stdin.read() if args.config == "-" else open(args.config).read()
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config: not valid JSON ({e})")
        if not isinstance(data, dict):
            raise ConfigError("config: top-level JSON value must be an object")
    cfg = RunConfig()
    known = {"algebra", "mode", "T", "h", "seed", "output", "format", "eta",
             "initial"}
    for key, value in data.items():
        if key not in known:
            raise ConfigError(f"{key}: unknown configuration field")
        setattr(cfg, key, value)
    for name in ("algebra", "mode", "T", "h", "seed", "output", "format"):
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None:
            setattr(cfg, name, value)
    if getattr(args, "eta", None) is not None:
        try:
            cfg.eta = [float(v) for v in args.eta.split(",")]
        except ValueError:
            raise ConfigError(f"eta: expected comma-separated floats, got {args.eta!r}")
    return cfg


def _validate(cfg: RunConfig):
    if cfg.algebra is None:
        cfg.algebra = "so3"
    try:
        sc = alg.catalog(cfg.algebra)
    except ValueError as e:
        raise ConfigError(f"algebra: {e}")
    if cfg.mode not in MODES:
        raise ConfigError(f"mode: {cfg.mode!r} not one of {MODES}")
    if cfg.format not in FORMATS:
        raise ConfigError(f"format: {cfg.format!r} not one of {FORMATS}")
    if cfg.mode in ("full", "reduced", "euler-lagrange"):
        if cfg.T is None:
            cfg.T = 1.0
        if cfg.h is None:
            cfg.h = 1e-3
        try:
            T, h = float(cfg.T), float(cfg.h)
        except (TypeError, ValueError):
            raise ConfigError("T/h: must be numbers")
        if not (T > 0):
            raise ConfigError("T: must be positive")
        if not (h > 0):
            raise ConfigError("h: must be positive")
        if T < h:
            raise ConfigError("T: must be at least one step h")
        if T / h > MAX_STEPS:
            raise ConfigError(f"h: T/h = {T / h:.3g} exceeds {MAX_STEPS:g} steps")
        cfg.T, cfg.h = T, h
    if not isinstance(cfg.initial, dict):
        raise ConfigError("initial: must be an object")
    allowed = {
        "full": {"x0", "x0_exp", "Y0", "mu0", "xi0", "Ydot0", "Yddot0"},
        "reduced": {"x0", "x0_exp", "Y0", "xi0"},
        "euler-lagrange": {"Y0", "Ydot0", "Yddot0"},
    }.get(cfg.mode, set())
    unknown = set(cfg.initial) - allowed
    if unknown:
        raise ConfigError(
            f"initial.{sorted(unknown)[0]}: not a field of mode={cfg.mode}")
    if "x0" in cfg.initial and "x0_exp" in cfg.initial:
        raise ConfigError("initial.x0: give either x0 or x0_exp, not both")
    momenta = {"mu0", "xi0"} & set(cfg.initial)
    derivs = {"Ydot0", "Yddot0"} & set(cfg.initial)
    if cfg.mode == "full":
        if momenta and derivs:
            raise ConfigError(
                "initial: give either (mu0, xi0) or (Ydot0, Yddot0), not both")
        if len(momenta) == 1:
            raise ConfigError(f"initial.{momenta.pop()}: mu0 and xi0 go together")
        if len(derivs) == 1:
            raise ConfigError(f"initial.{derivs.pop()}: Ydot0 and Yddot0 go together")
    if cfg.mode in ("reduced", "report") and cfg.eta is None:
        raise ConfigError(f"eta: required for mode={cfg.mode}")
    if cfg.eta is not None:
        _vector(sc, cfg.eta, "eta")
    cfg.seed = int(cfg.seed)
    return sc


def _group_point(sc, cfg, rng):
    init = cfg.initial
    if "x0" in init:
        mat = np.asarray(init["x0"])
        d = sc.rep_dim
        if mat.shape != (d, d):
            raise ConfigError(f"initial.x0: expected a {d}x{d} matrix")
        x = grp.GroupElement(mat.astype(sc.basis.dtype), sc)
        try:
            grp.check_membership(x)
        except Exception as e:
            raise ConfigError(f"initial.x0: {e}")
        return x
    if "x0_exp" in init:
        return grp.exp_map(sc, _vector(sc, init["x0_exp"], "initial.x0_exp"))
    return grp.identity(sc)


def _initial_vector(sc, cfg, rng, name, default_random=True):
    if name in cfg.initial:
        return _vector(sc, cfg.initial[name], f"initial.{name}")
    if default_random:
        return DEFAULT_SCALE * rng.normal(size=sc.n)
    return np.zeros(sc.n)


# ---------------------------------------------------------------------------
# output formatting


def _fmt(v) -> str:
    return repr(float(v))


def _matrix_columns(sc):
    d = sc.rep_dim
    cols = [f"x{r + 1}{c + 1}" for r in range(d) for c in range(d)]
    if np.iscomplexobj(sc.basis):
        cols += [f"x{r + 1}{c + 1}_im" for r in range(d) for c in range(d)]
    return cols


def _vector_columns(stem, n):
    return [f"{stem}{i + 1}" for i in range(n)]


def _write_rows(cfg, columns, rows, header_extra=None):
    """Emit the trajectory in the configured format; returns the text."""
    header = {"config": cfg.resolved(), "columns": columns}
    if header_extra:
        header.update(header_extra)
    lines = []
    if cfg.format == "jsonl":
        lines.append(json.dumps({"header": header}, sort_keys=True,
                                separators=(",", ":")))
        for row in rows:
            record = {name: value for name, value in zip(columns, row)}
            lines.append(json.dumps(record, sort_keys=True,
                                    separators=(",", ":"),
                                    default=float))
    else:
        lines.append("# " + json.dumps(header, sort_keys=True,
                                       separators=(",", ":")))
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(cfg, text):
    if cfg.output:
        with open(cfg.output, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(cfg: RunConfig) -> int:
    sc = _validate(cfg)
    if cfg.mode == "report":
        return cmd_report(cfg)
    if cfg.mode == "verify":
        return cmd_verify(cfg)
    log.info("simulate mode=%s algebra=%s T=%g h=%g seed=%d",
             cfg.mode, cfg.algebra, cfg.T, cfg.h, cfg.seed)
    rng = np.random.default_rng(cfg.seed)
    if cfg.mode == "full":
        x0 = _group_point(sc, cfg, rng)
        Y0 = _initial_vector(sc, cfg, rng, "Y0")
        if {"Ydot0", "Yddot0"} <= set(cfg.initial):
            ydot0 = _vector(sc, cfg.initial["Ydot0"], "initial.Ydot0")
            yddot0 = _vector(sc, cfg.initial["Yddot0"], "initial.Yddot0")
            mu0, xi0 = fd.initial_momenta(sc, Y0, ydot0, yddot0)
        else:
            mu0 = _initial_vector(sc, cfg, rng, "mu0")
            xi0 = _initial_vector(sc, cfg, rng, "xi0")
        state = fd.FullState(x0, Y0, mu0, xi0)
        try:
            traj = fd.integrate_full(state, cfg.T, cfg.h)
        except IntegrationError as e:
            print(f"error: {e}", file=sys.stderr)
            return 3
        H = traj.hamiltonian_series()
        J = traj.momentum_series()
        columns = (["t"] + _matrix_columns(sc) + _vector_columns("Y", sc.n)
                   + _vector_columns("mu", sc.n) + _vector_columns("xi", sc.n)
                   + ["H"] + _vector_columns("J", sc.n))
        rows = []
        complex_rep = np.iscomplexobj(sc.basis)
        for k in range(len(traj)):
            row = [traj.times[k]]
            row.extend(traj.xs[k].real.ravel())
            if complex_rep:
                row.extend(traj.xs[k].imag.ravel())
            row.extend(traj.Ys[k])
            row.extend(traj.mus[k])
            row.extend(traj.xis[k])
            row.append(H[k])
            row.extend(J[k])
            rows.append([float(v) for v in row])
        _emit(cfg, _write_rows(cfg, columns, rows))
        return 0
    if cfg.mode == "reduced":
        eta = _vector(sc, cfg.eta, "eta")
        x0 = _group_point(sc, cfg, rng)
        theta0 = grp.coadjoint(x0, eta)
        Y0 = _initial_vector(sc, cfg, rng, "Y0")
        xi0 = _initial_vector(sc, cfg, rng, "xi0")
        r0 = red.ReducedState(theta0, Y0, xi0)
        try:
            traj = red.integrate_reduced(sc, r0, cfg.T, cfg.h)
        except IntegrationError as e:
            print(f"error: {e}", file=sys.stderr)
            return 3
        hs = traj.hamiltonian_series()
        ls = inv.invariant_series(sc, traj.thetas, traj.Ys, traj.xis)
        cas = traj.casimir_series()
        report = inv.lie_cartan_report(sc, r0, eta)
        counts = {k: v for k, v in report.to_dict().items()
                  if k not in ("values", "bracket_matrix")}
        columns = (["t"] + _vector_columns("theta", sc.n)
                   + _vector_columns("Y", sc.n) + _vector_columns("xi", sc.n)
                   + ["h"] + _vector_columns("l", sc.n + 1)
                   + [f"casimir_{k}" for k in cas])
        rows = []
        for k in range(len(traj)):
            row = [traj.times[k]]
            row.extend(traj.thetas[k])
            row.extend(traj.Ys[k])
            row.extend(traj.xis[k])
            row.append(hs[k])
            row.extend(ls[k])
            row.extend(cas[key][k] for key in cas)
            rows.append([float(v) for v in row])
        _emit(cfg, _write_rows(cfg, columns, rows, {"report": counts}))
        return 0
    # euler-lagrange
    Y0 = _initial_vector(sc, cfg, rng, "Y0")
    ydot0 = _initial_vector(sc, cfg, rng, "Ydot0")
    yddot0 = _initial_vector(sc, cfg, rng, "Yddot0")
    try:
        traj = ver.integrate_euler_lagrange(sc, ver.ELState(Y0, ydot0, yddot0),
                                            cfg.T, cfg.h)
    except IntegrationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    columns = (["t"] + _vector_columns("Y", sc.n)
               + _vector_columns("Ydot", sc.n) + _vector_columns("Yddot", sc.n))
    rows = []
    for k in range(len(traj)):
        row = [traj.times[k]]
        row.extend(traj.Ys[k])
        row.extend(traj.Ydots[k])
        row.extend(traj.Yddots[k])
        rows.append([float(v) for v in row])
    _emit(cfg, _write_rows(cfg, columns, rows))
    return 0


def cmd_report(cfg: RunConfig) -> int:
    cfg.mode = "report"
    sc = _validate(cfg)
    rng = np.random.default_rng(cfg.seed)
    eta = _vector(sc, cfg.eta, "eta")
    x = grp.exp_map(sc, rng.normal(size=sc.n))
    r = red.ReducedState(grp.coadjoint(x, eta), rng.normal(size=sc.n),
                         rng.normal(size=sc.n))
    report = inv.lie_cartan_report(sc, r, eta)
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"
    _emit(cfg, text)
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    from . import checks

    algebra = None if cfg.algebra in (None, "all") else cfg.algebra
    if algebra is not None:
        try:
            alg.catalog(algebra)
        except ValueError as e:
            raise ConfigError(f"algebra: {e}")
    results = checks.run_all(
        algebra=algebra,
        T=None if cfg.T is None else float(cfg.T),
        h=None if cfg.h is None else float(cfg.h),
    )
    for result in results:
        print(result.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} properties passed")
    return 0 if not failed else 1


# ---------------------------------------------------------------------------


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="liecubic",
        description="Cubic-polynomial dynamics on compact Lie groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, mode_flag=True):
        p.add_argument("--algebra", help="so3, so4, so5, su2 or abelianN")
        if mode_flag:
            p.add_argument("--mode", choices=MODES,
                           help="full, reduced, euler-lagrange, report or verify")
        p.add_argument("--T", type=float, help="integration horizon")
        p.add_argument("--h", type=float, help="integration step")
        p.add_argument("--eta", help="momentum value, comma-separated floats")
        p.add_argument("--seed", type=int, help="seed for random initial data")
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--format", choices=FORMATS, help="jsonl or csv")
        p.add_argument("--config", help="JSON config file, or - for stdin")

    add_common(sub.add_parser("simulate", help="integrate and write a trajectory"))
    add_common(sub.add_parser("report", help="print the invariant report"),
               mode_flag=False)
    add_common(sub.add_parser("verify", help="run the acceptance property suite"),
               mode_flag=False)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("LIECUBIC_LOG", "WARNING").upper()
    try:
        logging.basicConfig(level=level)
    except ValueError:
        logging.basicConfig(level=logging.WARNING)
        log.warning("ignoring invalid LIECUBIC_LOG=%s", level)
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        if args.command == "report":
            cfg.mode = "report"
            return cmd_report(cfg)
        if args.command == "verify":
            cfg.mode = "verify"
            return cmd_verify(cfg)
        return cmd_simulate(cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except IntegrationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
