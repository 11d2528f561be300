"""Command-line entry point.

Subcommands:

  run         one simulation; writes diagnostics CSV, optional snapshots,
              and a run manifest
  converge    convergence ladder (mesh-coupled free streaming or fixed-grid
              time-step study); writes the ladder table CSV and a manifest
  list-cases  describe the built-in cases and their parameter provenance

Configuration comes from an INI-style file (sections [case], [grid], [run],
[output]) and/or command-line flags; flags override the file.  Exit codes:
0 success, 2 configuration error, 3 numerical abort.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
import time

from . import __version__
from .cases import (
    CASE_NAMES,
    CaseConfig,
    CaseConfigError,
    dt_convergence_study,
    free_streaming_convergence_study,
    run_case,
    write_convergence_csv,
)
from .diagnostics import write_csv
from .field import PoissonMethod
from .grid import GridConfigError
from .pushers import PusherKind
from .solver import NumericalAbortError, write_snapshot
from .splines import SplineKind

_CONFIG_KEYS = {
    "case": {"name", "k", "alpha", "n_p", "n_b", "u", "v_t", "mode", "v_width"},
    "grid": {"nodes_x", "nv", "length", "v_max"},
    "run": {"dt", "t_end", "pusher", "spline", "poisson"},
    "output": {"dir", "diag_stride", "snapshot_times"},
}


def _parse_snapshot_times(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(tok) for tok in text.replace(",", " ").split())


def _load_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise CaseConfigError(f"cannot read config file {path!r}")
    flat: dict[str, str] = {}
    for section in parser.sections():
        if section not in _CONFIG_KEYS:
            raise CaseConfigError(f"unknown config section [{section}]")
        for key, value in parser.items(section):
            if key not in _CONFIG_KEYS[section]:
                raise CaseConfigError(f"unknown key {key!r} in section [{section}]")
            flat["case" if (section, key) == ("case", "name") else key] = value
    return flat


def _build_case_config(args) -> CaseConfig:
    settings: dict[str, str] = {}
    if args.config:
        settings.update(_load_config_file(args.config))

    overrides = {
        "case": args.case, "k": args.k, "alpha": args.alpha,
        "n_p": args.n_p, "n_b": args.n_b, "u": args.u, "v_t": args.v_t,
        "mode": args.mode, "v_width": args.v_width,
        "nodes_x": args.nodes_x, "nv": args.nv,
        "length": args.length, "v_max": args.v_max,
        "dt": args.dt, "t_end": args.t_end,
        "pusher": args.pusher, "spline": args.spline, "poisson": args.poisson,
        "dir": args.out_dir, "diag_stride": args.diag_stride,
        "snapshot_times": args.snapshot_times,
    }
    for key, value in overrides.items():
        if value is not None:
            settings[key] = value

    if "case" not in settings:
        raise CaseConfigError("missing required setting: case (set --case or [case] name)")

    cfg = CaseConfig(case=str(settings["case"]))
    floats = {"k": "k", "alpha": "alpha", "n_p": "n_p", "n_b": "n_b", "u": "u",
              "v_t": "v_t", "v_width": "v_width", "length": "length",
              "v_max": "v_max", "dt": "dt", "t_end": "t_end"}
    ints = {"mode": "mode", "nodes_x": "nodes_x", "nv": "nv",
            "diag_stride": "diag_stride"}
    try:
        for key, attr in floats.items():
            if key in settings:
                setattr(cfg, attr, float(settings[key]))
        for key, attr in ints.items():
            if key in settings:
                setattr(cfg, attr, int(settings[key]))
        if "pusher" in settings:
            cfg.pusher = PusherKind.parse(str(settings["pusher"]))
        if "spline" in settings:
            cfg.spline = SplineKind.parse(str(settings["spline"]))
        if "poisson" in settings:
            cfg.poisson = PoissonMethod.parse(str(settings["poisson"]))
        if "dir" in settings:
            cfg.out_dir = str(settings["dir"])
        if "snapshot_times" in settings:
            raw = settings["snapshot_times"]
            cfg.snapshot_times = (
                raw if isinstance(raw, tuple) else _parse_snapshot_times(str(raw))
            )
    except ValueError as exc:
        raise CaseConfigError(str(exc)) from exc
    return cfg


def _config_echo(cfg: CaseConfig) -> dict:
    cfg = cfg.resolved()
    return {
        "case": cfg.case, "k": cfg.k, "alpha": cfg.alpha,
        "n_p": cfg.n_p, "n_b": cfg.n_b, "u": cfg.u, "v_t": cfg.v_t,
        "mode": cfg.mode, "v_width": cfg.v_width,
        "nodes_x": cfg.nodes_x, "nv": cfg.nv,
        "length": cfg.length, "v_max": cfg.v_max,
        "dt": cfg.dt, "t_end": cfg.t_end,
        "pusher": cfg.pusher.value, "spline": cfg.spline.name.lower(),
        "poisson": cfg.poisson.value,
        "out_dir": cfg.out_dir, "diag_stride": cfg.diag_stride,
        "snapshot_times": list(cfg.snapshot_times),
    }


def _write_manifest(out_dir, cfg, outputs, started, finished) -> str:
    manifest = {
        "config": _config_echo(cfg),
        "version": __version__,
        "started_at": started,
        "finished_at": finished,
        "outputs": sorted(outputs),
        "non_paper_defaults": cfg.artifact_defaults(),
    }
    path = os.path.join(out_dir, "run_manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _cmd_run(args) -> int:
    cfg = _build_case_config(args)
    started = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    result = run_case(cfg)
    resolved = cfg.resolved()
    os.makedirs(resolved.out_dir, exist_ok=True)

    outputs = []
    csv_path = os.path.join(resolved.out_dir, "diagnostics.csv")
    write_csv(csv_path, result.records)
    outputs.append(csv_path)

    grid = resolved.build_grid()
    for t, values in sorted(result.snapshots.items()):
        snap_path = os.path.join(resolved.out_dir, f"snapshot_t{t:g}.dat")
        write_snapshot(snap_path, grid, t, values)
        outputs.append(snap_path)

    finished = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    _write_manifest(resolved.out_dir, cfg, outputs, started, finished)
    for path in outputs:
        if not os.path.exists(path):  # manifest invariant
            raise RuntimeError(f"declared output missing: {path}")
    print(f"wrote {csv_path} ({len(result.records)} rows)")
    return 0


def _cmd_converge(args) -> int:
    cfg = _build_case_config(args)
    started = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    resolved = cfg.resolved()
    if args.study == "dt" or (args.study is None and args.dts):
        if not args.dts:
            raise CaseConfigError("dt mode needs --dts (comma-separated)")
        if args.ref_dt is None:
            raise CaseConfigError("dt mode needs --ref-dt")
        dts = tuple(float(tok) for tok in args.dts.split(","))
        result = dt_convergence_study(cfg, dts, float(args.ref_dt))
    else:
        levels = args.ladder or 4
        base = args.base_nodes or 32
        counts = tuple(base * 2**i for i in range(levels))
        result = free_streaming_convergence_study(
            cfg, counts, dt_coefficient=args.dt_coeff, dt_exponent=args.dt_exponent
        )
    os.makedirs(resolved.out_dir, exist_ok=True)
    table_path = os.path.join(resolved.out_dir, "convergence.csv")
    write_convergence_csv(table_path, result)
    finished = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    _write_manifest(resolved.out_dir, cfg, [table_path], started, finished)
    for row in result.rows:
        order = "-" if row.observed_order != row.observed_order else f"{row.observed_order:.3f}"
        print(f"resolution={row.resolution:>6}  dt={row.dt:.6g}  "
              f"l1_error={row.l1_error:.6e}  order={order}")
    if not result.monotone:
        print("warning: errors are not monotone", file=sys.stderr)
    print(f"wrote {table_path}")
    return 0


def _cmd_list_cases(_args) -> int:
    descriptions = {
        "two_stream": "counter-streaming equilibrium, seeded cosine mode "
                      "(k=0.2, alpha=0.05, L=2*pi/k, R=9; standard values)",
        "bump_on_tail": "Maxwellian bulk + drifting beam on [0, 20*pi] "
                        "(beam n_p, n_b, u=4.5, v_t=0.5 standard; "
                        "alpha=0.04, k=0.3 are artifact defaults)",
        "free_streaming": "zero-field translation oracle (artifact test case)",
        "custom": "perturbed Maxwellian, smooth self-consistent profile "
                  "(artifact test case)",
    }
    for name in CASE_NAMES:
        print(f"{name:15s} {descriptions[name]}")
    return 0


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI config file; flags override it")
    p.add_argument("--case", choices=CASE_NAMES)
    p.add_argument("--k", type=float, help="perturbation wavenumber")
    p.add_argument("--alpha", type=float, help="perturbation amplitude")
    p.add_argument("--n-p", dest="n_p", type=float, help="bulk density prefactor")
    p.add_argument("--n-b", dest="n_b", type=float, help="beam density prefactor")
    p.add_argument("--u", type=float, help="beam drift velocity")
    p.add_argument("--v-t", dest="v_t", type=float, help="beam thermal width")
    p.add_argument("--mode", type=int, help="x mode number of the test profile")
    p.add_argument("--v-width", dest="v_width", type=float, help="profile thermal width")
    p.add_argument("--nodes-x", dest="nodes_x", type=int, help="distinct x nodes")
    p.add_argument("--nv", type=int, help="velocity intervals")
    p.add_argument("--L", dest="length", type=float, help="spatial period")
    p.add_argument("--R", dest="v_max", type=float, help="velocity cutoff")
    p.add_argument("--dt", type=float)
    p.add_argument("--T", dest="t_end", type=float)
    p.add_argument("--pusher", choices=[k.value for k in PusherKind])
    p.add_argument("--spline", choices=["linear", "cubic"])
    p.add_argument("--poisson", choices=[m.value for m in PoissonMethod])
    p.add_argument("--out-dir", dest="out_dir")
    p.add_argument("--diag-stride", dest="diag_stride", type=int)
    p.add_argument("--snapshot-times", dest="snapshot_times",
                   help="comma-separated times at which to dump nodal f")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vlasov-fsl",
        description="Forward semi-Lagrangian Vlasov-Poisson solver",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one case")
    _add_common_flags(run_p)
    run_p.set_defaults(func=_cmd_run)

    conv_p = sub.add_parser("converge", help="run a convergence ladder")
    _add_common_flags(conv_p)
    conv_p.add_argument("--study", choices=["h", "dt"], default=None,
                        help="h: mesh ladder (free streaming); dt: fixed-grid dt ladder")
    conv_p.add_argument("--ladder", type=int, help="number of h-ladder levels")
    conv_p.add_argument("--base-nodes", dest="base_nodes", type=int,
                        help="coarsest node count of the h ladder")
    conv_p.add_argument("--dt-coeff", dest="dt_coeff", type=float, default=0.5,
                        help="c in dt = c * h**p for the h ladder")
    conv_p.add_argument("--dt-exponent", dest="dt_exponent", type=float,
                        default=2.0 / 3.0, help="p in dt = c * h**p")
    conv_p.add_argument("--dts", help="comma-separated dt ladder (dt mode)")
    conv_p.add_argument("--ref-dt", dest="ref_dt", type=float,
                        help="reference time step (dt mode)")
    conv_p.set_defaults(func=_cmd_converge)

    list_p = sub.add_parser("list-cases", help="describe the built-in cases")
    list_p.set_defaults(func=_cmd_list_cases)
    return parser


def main(argv=None) -> int:
    if os.environ.get("VLASOV_FSL_THREADS"):
        # cap BLAS/OpenMP worker pools before numpy gets busy
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, os.environ["VLASOV_FSL_THREADS"])
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CaseConfigError, GridConfigError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalAbortError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())
