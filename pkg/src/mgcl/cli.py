"""Command-line entry point: `mgcl <scenario> --config <file>`.

Exit codes: 0 success, 1 numerical-convergence failure (including
partial sweeps), 2 configuration error. All report files are written
atomically (temp file + rename) and a run manifest records the config
hash, seed, component versions, and wall time.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
import time

import numpy as np
import scipy

from . import __version__, _kernels, acceptance
from .config import SCENARIOS, ScenarioConfig, parse_config
from .conformal import export_chart, solve_chart
from .curvature import curvature_report
from .errors import ConfigError, ConvergenceError, MgclError
from .estimates import bernstein_decay, heinz_probe, schauder_probe, theta_sweep
from .plotting import PlotStyle, emit_plot
from .surfaces import make_family


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mgcl-tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_json(path: str, payload) -> None:
    _atomic_write(path, json.dumps(payload, indent=1) + "\n")


def _fmt17(x: float) -> str:
    return f"{float(x):.17g}"


def _jsonable_family(family: dict) -> dict:
    out = dict(family)
    out["params"] = [
        str(p) if isinstance(p, complex) else p for p in family.get("params", [])
    ]
    return out


def _build_surface(cfg: ScenarioConfig):
    desc = cfg.surface_descriptor()
    try:
        return make_family(desc["kind"], desc["params"], cfg.radius)
    except MgclError as exc:
        raise ConfigError(f"invalid surface config: {exc}") from exc


def _run_analyze(cfg: ScenarioConfig, outdir: str) -> tuple[int, list]:
    surface = _build_surface(cfg)
    chart = solve_chart(surface, modes=cfg.modes, grid=cfg.grid, tol=cfg.tol)
    report = curvature_report(surface, chart, cfg.point)
    outputs = []
    if "json" in cfg.formats:
        path = os.path.join(outdir, "analyze_report.json")
        _atomic_json(
            path,
            {
                "surface": surface.describe(),
                "chart": {
                    "fast_path": chart.fast_path,
                    "conformality": chart.residuals.conformality,
                },
                "report": report.to_json_dict(),
            },
        )
        outputs.append(path)
    if "csv" in cfg.formats:
        path = os.path.join(outdir, "analyze_report.csv")
        header = "u,v,normal,H,K,kappa1,kappa2,K_total,K_intrinsic"
        rows = [header]
        for i, c in enumerate(report.per_normal):
            rows.append(
                ",".join(
                    [_fmt17(report.point[0]), _fmt17(report.point[1]), str(i)]
                    + [_fmt17(v) for v in (c.H, c.K, c.kappa1, c.kappa2)]
                    + [_fmt17(report.K_total), _fmt17(report.K_intrinsic)]
                )
            )
        _atomic_write(path, "\n".join(rows) + "\n")
        outputs.append(path)
    return 0, outputs


def _run_conformal(cfg: ScenarioConfig, outdir: str) -> tuple[int, list]:
    surface = _build_surface(cfg)
    chart = solve_chart(surface, modes=cfg.modes, grid=cfg.grid, tol=cfg.tol)
    outputs = []
    csv_path = os.path.join(outdir, "chart.csv")
    sidecar_path = os.path.join(outdir, "chart_sidecar.json")
    tmp_csv = csv_path + ".tmp"
    tmp_sidecar = sidecar_path + ".tmp"
    export_chart(chart, tmp_csv, tmp_sidecar)
    if "csv" in cfg.formats:
        os.replace(tmp_csv, csv_path)
        outputs.append(csv_path)
    else:
        os.unlink(tmp_csv)
    if "json" in cfg.formats:
        os.replace(tmp_sidecar, sidecar_path)
        outputs.append(sidecar_path)
    else:
        os.unlink(tmp_sidecar)
    if "svg" in cfg.formats:
        path = os.path.join(outdir, "conformal_psi.svg")
        pts = list(zip(chart.boundary_map.theta, chart.boundary_map.psi - chart.boundary_map.theta))
        if emit_plot(
            pts,
            PlotStyle(title="boundary correspondence", x_label="theta",
                      y_label="psi(theta) - theta"),
            path,
        ):
            outputs.append(path)
    return 0, outputs


def _run_theta_sweep(cfg: ScenarioConfig, outdir: str) -> tuple[int, list]:
    curve = theta_sweep(cfg.surface_descriptor(), cfg.radii)
    outputs = []
    failed = {i for i, _ in curve.failures}
    messages = dict(curve.failures)
    if "csv" in cfg.formats:
        path = os.path.join(outdir, "theta_sweep.csv")
        rows = ["R,ratio,kappa_sq_max,sup_norm,status"]
        for i, r in enumerate(curve.radii):
            status = f"failed:{messages[i]}" if i in failed else "ok"
            rows.append(
                ",".join(
                    [
                        _fmt17(r),
                        _fmt17(curve.ratios[i]),
                        _fmt17(curve.kappa_sq_max[i]),
                        _fmt17(curve.sup_norms[i]),
                        status.replace(",", ";"),
                    ]
                )
            )
        _atomic_write(path, "\n".join(rows) + "\n")
        outputs.append(path)
    if "json" in cfg.formats:
        path = os.path.join(outdir, "theta_sweep_sidecar.json")
        _atomic_json(
            path,
            {
                "family": _jsonable_family(curve.family),
                "fitted_exponent": curve.fitted_exponent,
                "asymptote": curve.asymptote,
                "degenerate": curve.degenerate,
                "failures": [[i, msg] for i, msg in curve.failures],
            },
        )
        outputs.append(path)
    if "svg" in cfg.formats:
        path = os.path.join(outdir, "theta_sweep.svg")
        pts = [
            (r, v)
            for r, v in zip(curve.radii, curve.ratios)
            if np.isfinite(v)
        ]
        style = PlotStyle(
            title="curvature bound ratio",
            x_label="R",
            y_label="R^4 max kappa^2 / sup^2",
            x_log=True,
            asymptote=None if curve.degenerate else curve.asymptote,
        )
        if emit_plot(pts, style, path):
            outputs.append(path)
    return (1 if curve.failures else 0), outputs


def _run_probe(cfg: ScenarioConfig, outdir: str, kind: str) -> tuple[int, list]:
    if kind == "schauder":
        report = schauder_probe(cfg.samples, cfg.seed)
        name = "probe_schauder.json"
    else:
        report = heinz_probe(cfg.samples, cfg.seed)
        name = "probe_heinz.json"
    outputs = []
    if "json" in cfg.formats:
        path = os.path.join(outdir, name)
        _atomic_json(path, report.to_json_dict())
        outputs.append(path)
    return 0, outputs


def _run_bernstein(cfg: ScenarioConfig, outdir: str) -> tuple[int, list]:
    table = bernstein_decay(cfg.omega_coeff, cfg.omega, cfg.theta, cfg.radii)
    outputs = []
    if "csv" in cfg.formats:
        path = os.path.join(outdir, "bernstein.csv")
        rows = ["R,bound"]
        for r, b in zip(table.radii, table.bounds):
            rows.append(f"{_fmt17(r)},{_fmt17(b)}")
        _atomic_write(path, "\n".join(rows) + "\n")
        outputs.append(path)
    if "json" in cfg.formats:
        path = os.path.join(outdir, "bernstein_sidecar.json")
        _atomic_json(
            path,
            {
                "omega": cfg.omega,
                "omega_coeff": cfg.omega_coeff,
                "theta": cfg.theta,
                "slope": table.slope,
                "expected_slope": table.expected_slope,
                "slope_ok": table.slope_ok,
            },
        )
        outputs.append(path)
    if "svg" in cfg.formats:
        path = os.path.join(outdir, "bernstein.svg")
        style = PlotStyle(
            title=f"decay bound, growth exponent {cfg.omega:g}",
            x_label="R",
            y_label="bound",
            x_log=True,
            y_log=True,
        )
        if emit_plot(list(zip(table.radii, table.bounds)), style, path):
            outputs.append(path)
    return 0, outputs


def _run_verify_all(cfg: ScenarioConfig, outdir: str) -> tuple[int, list]:
    results = acceptance.run_all(printer=print)
    ok = all(r.passed and r.in_budget for r in results)
    outputs = []
    if "json" in cfg.formats:
        path = os.path.join(outdir, "acceptance_report.json")
        _atomic_json(
            path,
            [
                {
                    "index": r.index,
                    "name": r.name,
                    "passed": r.passed,
                    "in_budget": r.in_budget,
                    "details": r.details,
                    "elapsed_s": r.elapsed,
                    "budget_s": r.budget,
                }
                for r in results
            ],
        )
        outputs.append(path)
    print("verify-all:", "PASS" if ok else "FAIL")
    return (0 if ok else 1), outputs


_RUNNERS = {
    "analyze": _run_analyze,
    "conformal": _run_conformal,
    "theta-sweep": _run_theta_sweep,
    "probe-schauder": lambda cfg, out: _run_probe(cfg, out, "schauder"),
    "probe-heinz": lambda cfg, out: _run_probe(cfg, out, "heinz"),
    "bernstein": _run_bernstein,
    "verify-all": _run_verify_all,
}


def _apply_thread_cap() -> None:
    raw = os.environ.get("MGCL_THREADS", "").strip()
    if not raw:
        return
    try:
        n = int(raw)
    except ValueError:
        print(f"warning: ignoring non-integer MGCL_THREADS={raw!r}", file=sys.stderr)
        return
    if n > 0 and _kernels.USING_NUMBA:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mgcl",
        description="Minimal surface graph curvature laboratory",
    )
    parser.add_argument("scenario", choices=SCENARIOS)
    parser.add_argument("--config", required=True, help="scenario config file")
    parser.add_argument("--out", default=None, help="output directory override")
    parser.add_argument("--seed", type=int, default=None, help="seed override")
    parser.add_argument(
        "--format", default=None, help="comma-separated subset of csv,json,svg"
    )
    parser.add_argument("--version", action="version", version=f"mgcl {__version__}")
    args = parser.parse_args(argv)

    started = time.perf_counter()
    try:
        cfg = parse_config(args.config)
        if cfg.scenario != args.scenario:
            raise ConfigError(
                f"config scenario {cfg.scenario!r} does not match "
                f"command {args.scenario!r}"
            )
        if args.seed is not None:
            cfg.seed = args.seed
        if args.out is not None:
            cfg.directory = args.out
        if args.format is not None:
            fmts = tuple(t.strip() for t in args.format.split(",") if t.strip())
            for f in fmts:
                if f not in ("csv", "json", "svg"):
                    raise ConfigError(f"unknown format {f!r} in --format")
            cfg.formats = fmts
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    _apply_thread_cap()
    outdir = cfg.directory
    os.makedirs(outdir, exist_ok=True)

    status = 0
    outputs = []
    error = None
    try:
        status, outputs = _RUNNERS[cfg.scenario](cfg, outdir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        error = f"convergence failure: {exc}"
        status = 1
    except MgclError as exc:
        error = f"numerical failure: {type(exc).__name__}: {exc}"
        status = 1
    if error:
        print(error, file=sys.stderr)

    with open(args.config, "rb") as fh:
        config_hash = hashlib.sha256(fh.read()).hexdigest()
    manifest = {
        "scenario": cfg.scenario,
        "config_sha256": config_hash,
        "seed": cfg.seed,
        "versions": {
            "mgcl": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "kernel_backend": _kernels.backend_name(),
        },
        "wall_time_s": time.perf_counter() - started,
        "outputs": [os.path.basename(p) for p in outputs],
        "exit_status": status,
        "error": error,
    }
    _atomic_json(os.path.join(outdir, "run_manifest.json"), manifest)
    return status


if __name__ == "__main__":
    sys.exit(main())
