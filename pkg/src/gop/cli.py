"""Command line runner.

::

    gop run <config> [--out report.json] [--seed n]
    gop simulate <config> [--out samples.csv] [--seed n]
    gop batch <dir> [--out dir] [--workers n]
    gop list

``<config>`` is a TOML file or the name of a bundled config. Exit codes:
0 success, 2 invalid configuration, 3 recovery failure.
"""

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .errors import ConfigError, DomainEscape, GOPError, SchemeError
from .recovery import recover
from .sampling import KernelMoment, read_measurements, write_measurements

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_CONFIG, EXIT_RECOVERY = 0, 2, 3


def _resolve(path):
    p = Path(path)
    if p.exists() or p.suffix == ".toml":
        return p
    return cfgmod.bundled_path(str(path))


def _load(path, seed=None):
    p = _resolve(path)
    cfg = cfgmod.load_config(p)
    if seed is not None:
        cfg.seed = seed
    try:
        scheme = cfg.build_scheme()
    except (SchemeError, DomainEscape) as exc:
        raise ConfigError("scheme", str(exc)) from None
    return cfg, scheme


def add_noise(measurements, sigma, rng):
    """Add i.i.d. complex Gaussian noise of standard deviation ``sigma``."""
    if sigma == 0:
        return dict(measurements)
    keys = list(measurements)
    z = rng.standard_normal(len(keys)) + 1j * rng.standard_normal(len(keys))
    return {k: measurements[k] + sigma * z[i] / np.sqrt(2) for i, k in enumerate(keys)}


def simulate_measurements(cfg, scheme):
    """Raw measurements of the configured ground truth, noise included."""
    f = cfg.expansion()
    if f is None:
        raise ConfigError("truth", "simulation needs a ground truth")
    exact = scheme.simulate(f)
    return add_noise(exact, cfg.noise_sigma, np.random.default_rng(cfg.seed))


def _pair_errors(truth, result):
    lam, c = truth
    order = sorted(range(len(lam)), key=lambda i: (round(lam[i].real, 12), lam[i].imag))
    lam, c = lam[order], c[order]
    est = result.parameters
    if len(est) == len(lam):
        idx = list(range(len(lam)))
    else:
        # nearest true parameter for every recovered one
        idx = [int(np.argmin(np.abs(lam - v))) for v in est]
    out = {
        "parameter_abs_errors": [float(abs(est[i] - lam[j])) for i, j in enumerate(idx)],
        "coefficient_abs_errors": [float(abs(result.coefficients[i] - c[j])) for i, j in enumerate(idx)],
        "unrounded_parameter_abs_errors": [
            float(abs(result.unrounded_parameters[i] - lam[j])) for i, j in enumerate(idx)],
    }
    for key in list(out):
        out["max_" + key.replace("_errors", "_error")] = max(out[key], default=0.0)
    return out


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(u) for k, u in v.items()}
    if isinstance(v, list):
        return [_jsonable(u) for u in v]
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)


def execute(cfg, scheme, measurements):
    """Recover and build the report dict; returns ``(report, exit_code)``."""
    start = time.perf_counter()
    report = {
        "schema_version": SCHEMA_VERSION,
        "name": cfg.name,
        "config": _jsonable(cfg.raw),
        "seed": cfg.seed,
        "scheme": {"kind": cfg.scheme_kind, "M": cfg.M, "hankel": scheme.hankel,
                   "measurement_count": scheme.measurement_count},
    }
    code = EXIT_OK
    try:
        result = recover(scheme, measurements, rank_tol=cfg.rank_tol, snap=cfg.snap)
        report["status"] = "ok"
        report["error"] = None
        report["result"] = result.to_dict()
    except GOPError as exc:
        result = None
        code = EXIT_RECOVERY
        report["status"] = "failed"
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        report["result"] = None
    if cfg.truth is not None:
        report["errors"] = None if result is None else _pair_errors(cfg.truth, result)
    report["wall_time_s"] = time.perf_counter() - start
    return report, code


def dump_report(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def kernel_curves(scheme, points=201):
    """Rows ``x, <kernel id>...`` sampling every kernel of the scheme."""
    kernels = [(k, m.kernel) for k, m in scheme.measurements.items() if isinstance(m, KernelMoment)]
    if not kernels:
        return []
    a = min(kern.a for _, kern in kernels)
    b = max(kern.b for _, kern in kernels)
    x = np.linspace(a, b, points)
    rows = [["x"] + [k for k, _ in kernels]]
    vals = [kern(x) for _, kern in kernels]
    for i, xi in enumerate(x):
        rows.append([repr(float(xi))] + [repr(float(v[i])) for v in vals])
    return rows


def run(path, out=None, seed=None):
    """Run one experiment; writes report JSON and the measurement CSV."""
    cfg, scheme = _load(path, seed)
    if cfg.truth is not None:
        measurements = simulate_measurements(cfg, scheme)
    else:
        measurements = read_measurements(cfg.measurements_path)
    report, code = execute(cfg, scheme, measurements)
    out = Path(out) if out else Path(f"{cfg.name}.report.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dump_report(report))
    write_measurements(out.with_name(out.name.replace(".report.json", "") + ".measurements.csv"),
                       {k: measurements[k] for k in scheme.measurements})
    if cfg.kernel_curves is not None:
        rows = kernel_curves(scheme)
        with open(out.parent / cfg.kernel_curves, "w", newline="") as fh:
            csv.writer(fh).writerows(rows)
    return report, code


def _run_isolated(args):
    path, out = args
    try:
        report, code = run(path, out)
        return str(path), code, report.get("status")
    except ConfigError as exc:
        return str(path), EXIT_CONFIG, str(exc)


def batch(directory, out_dir=None, workers=None):
    """Run every ``*.toml`` in ``directory`` in separate processes."""
    directory = Path(directory)
    paths = sorted(directory.glob("*.toml"))
    if not paths:
        raise ConfigError("batch", f"no .toml files in {directory}")
    out_dir = Path(out_dir) if out_dir else directory
    jobs = [(p, out_dir / f"{p.stem}.report.json") for p in paths]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_isolated, jobs))


def _summary(report):
    if report["status"] != "ok":
        return f"{report['name']}: FAILED {report['error']['type']}: {report['error']['message']}"
    r = report["result"]
    line = f"{report['name']}: M={len(r['parameters'])} residual={r['residual_norm']:.2e}"
    if report.get("errors"):
        e = report["errors"]
        line += (f" max|dlam|={e['max_parameter_abs_error']:.2e}"
                 f" max|dc|={e['max_coefficient_abs_error']:.2e}")
    return line


def main(argv=None):
    parser = argparse.ArgumentParser(prog="gop", description="Generalized operator based Prony recovery.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="simulate or load data and recover")
    p_run.add_argument("config")
    p_run.add_argument("--out")
    p_run.add_argument("--seed", type=int)
    p_sim = sub.add_parser("simulate", help="write the raw measurements as CSV")
    p_sim.add_argument("config")
    p_sim.add_argument("--out")
    p_sim.add_argument("--seed", type=int)
    p_batch = sub.add_parser("batch", help="run every config in a directory")
    p_batch.add_argument("directory")
    p_batch.add_argument("--out")
    p_batch.add_argument("--workers", type=int)
    sub.add_parser("list", help="show bundled configs")
    args = parser.parse_args(argv)

    try:
        if args.command == "list":
            print("\n".join(cfgmod.bundled_configs()))
            return EXIT_OK
        if args.command == "run":
            report, code = run(args.config, args.out, args.seed)
            print(_summary(report))
            return code
        if args.command == "simulate":
            cfg, scheme = _load(args.config, args.seed)
            meas = simulate_measurements(cfg, scheme)
            if args.out:
                write_measurements(args.out, meas)
            else:
                buf = io.StringIO()
                w = csv.writer(buf)
                w.writerow(["measurement_id", "real", "imag"])
                for k, v in meas.items():
                    w.writerow([k, repr(v.real), repr(v.imag)])
                sys.stdout.write(buf.getvalue())
            return EXIT_OK
        results = batch(args.directory, args.out, args.workers)
        for path, code, status in results:
            print(f"{path}: exit {code} ({status})")
        return max(code for _, code, _ in results)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
