"""
Command-line front end: convergence studies, Riemann runs, performance
comparisons and stability-region sampling.

Exit codes: 0 success, 2 configuration error, 3 solver failure,
4 acceptance-threshold violation when --check is given.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from pathlib import Path

import numpy as np

from . import harness, solver
from .euler import UnphysicalStateError
from .rk import tableau_by_name
from .solver import SchemeConfig
from .weno import ReconstructionScheme

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_CHECK = 4


class ConfigError(Exception):
    pass


def _parse_grids(text):
    try:
        grids = [int(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"bad grid list {text!r}; expected e.g. 32,64,128") from None
    if not grids or any(n < 1 for n in grids):
        raise ConfigError(f"bad grid list {text!r}")
    return grids


def _parse_methods(text):
    try:
        methods = [int(tok) for tok in str(text).split(",") if tok.strip()]
    except ValueError:
        raise ConfigError(f"bad method list {text!r}; expected e.g. 1,2,3") from None
    if not methods or any(m not in (1, 2, 3) for m in methods):
        raise ConfigError(f"methods must be drawn from 1,2,3, got {text!r}")
    return methods


def _load_ini(path):
    """INI defaults: sections [problem] [scheme] [output]; flat dict out."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    out = {}
    mapping = {
        ("problem", "name"): "problem",
        ("problem", "t_end"): "t_end",
        ("problem", "grids"): "grids",
        ("scheme", "scheme"): "scheme",
        ("scheme", "method"): "method",
        ("scheme", "flux"): "flux",
        ("scheme", "cfl"): "cfl",
        ("scheme", "linear_weights"): "linear_weights",
        ("output", "dir"): "out",
        ("output", "threads"): "threads",
    }
    for (section, key), dest in mapping.items():
        if parser.has_option(section, key):
            out[dest] = parser.get(section, key)
    return out


def _build_parser():
    parser = argparse.ArgumentParser(prog="fvweno",
                                     description="High-order WENO finite volume experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="INI file with [problem] [scheme] [output] defaults")
        p.add_argument("--problem", help="problem name")
        p.add_argument("--scheme", choices=["js5", "z5", "js7", "z7"], help="reconstruction")
        p.add_argument("--method", help="correction method(s), e.g. 2 or 1,2,3")
        p.add_argument("--flux", choices=["lf", "roe"], help="numerical flux")
        p.add_argument("--grids", help="comma-separated resolutions, e.g. 32,64,128")
        p.add_argument("--cfl", type=float, help="CFL number in (0, 1]")
        p.add_argument("--t-end", dest="t_end", type=float, help="final time")
        p.add_argument("--out", help="output directory (default .)")
        p.add_argument("--threads", type=int, help="worker threads (recorded; kernels "
                                                   "are deterministic regardless)")
        p.add_argument("--linear-weights", action="store_true", default=None,
                       help="test mode: optimal linear weights instead of JS/Z")

    p_conv = sub.add_parser("converge", help="grid-refinement convergence study")
    common(p_conv)
    p_conv.add_argument("--check", action="store_true",
                        help="validate EOCs against the acceptance windows")
    p_conv.add_argument("--ref-factor", type=int, default=2,
                        help="self-refined reference grid factor (default 2)")

    p_rp = sub.add_parser("riemann", help="four-quadrant Riemann problem run")
    common(p_rp)

    p_perf = sub.add_parser("perf", help="normalized runtime comparison of methods")
    common(p_perf)
    p_perf.add_argument("--steps", type=int, default=10, help="steps per timed run")
    p_perf.add_argument("--repeats", type=int, default=3, help="timed repetitions")

    p_stab = sub.add_parser("stability", help="emit |R(z)|=1 boundary samples")
    common(p_stab)
    return parser


def _merged(args, **defaults):
    """Per-command defaults, overridden by file values, then CLI flags."""
    merged = dict(defaults)
    if args.config:
        merged.update(_load_ini(args.config))
    for key in ("problem", "scheme", "method", "flux", "grids", "cfl", "t_end",
                "out", "threads", "linear_weights"):
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    merged.setdefault("cfl", 0.9)
    merged.setdefault("out", ".")
    merged.setdefault("linear_weights", False)
    return merged


def _scheme_from(merged):
    scheme = ReconstructionScheme.from_name(str(merged["scheme"]))
    if merged["linear_weights"] in (True, "true", "1", "yes"):
        scheme = ReconstructionScheme(scheme.order, "linear")
    return scheme


def _apply_threads(merged, meta_lines):
    threads = merged.get("threads")
    if threads is None:
        return
    threads = int(threads)
    if threads < 1:
        raise ConfigError(f"--threads must be positive, got {threads}")
    try:
        import numba
        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
    except Exception:
        pass
    meta_lines.append(f"threads: {threads}")


def _cmd_converge(args):
    merged = _merged(args, problem="linear_advect", scheme="z5", flux="lf")
    meta = []
    _apply_threads(merged, meta)
    problem = harness.get_problem(str(merged["problem"]))
    if problem.name == "riemann2d_config5":
        raise ConfigError("converge needs a smooth problem with a reference solution")
    scheme = _scheme_from(merged)
    methods = _parse_methods(merged.get("method", "1,2,3"))
    grids = _parse_grids(merged.get("grids", "32,64,128"))
    cfl = float(merged["cfl"])
    t_end = float(merged["t_end"]) if "t_end" in merged else None
    outdir = Path(merged["out"])
    outdir.mkdir(parents=True, exist_ok=True)

    configs = [SchemeConfig(scheme=scheme, method=m, flux=str(merged["flux"]), cfl=cfl,
                            bc_x=problem.bc, bc_y=problem.bc, gamma=problem.gamma)
               for m in methods]
    reference = "exact" if (problem.exact_primitive or problem.exact_period) else "self_refined"
    report = harness.run_convergence_study(problem, configs, grids, reference=reference,
                                           t_end=t_end, ref_factor=args.ref_factor)

    for series in report.series:
        harness.write_report_csv(report, outdir / f"report_{series.label}.csv", series.label)
    harness.write_report_csv(report, outdir / "report.csv", report.series[0].label)
    table = harness.format_table(report)
    (outdir / "table.txt").write_text(table + "".join(f"# {m}\n" for m in meta))
    print(table, end="")

    failed = [f"{s.label}@{n}: {msg}" for s in report.series for n, msg in s.failures.items()]
    if failed:
        print("solver failures:\n  " + "\n  ".join(failed), file=sys.stderr)
        return EXIT_SOLVER
    if args.check:
        bad = []
        for series, config in zip(report.series, configs):
            final = series.eocs[-1] if series.eocs else None
            if final is None or not harness.check_eoc_window(problem.name, scheme.name,
                                                             config.method, final):
                bad.append(f"{series.label}: final EOC {final}")
        if bad:
            print("acceptance check failed:\n  " + "\n  ".join(bad), file=sys.stderr)
            return EXIT_CHECK
        print("acceptance check passed")
    return EXIT_OK


def _cmd_riemann(args):
    merged = _merged(args, problem="riemann2d_config5", scheme="js5", flux="roe",
                     method="1")
    meta = []
    _apply_threads(merged, meta)
    problem = harness.get_problem(str(merged["problem"]))
    scheme = _scheme_from(merged)
    methods = _parse_methods(merged["method"])
    grids = _parse_grids(merged.get("grids", "128"))
    flux = str(merged["flux"])
    t_end = float(merged["t_end"]) if "t_end" in merged else problem.t_end_default
    outdir = Path(merged["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    tableau = tableau_by_name("rk5" if scheme.order == 5 else "rk7")

    for n in grids:
        for method in methods:
            config = SchemeConfig(scheme=scheme, method=method, flux=flux,
                                  cfl=float(merged["cfl"]), bc_x=problem.bc,
                                  bc_y=problem.bc, gamma=problem.gamma)
            field = solver.advance_to(harness.init_problem(problem, problem.grid(n)),
                                      t_end, config, tableau)
            if not np.all(np.isfinite(field.interior)):
                print(f"non-finite field in {config.label} at {n}^2", file=sys.stderr)
                return EXIT_SOLVER
            tag = f"{problem.name}_{config.label}_{n}"
            harness.emit_schlieren(field, outdir / f"schlieren_{tag}.pgm")
            harness.emit_field_csv(field, outdir / f"field_{tag}.csv", problem.gamma)
            print(f"{tag}: t={field.time:g} written")
    return EXIT_OK


def _cmd_perf(args):
    merged = _merged(args, problem="isentropic_vortex", scheme="z5", flux="lf")
    meta = []
    _apply_threads(merged, meta)
    problem = harness.get_problem(str(merged["problem"]))
    scheme = _scheme_from(merged)
    methods = _parse_methods(merged.get("method", "1,2,3"))
    grids = _parse_grids(merged.get("grids", "256"))
    outdir = Path(merged["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    if not any(m.startswith("threads") for m in meta):
        try:
            import numba
            meta.append(f"threads: {numba.config.NUMBA_NUM_THREADS}")
        except Exception:
            meta.append("threads: 1")
    lines = ["method,normalized,median_s"]
    for n in grids:
        ratios, medians = harness.perf_report(problem, methods, n, scheme,
                                              steps=args.steps, repeats=args.repeats,
                                              flux=str(merged["flux"]))
        for m in methods:
            lines.append(f"{m},{ratios[m]:.3f},{medians[m]:.4f}")
            print(f"grid {n}^2 method {m}: {ratios[m]:.3f}x (median {medians[m]:.3f}s)")
    (outdir / "perf.csv").write_text("\n".join(lines + [f"# {m}" for m in meta]) + "\n")
    return EXIT_OK


def _cmd_stability(args):
    merged = _merged(args, scheme="z5")
    outdir = Path(merged["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    for name in ("rk5", "rk7"):
        pts = harness.emit_stability_region(tableau_by_name(name),
                                            outdir / f"stability_{name}.csv")
        print(f"stability_{name}.csv: {len(pts)} boundary samples")
    return EXIT_OK


_COMMANDS = {
    "converge": _cmd_converge,
    "riemann": _cmd_riemann,
    "perf": _cmd_perf,
    "stability": _cmd_stability,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (UnphysicalStateError, RuntimeError) as err:
        print(f"solver failure: {err}", file=sys.stderr)
        return EXIT_SOLVER
    except (ConfigError, ValueError) as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
