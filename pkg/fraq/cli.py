"""Main CLI entry point for fraq."""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from . import __version__
from .config import INIT_NAMES, PRESETS, Config, parse_fraction
from .errors import ConfigError, ParameterError
from .experiments import build_spec, fit_scaling, run_convergence, timing_sweep
from .kernels import KERNEL_CLASSES, kernel_error_report
from .logger import configure_logging, logger
from .output import (
    RATE_NOTE,
    convergence_filename,
    format_convergence_table,
    write_convergence,
    write_kernel_error,
    write_meta,
    write_snapshot,
    write_timing,
    write_weights,
)
from .solver import TimeScheme, run
from .weights import Scheme, weight_table

# Flags that map onto configuration keys (dest == key)
KERNEL_KEYS = ("np", "np1", "np2", "ns", "ns_auto", "np_auto", "eps_tol", "n_check")
EXPERIMENT_KEYS = (
    "schemes", "alpha_pairs", "alpha1", "alpha2", "a", "m", "grid_m", "length",
    "taus", "ref_tau", "t_final", "tau", "snapshots", "init", "bench_steps", "threads",
)


def _common_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    parent.add_argument("--config", type=Path, help="flat key = value config file (.yaml/.yml read as YAML)")
    parent.add_argument("--preset", choices=sorted(PRESETS), help="named experiment setup")
    parent.add_argument("--output-dir", dest="output_dir", help="write CSV files and meta.txt here")
    parent.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    parent.add_argument("--log-file", dest="log_file", type=Path, help="log file path")
    return parent


def _kernel_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    group = parent.add_argument_group("kernel")
    group.add_argument("--np", type=int, help="BE Gauss-Jacobi points (default 64)")
    group.add_argument("--np1", type=int, help="SBD family-1 points (default 41)")
    group.add_argument("--np2", type=int, help="SBD family-2 points (default 41)")
    group.add_argument("--np-auto", dest="np_auto", action=argparse.BooleanOptionalAction,
                       help="raise --np and --np2 until the tail up to the last step "
                            "meets --eps-tol (default on)")
    group.add_argument("--ns", help="SBD exact head length N_s (default 15/17 by order)")
    group.add_argument("--ns-auto", dest="ns_auto", action="store_true",
                       help="choose N_s from --eps-tol")
    group.add_argument("--eps-tol", dest="eps_tol", type=float,
                       help="auto N_s and N_p tolerance in units of tau^-alpha (default 1e-12)")
    group.add_argument("--n-check", dest="n_check", type=int,
                       help="weights checked by auto N_s (default 1000)")
    return parent


def _experiment_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    group = parent.add_argument_group("experiment")
    group.add_argument("--scheme", "--schemes", dest="schemes",
                       help="comma list of be, fastbe, sbd, fastsbd")
    group.add_argument("--alpha-pairs", dest="alpha_pairs", help="e.g. 0.3:0.6,0.4:0.7")
    group.add_argument("--alpha1", type=float)
    group.add_argument("--alpha2", type=float)
    group.add_argument("--a", type=float, help="coupling constant")
    group.add_argument("--m", type=float, help="transition parameter; a = (1-m)/(2m-1)")
    group.add_argument("--grid-m", dest="grid_m", type=int, help="interior grid points M")
    group.add_argument("--length", type=float, help="domain length L")
    group.add_argument("--taus", help="comma list, e.g. 1/100,1/200")
    group.add_argument("--ref-tau", dest="ref_tau", help="reference step, e.g. 1/3200")
    group.add_argument("--t-final", dest="t_final", help="final time")
    group.add_argument("--tau", help="step of a single solve")
    group.add_argument("--snapshots", help="comma list of snapshot times")
    group.add_argument("--init", choices=INIT_NAMES)
    group.add_argument("--steps", dest="bench_steps", help="bench step counts, e.g. 100,200")
    group.add_argument("--threads", type=int, help="sweep worker threads")
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with all subcommands."""
    parser = argparse.ArgumentParser(
        prog="fraq",
        description="Fast convolution quadrature for Riemann-Liouville derivatives",
    )
    parser.add_argument("--version", action="version", version=f"fraq {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    subparsers.required = True

    common = _common_parent()
    kernel = _kernel_parent()
    experiment = _experiment_parent()

    weights = subparsers.add_parser("weights", parents=[common], help="dump CQ weights (i,d_i)")
    weights.add_argument("--scheme", choices=[s.value for s in Scheme], default="be")
    weights.add_argument("--alpha", type=float, required=True)
    weights.add_argument("--tau", dest="weights_tau", default="1")
    weights.add_argument("--n", type=int, default=100, help="largest index")

    errors = subparsers.add_parser(
        "kernel-error", parents=[common, kernel], help="compressed weight errors (i,eps_abs)"
    )
    errors.add_argument("--scheme", dest="kernel_scheme", choices=[s.value for s in Scheme],
                        default="sbd")
    errors.add_argument("--alpha", type=float, help="CQ order (default: alpha1)")
    errors.add_argument("--tau", help="time step (default: config tau)")
    errors.add_argument("--n", type=int, default=1000, help="largest index")
    errors.add_argument("--raw", action="store_true", help="ignore the exact head")

    subparsers.add_parser(
        "solve", parents=[common, kernel, experiment], help="single run with snapshots (x,g1,g2)"
    )
    subparsers.add_parser(
        "convergence", parents=[common, kernel, experiment], help="error and rate tables"
    )
    subparsers.add_parser(
        "bench", parents=[common, kernel, experiment], help="classical vs fast timing sweep"
    )
    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Configuration keys given on the command line."""
    values = vars(args)
    keys = KERNEL_KEYS + EXPERIMENT_KEYS + ("output_dir",)
    return {key: values[key] for key in keys if values.get(key) is not None}


def _output_dir(config: Config) -> Optional[Path]:
    directory = config.experiment.output_dir
    return Path(directory).expanduser() if directory else None


def _emit(directory: Optional[Path], filename: str, writer, *payload) -> None:
    if directory is None:
        writer(sys.stdout, *payload)
        return
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / filename
    with open(path, "w", newline="") as f:
        writer(f, *payload)
    print(f"Wrote {path}", file=sys.stderr)


def run_weights(args: argparse.Namespace, config: Config) -> None:
    """Dump a classical weight table."""
    tau = float(parse_fraction(args.weights_tau))
    table = weight_table(args.scheme, args.alpha, tau, args.n)
    directory = _output_dir(config)
    _emit(directory, f"weights_{args.scheme}_{args.alpha:g}.csv", write_weights, table)
    if directory:
        write_meta(directory, config.describe(),
                   {"command": "weights", "scheme": args.scheme, "alpha": args.alpha,
                    "tau": tau, "n": args.n})


def run_kernel_error(args: argparse.Namespace, config: Config) -> None:
    """Error curve of a compressed kernel against the classical weights."""
    exp = config.experiment
    alpha = args.alpha if getattr(args, "alpha", None) is not None else exp.alpha_pairs[0][0]
    tau = float(exp.solve_tau)
    kernel = KERNEL_CLASSES[Scheme(args.kernel_scheme)].from_config(
        alpha, tau, exp.kernel, n_max=args.n
    )
    report = kernel_error_report(kernel, args.n, raw=args.raw)
    logger.info("kernel-error %s alpha=%g: max tail error %.3e",
                args.kernel_scheme, alpha, report.max_tail_error)

    directory = _output_dir(config)
    suffix = "_raw" if args.raw else ""
    _emit(directory, f"kernel_error_{args.kernel_scheme}_{alpha:g}{suffix}.csv",
          write_kernel_error, report)
    if directory:
        extra = dict(report.parameters, command="kernel-error", n_max=args.n, raw=args.raw,
                     max_tail_error=report.max_tail_error)
        extra["n_points"] = "+".join(str(n) for n in extra["n_points"])
        write_meta(directory, config.describe(), extra)


def run_solve(args: argparse.Namespace, config: Config) -> None:
    """Single run of the first configured scheme and alpha pair."""
    exp = config.experiment
    scheme = TimeScheme(exp.schemes[0])
    spec = build_spec(exp, exp.alpha_pairs[0], exp.solve_tau)

    snapshot_steps = {spec.n_steps}
    for t in exp.snapshots:
        steps = t / exp.solve_tau
        if steps.denominator != 1 or not 0 <= steps <= spec.n_steps:
            raise ParameterError(f"Snapshot time {t} is not a step of tau={exp.solve_tau} in [0, t_final]")
        snapshot_steps.add(int(steps))

    result = run(spec, scheme, exp.kernel, snapshot_steps=snapshot_steps)
    directory = _output_dir(config)
    if directory is None:
        write_snapshot(sys.stdout, spec.grid, result.final)
    else:
        for n, state in sorted(result.snapshots.items()):
            _emit(directory, f"snapshot_{scheme.value}_n{n}.csv", write_snapshot, spec.grid, state)
        write_meta(directory, config.describe(),
                   {"command": "solve", "scheme": scheme.value,
                    "seconds_setup": result.setup_seconds, "seconds_loop": result.loop_seconds})


def run_convergence_command(args: argparse.Namespace, config: Config) -> None:
    """Convergence tables from one reference run per family."""
    reports = run_convergence(config.experiment)
    directory = _output_dir(config)
    for report in reports:
        if directory is None:
            print(f"# scheme={report.scheme.value} alpha1={report.alpha1:g} alpha2={report.alpha2:g}")
            print(f"# {RATE_NOTE}")
            write_convergence(sys.stdout, report)
        else:
            _emit(directory, convergence_filename(report), write_convergence, report)
            print(format_convergence_table(report))
            print()
    if directory:
        write_meta(directory, config.describe(), {"command": "convergence", "rate_note": RATE_NOTE})


def run_bench(args: argparse.Namespace, config: Config) -> None:
    """Timing sweep plus the scaling fits."""
    rows = timing_sweep(config.experiment)
    directory = _output_dir(config)
    _emit(directory, "bench.csv", write_timing, rows)

    fits = fit_scaling(rows)
    for scheme, fit in fits.items():
        print(f"{scheme.value}: R2(cN)={fit.r2_linear:.4f} R2(cN^2)={fit.r2_quadratic:.4f}",
              file=sys.stderr)
    if directory:
        extra: Dict[str, Any] = {"command": "bench"}
        for scheme, fit in fits.items():
            extra[f"r2_linear_{scheme.value}"] = fit.r2_linear
            extra[f"r2_quadratic_{scheme.value}"] = fit.r2_quadratic
        write_meta(directory, config.describe(), extra)


COMMANDS = {
    "weights": run_weights,
    "kernel-error": run_kernel_error,
    "solve": run_solve,
    "convergence": run_convergence_command,
    "bench": run_bench,
}


def cli_main(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI.

    Args:
        argv: Arguments without the program name; defaults to sys.argv[1:]

    Returns:
        Exit status: 0 success, 1 numerical failure, 2 usage or config error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        configure_logging(verbose=getattr(args, "verbose", False),
                          log_file=getattr(args, "log_file", None))
        config = Config.load(
            config_path=getattr(args, "config", None),
            preset=getattr(args, "preset", None),
            overrides=collect_overrides(args),
        )
        logger.info("fraq %s: %s", args.command, "; ".join(config.describe()))
        COMMANDS[args.command](args, config)
        return 0

    except KeyboardInterrupt:
        print("\n👋 Interrupted.", file=sys.stderr)
        return 130
    except (ConfigError, ParameterError) as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.exception("fraq %s failed", args.command)
        print(f"❌ Error: {args.command} failed: {e}", file=sys.stderr)
        return 1


def main():
    """Main entry point for the fraq command."""
    sys.exit(cli_main())
