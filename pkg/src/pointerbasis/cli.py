"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 numeric failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import output
from .config import ConfigError, load_config
from .dynamics import evolve
from .kernel import default_time_grid
from .quadrature import QuadratureError
from .regimes import (
    CoarseGridError,
    NoAbruptTransition,
    NoSignChangeError,
    SweepEntry,
    crossover_temperature,
    pointer_temperature_estimate,
    scan_regimes,
    temperature_sweep,
)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _tau_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid tau list {text!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file or preset name (fig2, fig2a, fig2b, fig2c, fig3)")
    common.add_argument("--p", type=float, help="Bell-mixture weight p")
    common.add_argument("--tau", type=float, help="temperature T/T_s")
    common.add_argument("--tau-list", type=_tau_list, help="comma-separated temperatures")
    common.add_argument("--t-max", type=float, help="final time [a_B/s]")
    common.add_argument("--points", type=int, help="number of grid times")
    common.add_argument("--format", choices=("csv", "report"))
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, help="seed for random-state suites")
    common.add_argument("--emit-plot", action="store_true", default=None,
                        help="write a matplotlib script next to --out")
    common.add_argument("--echo-config", metavar="PATH",
                        help="write the effective configuration as JSON")

    parser = _Parser(prog="pointerbasis", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("evolve", parents=[common], help="time series of b, c, C, D, I, S")
    sub.add_parser("regimes", parents=[common], help="pointer-basis regime report at one temperature")
    sub.add_parser("sweep", parents=[common], help="regime reports over a temperature list")
    sub.add_parser("pointer-temp", parents=[common], help="pointer transition temperature")
    v = sub.add_parser("verify", parents=[common], help="run the verification suites")
    v.add_argument("--inject-fault", action="store_true",
                   help="test hook: perturb the analytic side of the oracle suite")
    return parser


def _overrides(args):
    dyn, orc, out = {}, {}, {}
    for key, name in (("p", "p"), ("tau", "tau"), ("tau_list", "tau_list"),
                      ("t_max", "t_max"), ("points", "n_points")):
        if getattr(args, key) is not None:
            dyn[name] = getattr(args, key)
    if args.seed is not None:
        orc["seed"] = args.seed
    if args.format is not None:
        out["format"] = args.format
    if args.out is not None:
        out["path"] = args.out
    if args.emit_plot:
        out["emit_plot"] = True
    return {k: v for k, v in (("dynamics", dyn), ("oracle", orc), ("output", out)) if v}


def _write(cfg, text):
    if cfg.path:
        Path(cfg.path).write_text(text)
    else:
        sys.stdout.write(text)


def _embedded(cfg):
    """Config recorded inside reports; the destination path is left out so
    the same run written to two places gives identical bytes."""
    doc = cfg.to_dict()
    doc["output"]["path"] = None
    return doc


def _grid(cfg):
    return default_time_grid(cfg.t_max, cfg.n_points)


def cmd_evolve(cfg):
    traj = evolve(cfg.p, cfg.tau, cfg.geometry, _grid(cfg))
    rows = output.result_rows(traj)
    if cfg.format == "csv":
        _write(cfg, output.series_csv(rows))
    else:
        _write(cfg, output.series_report(rows, scan_regimes(traj), _embedded(cfg)))
    if cfg.emit_plot:
        if not cfg.path or cfg.format != "csv":
            raise ConfigError("--emit-plot needs csv output written with --out")
        data = Path(cfg.path)
        script = data.with_name(data.stem + "_plot.py")
        title = f"p={cfg.p:g}, T/T_s={cfg.tau:g}"
        script.write_text(output.plot_script(data.name, data.stem + ".png", title))
    return EXIT_OK


def cmd_regimes(cfg):
    report = scan_regimes(evolve(cfg.p, cfg.tau, cfg.geometry, _grid(cfg)))
    if cfg.format == "csv":
        _write(cfg, output.summary_csv([SweepEntry(cfg.tau, report)]))
    else:
        _write(cfg, output.dumps_json({"config": _embedded(cfg), "report": report.to_dict()}))
    return EXIT_OK


def _tau_star(cfg):
    try:
        return crossover_temperature(cfg.geometry, cfg.p, cfg.t_stationary, cfg.bracket)
    except NoSignChangeError:
        return None


def _tau_estimate(p):
    try:
        return pointer_temperature_estimate(p)
    except NoAbruptTransition:
        return None


def cmd_sweep(cfg):
    if not cfg.tau_list:
        raise ConfigError("sweep needs a nonempty tau list (--tau-list or dynamics.tau_list)")
    entries = temperature_sweep(cfg.p, cfg.tau_list, cfg.geometry, _grid(cfg))
    tau_star = _tau_star(cfg)
    if cfg.format == "csv":
        _write(cfg, output.summary_csv(entries, tau_star))
    else:
        _write(cfg, output.sweep_report(entries, cfg.p, tau_star, _tau_estimate(cfg.p), _embedded(cfg)))
    for e in entries:
        if e.error:
            print(f"tau={e.tau:g}: {e.error}", file=sys.stderr)
    return EXIT_NUMERIC if all(e.error for e in entries) else EXIT_OK


def cmd_pointer_temp(cfg):
    estimate = _tau_estimate(cfg.p)
    if estimate is None:
        _write(cfg, f"p={cfg.p:g}: no abrupt transition (|2p-1| = 0)\n")
        return EXIT_OK
    tau_star = _tau_star(cfg)
    if cfg.format == "report":
        _write(cfg, output.dumps_json({
            "p": cfg.p, "tau_estimate_16pi": estimate, "tau_star_bisection": tau_star,
            "bracket": list(cfg.bracket), "t_stationary": cfg.t_stationary,
        }))
        return EXIT_OK
    lines = [
        f"p = {cfg.p:g}",
        f"order-of-magnitude estimate  -ln|2p-1|/(16 pi):      tau_P    = {output.fmt(estimate)}",
    ]
    if tau_star is None:
        lines.append(f"stationary crossover |a| = b+c (bisection):    no sign change in bracket {list(cfg.bracket)}")
    else:
        lines.append(f"stationary crossover |a| = b+c (bisection):    tau_star = {output.fmt(tau_star)}")
    _write(cfg, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(cfg, inject_fault=False):
    from .verify import run_all

    results = run_all(cfg, inject_fault=inject_fault)
    _write(cfg, "".join(r.line() + "\n" for r in results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


COMMANDS = {
    "evolve": cmd_evolve,
    "regimes": cmd_regimes,
    "sweep": cmd_sweep,
    "pointer-temp": cmd_pointer_temp,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, _overrides(args))
        if args.echo_config:
            Path(args.echo_config).write_text(cfg.dumps())
        if args.command == "verify":
            return cmd_verify(cfg, inject_fault=args.inject_fault)
        return COMMANDS[args.command](cfg)
    except (ConfigError, ValueError) as exc:
        print(f"pointerbasis: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QuadratureError, CoarseGridError, FloatingPointError, RuntimeError) as exc:
        print(f"pointerbasis: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
