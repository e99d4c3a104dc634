"""Command-line entry point: figure-class sweeps, single points, and validation."""

from __future__ import annotations

import argparse
import logging
import sys
from importlib import resources

from . import config as config_mod
from . import lindblad, model, observables, sweep, validate
from .errors import ConfigError, QrsimError
from .gridio import write_grid_csv

log = logging.getLogger("qrsim")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_SOLVER = 2

# Default shipped config per figure-class subcommand.
DEFAULT_CONFIGS = {
    "spectroscopy": "fig2_bare.toml",
    "power-sweep": "fig3c_power.toml",
    "interferogram-flux": "fig4_interferogram_flux.toml",
    "interferogram-freq": "fig5_interferogram_freq.toml",
    "coupling-study": "fig6_coupling.toml",
    "point": "fig2_bare.toml",
}


def shipped_config_path(name: str) -> str:
    return str(resources.files("qrsim").joinpath("configs", name))


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="TOML run configuration")
    parser.add_argument(
        "--set", dest="overrides", action="append", default=[],
        metavar="KEY=VALUE", help="override a scalar config key (repeatable)",
    )
    parser.add_argument("--output-dir", help="directory for CSV output")
    parser.add_argument("--workers", type=int, default=None, help="sweep worker count")
    parser.add_argument("--verbose", action="store_true", help="log progress to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrsim",
        description="Transmission and interferometry simulator for a driven "
                    "qubit-resonator system",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("point", "evaluate observables at a single parameter point"),
        ("spectroscopy", "steady-state |S21| trace or flux map"),
        ("power-sweep", "probe-amplitude sweep of the transmission"),
        ("interferogram-flux", "driven interferogram over flux x drive amplitude"),
        ("interferogram-freq", "driven interferogram over probe frequency x drive amplitude"),
        ("coupling-study", "interferograms at several coupling strengths"),
        ("validate", "run the analytic-oracle suite"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
    return parser


def _load(args) -> config_mod.RunConfig:
    path = args.config or shipped_config_path(DEFAULT_CONFIGS[args.command])
    cfg = config_mod.load_config(path, args.overrides)
    if args.output_dir:
        cfg.output_dir = args.output_dir
    return cfg


def _run_grid_command(args, stem_default: str) -> int:
    cfg = _load(args)
    spec = cfg.sweep_spec()
    result = sweep.run_sweep(spec, workers=args.workers)
    paths = write_grid_csv(result, cfg.output_dir, cfg.output_stem or stem_default)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return EXIT_OK


def _cmd_point(args) -> int:
    cfg = _load(args)
    p = cfg.system
    if p.drive_amp > 0:
        n_transient = lindblad.default_transient_periods(p)
        values, status = sweep.evaluate_driven_point(p, n_transient, 10, 1.0)
    else:
        values, status = sweep.evaluate_static_point(p)
    for kind in observables.ObservableKind:
        print(f"{kind.value} = {values[kind]:.9g}")
    print(f"status = {status}")
    return EXIT_OK


def _cmd_coupling(args) -> int:
    cfg = _load(args)
    spec = cfg.sweep_spec()
    multipliers = cfg.coupling_multipliers or [0.25, 1.0, 2.0, 8.0]
    results = sweep.coupling_sweep(spec, multipliers, workers=args.workers)
    for mult, result in zip(multipliers, results):
        stem = f"{cfg.output_stem}_g{mult:g}x"
        paths = write_grid_csv(result, cfg.output_dir, stem)
        for name, path in paths.items():
            print(f"{name}: {path}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    results = validate.run_all()
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"{r.name:<{width}}  {mark}  {r.detail}")
        failed += 0 if r.passed else 1
    if failed:
        print(f"{failed} check(s) failed", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cli_main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "validate":
            return _cmd_validate(args)
        if args.command == "point":
            return _cmd_point(args)
        if args.command == "coupling-study":
            return _cmd_coupling(args)
        return _run_grid_command(args, args.command.replace("-", "_"))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QrsimError, OSError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main():
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
