"""Command-line entry point.

Data goes to stdout or to the output file; diagnostics go to stderr.
Exit status is 0 on success, 1 on invalid input, 2 on file-system errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional

from . import experiments, model, spectrum
from .config import ConfigFileError, ScenarioConfig, parse_scenario
from .model import ValidationError

OUTPUT_DIR_ENV = "EDGEOFFLOAD_OUTPUT_DIR"

EXIT_OK, EXIT_INVALID, EXIT_FS = 0, 1, 2

_EXTENSIONS = {"compare": "json", "summary": "json"}


def _overrides(pairs: List[str]) -> Dict[str, str]:
    out = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep:
            raise ValidationError(f"--set expects KEY=VALUE, got {pair!r}")
        out[key.strip()] = value.strip()
    return out


def _breakdown(cost: model.CostBreakdown) -> dict:
    return {"compute_s": cost.compute_s, "transmit_s": cost.transmit_s,
            "path_s": cost.path_s, "total_s": cost.total_s,
            "energy_units": cost.energy_units}


def cmd_compare(cfg: ScenarioConfig, args) -> str:
    task, edge, cloud, path = cfg.task(), cfg.edge(), cfg.cloud(), cfg.path()
    e = model.edge_delay(task, edge, path)
    c = model.cloud_delay(task, cloud, path, edge=edge)
    if args.human:
        return (f"edge  {e.total_s * 1e3:.6g} ms  energy {e.energy_units:.6g}\n"
                f"cloud {c.total_s * 1e3:.6g} ms  energy {c.energy_units:.6g}\n"
                f"gap   {(c.total_s - e.total_s) * 1e3:.6g} ms  "
                f"reduction {model.relative_reduction(e, c):.4%}\n")
    crossover = model.crossover_cycles(edge, cloud, path)
    record = {
        "scenario_id": cfg.scenario_id,
        "C_cycles": task.cycles, "D_bits": task.data_bits, "R_bps": path.rate_bps,
        "edge": _breakdown(e), "cloud": _breakdown(c),
        "gap_s": c.total_s - e.total_s,
        "rel_reduction": model.relative_reduction(e, c),
        "crossover_cycles": crossover.value if isinstance(crossover, model.Crossover)
        else crossover,
    }
    return json.dumps(record, indent=2) + "\n"


def cmd_sweep_delay(cfg, args) -> str:
    return experiments.rows_to_csv(experiments.sweep_delay(cfg.sweep_spec()))


def cmd_sweep_energy(cfg, args) -> str:
    return experiments.rows_to_csv(experiments.sweep_energy(cfg.sweep_spec(), cfg.energy_caps))


def cmd_sweep_fleet(cfg, args) -> str:
    return experiments.rows_to_csv(experiments.sweep_fleet(cfg.fleet_spec()))


def cmd_summary(cfg, args) -> str:
    rows = experiments.sweep_delay(cfg.sweep_spec())
    crossover = model.crossover_cycles(cfg.edge(), cfg.cloud(), cfg.path())
    return experiments.summarize(rows, crossover).to_json()


def cmd_spectrum(cfg, args) -> str:
    if args.overlap:
        entries = spectrum.bands_overlapping(*args.overlap)
    elif args.country:
        entries = spectrum.allocations_for(args.country)
    elif args.region is not None:
        entries = spectrum.allocations_for(args.region)
    else:
        entries = spectrum.load_registry()
    if args.format == "json":
        return spectrum.to_json(entries)
    return spectrum.to_csv(entries)


COMMANDS = {
    "compare": cmd_compare,
    "sweep-delay": cmd_sweep_delay,
    "sweep-energy": cmd_sweep_energy,
    "sweep-fleet": cmd_sweep_fleet,
    "summary": cmd_summary,
    "spectrum": cmd_spectrum,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", type=Path, help="scenario file (key = value lines)")
    common.add_argument("-s", "--set", dest="overrides", action="append", default=[],
                        metavar="KEY=VALUE", help="override a config key; repeatable")
    common.add_argument("-o", "--output", help="output file (default: stdout, or "
                        f"${OUTPUT_DIR_ENV}/<scenario_id>_<command>.<ext> when set)")

    parser = argparse.ArgumentParser(
        prog="edgeoffload",
        description="Delay and energy of UAV-cloudlet edge offloading versus a central cloud.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", parents=[common], help="one task on both paths")
    p.add_argument("--cycles", help="task cycles, e.g. 1e6 or '1 Mcycles'")
    p.add_argument("--data", help="task data size, e.g. '100 kb'")
    p.add_argument("--human", action="store_true", help="readable text instead of JSON")

    sub.add_parser("sweep-delay", parents=[common], help="delay sweep as CSV")
    sub.add_parser("sweep-energy", parents=[common], help="energy sweep as CSV")
    sub.add_parser("sweep-fleet", parents=[common], help="fleet-size sweep as CSV")
    sub.add_parser("summary", parents=[common], help="delay sweep summary as JSON")

    p = sub.add_parser("spectrum", parents=[common], help="query the spectrum registry")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--country", help="area name, case-insensitive")
    group.add_argument("--region", type=int, choices=(1, 2, 3))
    group.add_argument("--overlap", nargs=2, type=float, metavar=("LOW_MHZ", "HIGH_MHZ"))
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def _destination(args, cfg: ScenarioConfig) -> Optional[Path]:
    if args.output:
        return Path(args.output)
    if cfg.output:
        return Path(cfg.output)
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        ext = _EXTENSIONS.get(args.command, "json" if getattr(args, "format", "") == "json"
                              else "csv")
        return Path(out_dir) / f"{cfg.scenario_id}_{args.command}.{ext}"
    return None


def run(args) -> int:
    overrides = _overrides(args.overrides)
    if args.command == "compare":
        if args.cycles is not None:
            overrides["cycles"] = args.cycles
        if args.data is not None:
            overrides["data"] = args.data
    cfg = parse_scenario(args.config, overrides)
    text = COMMANDS[args.command](cfg, args)
    dest = _destination(args, cfg)
    if dest is None:
        sys.stdout.write(text)
    else:
        experiments.write_atomic(dest, text)
    return EXIT_OK


def _error(message) -> None:
    print(f"edgeoffload: error: {message}", file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ConfigFileError as exc:
        _error(exc)
        return EXIT_FS
    except (ValidationError, spectrum.AllocationNotFound) as exc:
        _error(exc.args[0] if exc.args else exc)
        return EXIT_INVALID
    except OSError as exc:
        _error(exc)
        return EXIT_FS


if __name__ == "__main__":
    sys.exit(main())
