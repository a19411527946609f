#!/usr/bin/env python3
"""Regenerate the delay, energy and fleet-size tables plus the summary.

Writes four files into the output directory (default ``results/``):

    fig_delay.csv    delay sweep at 1, 2 and 3 Mbps
    fig_energy.csv   energy sweep at cycle caps 1e6, 1e7, 1e8
    fig_fleet.csv    makespan for 1..8 UAVs at 1, 10 and 100 Mb
    summary.json     reduction statistics at 1 Mbps

Usage: python scripts/reproduce_figures.py [-c scenario.cfg] [outdir]
"""

import argparse
import dataclasses
from pathlib import Path

from edgeoffload import experiments, model
from edgeoffload.config import parse_scenario


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("outdir", nargs="?", default="results", type=Path)
    parser.add_argument("-c", "--config", type=Path)
    args = parser.parse_args()

    cfg = parse_scenario(args.config)
    args.outdir.mkdir(parents=True, exist_ok=True)
    spec = cfg.sweep_spec()

    delay_rows = experiments.sweep_delay(spec)
    experiments.write_atomic(args.outdir / "fig_delay.csv", experiments.rows_to_csv(delay_rows))

    energy_rows = experiments.sweep_energy(spec, cfg.energy_caps)
    experiments.write_atomic(args.outdir / "fig_energy.csv",
                             experiments.rows_to_csv(energy_rows))

    fleet_rows = experiments.sweep_fleet(cfg.fleet_spec())
    experiments.write_atomic(args.outdir / "fig_fleet.csv", experiments.rows_to_csv(fleet_rows))

    first_rate = dataclasses.replace(spec, rates_bps=spec.rates_bps[:1])
    summary = experiments.summarize(
        experiments.sweep_delay(first_rate),
        model.crossover_cycles(cfg.edge(), cfg.cloud(), cfg.path()))
    experiments.write_atomic(args.outdir / "summary.json", summary.to_json())

    print(f"delay rows   {len(delay_rows)}")
    print(f"energy rows  {len(energy_rows)}")
    print(f"fleet rows   {len(fleet_rows)}")
    print(f"reduction    min {summary.min_reduction:.2%}  max {summary.max_reduction:.2%}"
          f"  mean {summary.mean_reduction:.2%}")
    print(f"20% frontier D = {summary.frontier_D_bits:.0f} bits, "
          f"C = {summary.frontier_C_cycles:.0f} cycles")
    for total in cfg.fleet_totals:
        spans = [r.makespan_s for r in fleet_rows if r.total_bits == total]
        print(f"fleet {total / 1e6:g} Mb: makespan {spans[0]:.3f} s (K=1) -> "
              f"{spans[-1]:.3f} s (K={cfg.fleet_sizes[-1]})")


if __name__ == "__main__":
    main()
