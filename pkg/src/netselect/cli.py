"""Command line entry point: ``netselect --seed 42 --out results``."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from .anp import ANPError
from .config import ConfigError, load_config
from .report import EmitError, RunManifest, emit_report
from .simulator import run_simulation
from .strategy import VariantId

log = logging.getLogger("netselect")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="netselect",
        description="Simulate ANP+TOPSIS network selection (TOPSIS1..TOPSIS4) and "
                    "report ranking abnormality and handoff rates.")
    p.add_argument("--config", help="YAML config (default: packaged config)")
    p.add_argument("--traffic-class", default="all",
                   help="traffic class name or 'all' (default: all)")
    p.add_argument("--variant", default="all",
                   help="TOPSIS1..TOPSIS4, comma separated, or 'all' (default: all)")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed (default: from config)")
    p.add_argument("--replications", type=int, help="replications per traffic class")
    p.add_argument("--decision-points", type=int, help="decision points per run (default 12)")
    p.add_argument("--out", default="results", help="output directory (default: results)")
    p.add_argument("--format", default="csv,json", help="csv, json or csv,json")
    p.add_argument("-v", "--verbose", action="count", default=0)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        classes = (cfg.traffic_classes if args.traffic_class == "all"
                   else tuple(c.strip() for c in args.traffic_class.split(",")))
        variants = (cfg.variants if args.variant == "all"
                    else tuple(VariantId.parse(v) for v in args.variant.split(",")))
        overrides = {"variants": variants}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.replications is not None:
            overrides["replications"] = args.replications
        if args.decision_points is not None:
            overrides["decision_points"] = args.decision_points
        manifest = RunManifest(args.out, tuple(args.format.split(",")),
                               args.config or "", args.verbose)
        reports = []
        for cls in classes:
            sim = cfg.simulation(cls, **overrides)
            log.info("running %s: %d replications x %d points", cls,
                     sim.replications, sim.decision_points)
            reports.append(run_simulation(sim, cfg.profiles[cls]))
        for path in emit_report(reports, manifest):
            log.info("wrote %s", path)
    except (ConfigError, ANPError, EmitError, ValueError) as exc:
        print(f"netselect: error: {exc}", file=sys.stderr)
        return 1
    for rep in reports:
        for v in rep.config.variants:
            a = rep.aggregates[v]
            print(f"{rep.config.traffic_class:15s} {v.value}  abnormality {a.mean_abnormality_rate:6.3f}"
                  f"  handoffs {a.mean_handoff_rate:6.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
