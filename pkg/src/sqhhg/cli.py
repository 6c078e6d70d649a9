"""Command-line entry point: ``sqhhg <study> [--config FILE] [--out DIR] ...``."""
from __future__ import annotations

import argparse
import logging
import sys

from .config import EXPERIMENTS, ConfigError, RunConfig, load_config, with_overrides
from .experiments import ExperimentError, run_experiment


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sqhhg",
        description="HHG driven by squeezed elliptical light: spectra, witnesses, photon statistics.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress per point")
    sub = parser.add_subparsers(dest="study", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run the {name} study")
        p.add_argument("--config", help="TOML run configuration")
        p.add_argument("--out", help="output directory (overrides [output].directory)")
        p.add_argument("--samples", type=int, help="quadrature nodes per driver")
        p.add_argument("--threads", type=int, help="worker threads for field realizations")
        p.add_argument("--resume", action="store_true", help="reuse finished parameter points")
        p.add_argument("--svg", action="store_true", help="also write SVG plots")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        cfg = with_overrides(cfg, kind=args.study, out=args.out, samples=args.samples,
                             threads=args.threads, svg=args.svg)
        out = run_experiment(cfg, resume=args.resume)
    except (ConfigError, ExperimentError, OSError) as exc:
        print(f"sqhhg: error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
