"""Command-line entry point: ``regionscreen {doa,deconv} [options]``."""

from __future__ import annotations

import argparse
import sys

from .exceptions import ConfigurationError, ConsistencyError
from .experiments import ExperimentConfig, run_deconv, run_doa, survivors_path


def _on_off(value: str) -> bool:
    if value not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected 'on' or 'off'")
    return value == "on"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regionscreen",
        description="Screened atom selection benchmarks (DOA and Gaussian deconvolution).")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name, help_ in (("doa", "OMP on a steering-vector dictionary; writes cumulative counts"),
                        ("deconv", "one screened selection on Gaussian atoms; writes removed intervals")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--m", type=int, default=None, help="signal dimension")
        p.add_argument("--n", type=int, default=1000, help="number of atoms (doa)")
        p.add_argument("--L", type=int, default=100, help="number of regions")
        p.add_argument("--k", type=int, default=5, help="OMP iterations (doa)")
        p.add_argument("--sigma2", type=float, default=10.0, help="Gaussian atom variance (deconv)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--regions", choices=("sphere", "dome"), default=None)
        p.add_argument("--out", default=f"{name}.csv", help="output CSV path")
        p.add_argument("--share-probe", type=_on_off, default=True, metavar="{on,off}",
                       help="reuse probe correlations as region-center correlations")
        p.add_argument("--noise", type=float, default=0.0, help="additive white noise std")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = ExperimentConfig(
            experiment=args.experiment, m=args.m, n=args.n, L=args.L, k=args.k,
            sigma2=args.sigma2, regions=args.regions, seed=args.seed, out=args.out,
            share_probe=args.share_probe, noise=args.noise)
        if config.experiment == "doa":
            result = run_doa(config)
            last = result.rows[-1]
            print(f"doa: exhaustive={last['exhaustive_cum']} screened={last['screened_cum']} "
                  f"ratio={result.ratio:.4f} setup={result.setup_cost} -> {config.out}")
        else:
            result = run_deconv(config)
            print(f"deconv: mu*={result.mu_exhaustive:.6f} screened={result.mu_screened:.6f} "
                  f"surviving={result.surviving_fraction:.4f} -> {config.out}, "
                  f"{survivors_path(config.out)}")
    except (ConfigurationError, ValueError) as exc:
        print(f"regionscreen: error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"regionscreen: internal error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
