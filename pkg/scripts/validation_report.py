#!/usr/bin/env python3
"""Print the analytic-vs-numeric discrepancy report (same as `becphase validate`)."""

import argparse
from pathlib import Path

from becphase import parse_config, validation_report


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", help="optional JSON configuration for model parameters")
    parser.add_argument("--points", type=int, default=100, help="time-grid points")
    args = parser.parse_args()
    params = None
    if args.config:
        params = parse_config(Path(args.config).read_text()).params
    print(validation_report(params, n_points=args.points), end="")


if __name__ == "__main__":
    main()
