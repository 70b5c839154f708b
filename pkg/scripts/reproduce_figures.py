#!/usr/bin/env python3
"""Regenerate the bundled figure data sets from their scenario configs.

Runs the odd-parity (singlet-forming) and even-parity (triplet-forming)
figure scenarios plus the regime sweep, writing CSV files under out/.
Usage: python3 scripts/reproduce_figures.py [--out DIR]
"""

import argparse
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from zenon.cli import main as zenon_main  # noqa: E402

RUNS = (
    ("figures", "configs/fig4.json", "fig4"),
    ("figures", "configs/fig5.json", "fig5"),
    ("sweep", "configs/sweep_fig5_regimes.json", "fig5_regimes"),
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out", help="output root directory")
    args = parser.parse_args()
    for command, config, subdir in RUNS:
        out_dir = str(Path(args.out) / subdir)
        argv = [command, "--config", str(REPO / config), "--out", out_dir]
        print(f"zenon {' '.join(argv)}")
        code = zenon_main(argv)
        if code != 0:
            print(f"failed with exit code {code}", file=sys.stderr)
            return code
        for produced in sorted(Path(out_dir).glob("*.csv")):
            print(f"  wrote {produced}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
