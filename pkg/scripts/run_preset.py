#!/usr/bin/env python3
"""Run one built-in preset and drop its CSVs (plus ratio tables) in a directory.

Usage:
    python scripts/run_preset.py fig13-desk [out_dir]

Runs the preset's full grid, writes <preset>.csv / <preset>.summary.csv,
and, when the grid includes the optimal offline baseline, also writes
<preset>.ratios.csv / <preset>.ratios.mean.csv.
"""

import sys
from pathlib import Path

from dynplace.harness import (
    get_preset,
    ratio_rows,
    run_experiment,
    write_ratio_csv,
)


def main():
    if len(sys.argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    name = sys.argv[1]
    out_dir = Path(sys.argv[2]) if len(sys.argv) > 2 else Path("results")
    config = get_preset(name)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = name.replace("-", "_")
    result = run_experiment(config, output=out_dir / f"{stem}.csv")
    print(result.output_path)
    print(result.summary_path)
    if "optoff" in config.algorithms:
        per_rows, mean_rows = ratio_rows(config)
        paths = write_ratio_csv(out_dir / f"{stem}.ratios.csv", per_rows, mean_rows)
        for path in paths:
            print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
