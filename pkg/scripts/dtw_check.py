"""Reproduce the 50-year DTW check and dump the cost matrix and warp path.

    python3 scripts/dtw_check.py --out-dir dtw-check
"""

import argparse
from pathlib import Path

import numpy as np

from worg.cli import write_dtw

ap = argparse.ArgumentParser()
ap.add_argument("--out-dir", default="dtw-check")
args = ap.parse_args()

t = np.arange(50)
f = 90 * 1.01**t
g = np.where(t < 25, 0.95 * f, 1.05 * f)
d = write_dtw(f, g, Path(args.out_dir))
print(f"distance {d:.5f} GWe; files in {args.out_dir}")
