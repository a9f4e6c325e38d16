"""Tail densities |S_p| >= p^((k-1)/2)/M against the model mass, over a range of M."""

import argparse
import csv
import sys

from newform_sums.cli import load_pair
from newform_sums.config import parse_config
from newform_sums.stats import tail_density_report


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=None)
    ap.add_argument("--x", type=int, default=10**6)
    ap.add_argument("--M", default="0.3,0.5,1,2,5,20", help="comma-separated values of M")
    args = ap.parse_args()
    cfg = parse_config(args.config, {"x": args.x})
    ctx = load_pair(cfg)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["M", "count", "ratio_good", "model_mass", "deviation_sigma", "status"])
    for m in (float(v) for v in args.M.split(",")):
        rep = tail_density_report(ctx, args.x, m)
        o = rep.observed
        writer.writerow([m, o["count"], f"{o['ratio_good']:.6f}", f"{rep.predicted['mass']:.6f}",
                         f"{o['deviation']:+.3f}", rep.status])
    return 0


if __name__ == "__main__":
    sys.exit(main())
