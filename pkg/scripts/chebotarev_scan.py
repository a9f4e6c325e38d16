"""Observed frequency of h | S_p against delta(h) for every supported h coprime to N."""

import argparse
import math
import sys

from newform_sums import galois
from newform_sums.cli import load_pair
from newform_sums.config import parse_config
from newform_sums.stats import chebotarev_report


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=None)
    ap.add_argument("--x", type=int, default=10**6)
    ap.add_argument("--hmax", type=int, default=30)
    args = ap.parse_args()
    cfg = parse_config(args.config, {"x": args.x})
    ctx = load_pair(cfg)
    moduli = [h for h in galois.supported_moduli(args.hmax) if math.gcd(h, ctx.level) == 1]
    rep = chebotarev_report(ctx, args.x, moduli)
    print(f"{'h':>4} {'observed':>10} {'delta':>10} {'sigma':>7}")
    for row in rep.rows:
        print(f"{row['h']:>4} {row['ratio_good']:>10.6f} {row['delta']:>10.6f} {row['deviation_good']:>+7.2f}")
    print(f"status: {rep.status}")
    return 0 if rep.status == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
