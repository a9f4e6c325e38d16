"""Normal-order moments across decades, for both centerings (log log p and log log u)."""

import argparse
import sys

from newform_sums.cli import load_pair
from newform_sums.config import parse_config
from newform_sums.stats import normal_order_moment, normal_order_moment_logp


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--config", default=None)
    ap.add_argument("--x", type=int, default=10**6)
    ap.add_argument("--eta", type=float, default=1 / 15)
    ap.add_argument("--u", type=float, default=None, help="fixed u instead of x^eta")
    args = ap.parse_args()
    cfg = parse_config(args.config, {"x": args.x})
    ctx = load_pair(cfg)
    x = 10**4
    while x <= args.x:
        logp = normal_order_moment_logp(ctx, x)
        u_rep = normal_order_moment(ctx, x, eta=args.eta, u=args.u)
        moment_u = u_rep.observed.get("moment")
        print(f"x={x:<9} logp-moment={logp.observed['moment']:.6f} "
              f"u-moment={'n/a' if moment_u is None else f'{moment_u:.6f}'} ({u_rep.status})")
        x *= 10
    return 0


if __name__ == "__main__":
    sys.exit(main())
