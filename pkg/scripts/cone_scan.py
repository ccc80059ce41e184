#!/usr/bin/env python3
"""How large a cone ||dev log U||^2 <= c does the Dacorogna test certify for e^{k ||dev log U||^2}?

Scans the log-stretch cube at increasing resolution and prints the largest
level below which no grid point fails. The value depends on the lattice,
since coarse grids leave gaps between levels; refine until it settles.

    python3 scripts/cone_scan.py --k 0.25 --half-width 6 --n 9 17 33
"""

import argparse

from hencky.convexity.scan import LogGrid, scan_domain
from hencky.energies import dev_exp


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=float, default=0.25)
    ap.add_argument("--half-width", type=float, default=6.0)
    ap.add_argument("--n", type=int, nargs="+", default=[9, 17, 33])
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--csv", help="write the finest scan here")
    args = ap.parse_args()
    spec = dev_exp(args.k)
    print("n\tpoints\tfailed\tbound")
    res = None
    for n in args.n:
        g = LogGrid(3, -args.half_width, args.half_width, n)
        res = scan_domain("dacorogna", spec, g, workers=args.workers)
        s = res.summary
        print(f"{n}\t{s.count}\t{s.failed}\t{s.dev_bound:.6g}")
    if args.csv and res is not None:
        res.to_csv(args.csv)


if __name__ == "__main__":
    main()
