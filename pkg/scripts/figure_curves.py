#!/usr/bin/env python3
"""Write every curve the CLI can emit, with the material data they are usually plotted for.

    python3 scripts/figure_curves.py out/
"""

import argparse
from pathlib import Path

from hencky.curves import CURVES, emit_curve
from hencky.energies import MaterialParams

RUBBER = MaterialParams(0.39e6, 1.0e6, 0.243, 1.0)
STEEL_EOS = MaterialParams(1.0e9, 2.5e9, 1.0, 22.0)
# 3 khat = 2 k, so that nu = 0 gives no lateral contraction
POISSON = MaterialParams(1.0, 1.0, 0.25, 1.0 / 6.0)
FEASIBLE = MaterialParams.from_E_nu(1.0, 1.0 / 3.0, 0.3, 0.2)

PARAMS = {
    "uniaxial-nominal": RUBBER,
    "kirchhoff-vs-logstrain": MaterialParams(1.0, 2.0, 0.25, 0.3),
    "shear-sigma12": RUBBER,
    "eos-pressure": STEEL_EOS,
    "poisson-hat": POISSON,
    "tsts-feasibility": FEASIBLE,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", type=Path)
    ap.add_argument("--resolution", type=int, default=201)
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    for cid in CURVES:
        path = args.outdir / f"{cid}.csv"
        emit_curve(cid, PARAMS[cid], resolution=args.resolution).write(path)
        print(path)


if __name__ == "__main__":
    main()
