"""Compare every conformal-regular bound on the map catalog with the raster oracle.

    python3 scripts/verify_catalog.py --h 0.015625 --h2 0.0078125

With ``--h2`` the oracle is rerun on the finer mesh and the two-mesh
change is reported as a rough discretisation error.
"""

import argparse
import time

from plap_bounds.bounds import lower_bound_alpha_regular, lower_bound_infty_regular
from plap_bounds.maps import parse_map
from plap_bounds.oracle import SolverConfig, faber_krahn_gap, first_eigenvalue, rasterize_map

CATALOG = ["identity", "epicycloid n=2", "epicycloid n=3", "epicycloid n=4", "sine d=1"]


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--p", type=float, nargs="+", default=[2.5, 3.0, 4.0])
    parser.add_argument("--alpha", type=float, default=2.0)
    parser.add_argument("--h", type=float, default=1 / 64)
    parser.add_argument("--h2", type=float)
    parser.add_argument("--maps", nargs="+", default=CATALOG)
    args = parser.parse_args()

    header = f"{'map':<16}{'p':>5}{'oracle':>10}{'alpha bnd':>11}{'infty bnd':>11}{'FK gap':>9}"
    print(header + (f"{'2-mesh':>9}" if args.h2 else "") + f"{'sec':>7}")
    worst = 0.0
    for text in args.maps:
        phi = parse_map(text)
        dom = rasterize_map(phi, args.h)
        for p in args.p:
            t0 = time.perf_counter()
            cfg = SolverConfig(p=p)
            lam = first_eigenvalue(dom, cfg)[0]
            a = lower_bound_alpha_regular(p, args.alpha, phi).lower_bound_lambda
            b = lower_bound_infty_regular(p, phi).lower_bound_lambda
            gap = faber_krahn_gap(dom, cfg) / lam
            worst = max(worst, a / lam, b / lam)
            line = f"{text:<16}{p:>5g}{lam:>10.4f}{a:>11.4f}{b:>11.4f}{gap:>9.4f}"
            if args.h2:
                fine = first_eigenvalue(rasterize_map(phi, args.h2), cfg)[0]
                line += f"{abs(lam / fine - 1):>9.2%}"
            print(line + f"{time.perf_counter() - t0:>7.1f}")
    print(f"largest bound/oracle ratio: {worst:.4f}")


if __name__ == "__main__":
    main()
