"""Tabulate the quasidisc constant ln M_p(K) and its optimal parameters.

The optimal alpha and q sit within about 1e-13 of 1 and 2, so they are
printed as excesses ``alpha - 1`` and ``2 - q``.

    python3 scripts/quasidisc_constants.py --K 1 1.5 2 --literal
"""

import argparse

from plap_bounds.bounds import m_p_k


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--p", type=float, nargs="+", default=[2.5, 3.0, 4.0])
    parser.add_argument("--K", type=float, nargs="+", default=[1.0, 1.2, 1.5, 2.0])
    parser.add_argument("--literal", action="store_true", help="also show the literal C and nu exponents")
    args = parser.parse_args()

    variants = [False, True] if args.literal else [False]
    print(f"{'p':>5}{'K':>6}{'literal':>9}{'alpha~-1':>12}{'alpha-1':>12}{'2-q':>12}{'nu':>8}{'ln M':>12}")
    for literal in variants:
        for p in args.p:
            for K in args.K:
                prm = m_p_k(p, K, literal)
                print(
                    f"{p:>5g}{K:>6g}{str(literal):>9}{prm.alpha_tilde_excess:>12.3e}{prm.alpha_excess:>12.3e}"
                    f"{prm.q_gap:>12.3e}{prm.nu:>8.4f}{prm.log_M:>12.3f}"
                )


if __name__ == "__main__":
    main()
