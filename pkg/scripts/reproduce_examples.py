"""Infinity-regular bounds for the epicycloid and sine-map families.

For each map the non-q part of the bound (everything except the Sobolev
term) is printed next to its closed form, together with the bound itself.

    python3 scripts/reproduce_examples.py --p 2.5 3 4
"""

import argparse
import math

from plap_bounds.bounds import lower_bound_infty_regular
from plap_bounds.maps import AnalyticMap


def non_q(report):
    return math.exp(report.factor("base_measure") + report.factor("image_area") + report.factor("jacobian_norm"))


def epicycloid_rows(ns, ps):
    for n in ns:
        phi = AnalyticMap.epicycloid(n)
        for p in ps:
            # the closed form uses the area cap pi ((n+1)/n)^2
            rep = lower_bound_infty_regular(p, phi, area=math.pi * ((n + 1) / n) ** 2)
            closed = 4 / math.pi * ((n + 1) / n) ** (p - 2)
            yield f"epicycloid n={n}", p, rep, closed


def sine_rows(ds, ps):
    for d in ds:
        phi = AnalyticMap.sine(d)
        for p in ps:
            rep = lower_bound_infty_regular(p, phi)
            closed = (math.sinh(2 * d) / (4 * d)) ** (p / 2) / math.tanh(d) / math.pi
            yield f"sine d={d:g}", p, rep, closed


def main():
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--p", type=float, nargs="+", default=[2.5, 3.0, 4.0])
    parser.add_argument("--n", type=int, nargs="+", default=list(range(2, 11)))
    parser.add_argument("--d", type=float, nargs="+", default=[0.25, 0.5, 1.0, 2.0])
    args = parser.parse_args()

    print(f"{'map':<16}{'p':>5}{'q_opt':>10}{'non-q':>14}{'closed form':>14}{'rel diff':>10}{'bound':>12}")
    rows = list(epicycloid_rows(args.n, args.p)) + list(sine_rows(args.d, args.p))
    for name, p, rep, closed in rows:
        value = non_q(rep)
        print(
            f"{name:<16}{p:>5g}{rep.optimal_q:>10.5f}{value:>14.6g}{closed:>14.6g}"
            f"{abs(value / closed - 1):>10.1e}{rep.lower_bound_lambda:>12.5g}"
        )


if __name__ == "__main__":
    main()
