"""Bounded one-dimensional minimisation used by every infimum in the bounds."""

import math

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2


def golden_section(f, a, b, rtol=1e-8):
    """Golden-section search for a minimum of ``f`` on ``[a, b]``.

    Stops once the bracket is narrower than ``rtol * (b - a)``.  Returns
    ``(x, f(x))`` for the best point evaluated, endpoints included.
    """
    a, b = min(a, b), max(a, b)
    tol = rtol * (b - a)
    best = min(((a, f(a)), (b, f(b))), key=lambda t: t[1])
    c = a + INV_PHI2 * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = a + INV_PHI2 * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx < best[1]:
            best = (x, fx)
    return best


def minimize_bounded(f, a, b, n_scan=200, rtol=1e-8):
    """Minimise ``f`` on ``[a, b]`` robustly against multiple local minima.

    Runs a plain golden-section search over the whole interval and a
    second one bracketed around the best of ``n_scan`` equispaced probes;
    the better result wins.
    """
    golden = golden_section(f, a, b, rtol)
    xs = np.linspace(a, b, n_scan)
    fs = [f(x) for x in xs]
    i = int(np.argmin(fs))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, n_scan - 1)]
    scanned = golden_section(f, lo, hi, rtol * (b - a) / (hi - lo))
    if fs[i] < scanned[1]:
        scanned = (float(xs[i]), fs[i])
    return min(golden, scanned, key=lambda t: t[1])
