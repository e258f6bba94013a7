"""Golden-section search on a bracketed 1-D function."""

import math

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_min(f, lo, hi, tol=1e-10, max_iter=500):
    """Minimize a unimodal ``f`` over [lo, hi]; returns (argmin, min value).

    ``tol`` is absolute in the argument.  Boundary minima converge onto the
    boundary, so the returned argument is within ``tol`` of it.
    """
    if not hi > lo:
        raise ValueError("need hi > lo")
    a, b = float(lo), float(hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def golden_section_max(f, lo, hi, tol=1e-10, max_iter=500):
    """Maximize a unimodal ``f`` over [lo, hi]; returns (argmax, max value)."""
    x, v = golden_section_min(lambda u: -f(u), lo, hi, tol=tol, max_iter=max_iter)
    return x, -v
