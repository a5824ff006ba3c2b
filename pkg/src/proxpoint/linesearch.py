"""Golden-section search for scalar unimodal problems."""

import math

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2


def golden_section_max(f, a, b, tol=1e-6):
    """Maximize ``f`` on ``[a, b]``.

    Returns ``(x, f(x))`` for the best point evaluated once the bracket is
    narrower than ``tol``. Endpoints are evaluated too, so a monotone ``f``
    returns the correct boundary.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return a, f(a)
    best = max(((a, f(a)), (b, f(b))), key=lambda t: t[1])

    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c, d = a + INV_PHI2 * h, a + INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(n - 1):
        if fc > fd:
            b, d, fd = d, c, fc
            h *= INV_PHI
            c = a + INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h *= INV_PHI
            d = a + INV_PHI * h
            fd = f(d)
    for cand in ((c, fc), (d, fd)):
        if cand[1] > best[1]:
            best = cand
    return best
