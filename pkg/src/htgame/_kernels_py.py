"""Pure numpy versions of the compiled power kernels.

Same signatures and results as the extension module, up to rounding.  The
threshold atom is found by sorting ratios instead of quickselect.
"""

from __future__ import annotations

import numpy as np


def np_power(p_null, p_alt, alpha):
    """Power of the most powerful size-alpha test of p_null against p_alt."""
    n = np.asarray(p_null, dtype=float)
    a = np.asarray(p_alt, dtype=float)
    fin = n > 0.0
    a_inf = float(a[~fin & (a > 0.0)].sum())
    nf = n[fin]
    af = a[fin]
    if nf.size == 0:
        return a_inf
    r = af / nf
    order = np.argsort(-r, kind="stable")
    nf = nf[order]
    af = af[order]
    cum = np.cumsum(nf)
    k = int(np.searchsorted(cum, alpha, side="right"))
    if k >= nf.size:
        return a_inf + float(af.sum())
    before_n = float(cum[k - 1]) if k > 0 else 0.0
    before_a = float(af[:k].sum())
    return a_inf + before_a + (alpha - before_n) * float(r[order][k])


def np_power_product(pa_null, pa_alt, pb_null, pb_alt, alpha):
    """Power of the most powerful test on the product of two independent experiments."""
    n = np.outer(pa_null, pb_null).ravel()
    a = np.outer(pa_alt, pb_alt).ravel()
    return np_power(n, a, alpha)


def np_power_product_rows(rows_null, rows_alt, pb_null, pb_alt, alpha):
    """Vector of product-experiment powers, one per row of the first factor."""
    rows_null = np.asarray(rows_null, dtype=float)
    rows_alt = np.asarray(rows_alt, dtype=float)
    out = np.empty(rows_null.shape[0])
    for t in range(rows_null.shape[0]):
        out[t] = np_power_product(rows_null[t], rows_alt[t], pb_null, pb_alt, alpha)
    return out
