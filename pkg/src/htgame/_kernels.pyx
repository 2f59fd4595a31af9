# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Neyman-Pearson power kernels.

The most powerful size-alpha test rejects atoms in decreasing order of the
likelihood ratio alt/null.  Only the threshold atom matters for the power,
so a weighted quickselect finds it in expected linear time without sorting.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline void _swap(double* r, double* n, double* a, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef double t
    t = r[i]; r[i] = r[j]; r[j] = t
    t = n[i]; n[i] = n[j]; n[j] = t
    t = a[i]; a[i] = a[j]; a[j] = t


cdef double _select_power(double* r, double* n, double* a, Py_ssize_t m,
                          double a_inf, double alpha) noexcept nogil:
    # r, n, a hold the finite-ratio atoms; they are permuted in place.
    cdef Py_ssize_t lo = 0, hi = m, i, lt, gt, mid
    cdef double budget = alpha, power = a_inf
    cdef double pivot, x, y, z, n_gt, a_gt, n_eq, a_eq
    while lo < hi:
        mid = lo + (hi - lo) // 2
        x = r[lo]; y = r[mid]; z = r[hi - 1]
        if (x <= y <= z) or (z <= y <= x):
            pivot = y
        elif (y <= x <= z) or (z <= x <= y):
            pivot = x
        else:
            pivot = z
        # three-way partition: [lo, gt) > pivot, [gt, lt) == pivot, [lt, hi) < pivot
        gt = lo
        lt = hi
        i = lo
        while i < lt:
            if r[i] > pivot:
                _swap(r, n, a, i, gt)
                gt += 1
                i += 1
            elif r[i] < pivot:
                lt -= 1
                _swap(r, n, a, i, lt)
            else:
                i += 1
        n_gt = 0.0; a_gt = 0.0; n_eq = 0.0; a_eq = 0.0
        for i in range(lo, gt):
            n_gt += n[i]; a_gt += a[i]
        for i in range(gt, lt):
            n_eq += n[i]; a_eq += a[i]
        if n_gt > budget:
            hi = gt
            continue
        power += a_gt
        budget -= n_gt
        if n_eq > budget:
            return power + budget * pivot
        power += a_eq
        budget -= n_eq
        lo = lt
    return power


cdef double _power_flat(const double* pn, const double* pa, Py_ssize_t m,
                        double alpha, double* r, double* n, double* a) noexcept nogil:
    cdef Py_ssize_t i, k = 0
    cdef double a_inf = 0.0
    for i in range(m):
        if pn[i] > 0.0:
            r[k] = pa[i] / pn[i]
            n[k] = pn[i]
            a[k] = pa[i]
            k += 1
        elif pa[i] > 0.0:
            a_inf += pa[i]
    return _select_power(r, n, a, k, a_inf, alpha)


def np_power(const double[::1] p_null, const double[::1] p_alt, double alpha):
    """Power of the most powerful size-alpha test of p_null against p_alt."""
    cdef Py_ssize_t m = p_null.shape[0]
    cdef double* buf = <double*> malloc(3 * (m + 1) * sizeof(double))
    cdef double out
    if buf == NULL:
        raise MemoryError()
    try:
        out = _power_flat(&p_null[0], &p_alt[0], m, alpha, buf, buf + m + 1, buf + 2 * (m + 1))
    finally:
        free(buf)
    return out


cdef double _power_product(const double* na, const double* aa, Py_ssize_t ma,
                           const double* nb, const double* ab, Py_ssize_t mb,
                           double alpha, double* r, double* n, double* a) noexcept nogil:
    cdef Py_ssize_t i, j, k = 0
    cdef double a_inf = 0.0, pn, pa
    for i in range(ma):
        if na[i] == 0.0 and aa[i] == 0.0:
            continue
        for j in range(mb):
            pn = na[i] * nb[j]
            pa = aa[i] * ab[j]
            if pn > 0.0:
                r[k] = pa / pn
                n[k] = pn
                a[k] = pa
                k += 1
            elif pa > 0.0:
                a_inf += pa
    return _select_power(r, n, a, k, a_inf, alpha)


def np_power_product(const double[::1] pa_null, const double[::1] pa_alt,
                     const double[::1] pb_null, const double[::1] pb_alt, double alpha):
    """Power of the most powerful test on the product of two independent experiments."""
    cdef Py_ssize_t ma = pa_null.shape[0], mb = pb_null.shape[0]
    cdef Py_ssize_t m = ma * mb + 1
    cdef double* buf = <double*> malloc(3 * m * sizeof(double))
    cdef double out
    if buf == NULL:
        raise MemoryError()
    try:
        out = _power_product(&pa_null[0], &pa_alt[0], ma, &pb_null[0], &pb_alt[0], mb,
                             alpha, buf, buf + m, buf + 2 * m)
    finally:
        free(buf)
    return out


def np_power_product_rows(const double[:, ::1] rows_null, const double[:, ::1] rows_alt,
                          const double[::1] pb_null, const double[::1] pb_alt, double alpha):
    """Vector of product-experiment powers, one per row of the first factor."""
    cdef Py_ssize_t nrow = rows_null.shape[0], ma = rows_null.shape[1]
    cdef Py_ssize_t mb = pb_null.shape[0], m = ma * mb + 1, t
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(nrow, dtype=np.float64)
    cdef double* buf = <double*> malloc(3 * m * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for t in range(nrow):
                out[t] = _power_product(&rows_null[t, 0], &rows_alt[t, 0], ma,
                                        &pb_null[0], &pb_alt[0], mb,
                                        alpha, buf, buf + m, buf + 2 * m)
    finally:
        free(buf)
    return out
