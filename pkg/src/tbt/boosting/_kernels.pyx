# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled split-scan kernels.

Single-pass C loops; every floating-point operation happens in the same
order as the NumPy fallback (sequential prefix accumulation, identical gain
expression, first-max tie-breaking), so both backends produce bit-identical
splits.
"""

import numpy as np

cimport numpy as cnp

BACKEND = "compiled"


cdef inline double _gain(double gl, double hl, double gr, double hr, double lam) nogil:
    return 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam)
                  - (gl + gr) * (gl + gr) / ((hl + hr) + lam))


cdef inline bint _banned_thr(const double[::1] banned, double t) nogil:
    cdef Py_ssize_t i
    for i in range(banned.shape[0]):
        if banned[i] == t:
            return True
    return False


def best_numeric_split(const cnp.intp_t[::1] presort,
                       const cnp.uint8_t[::1] node_mask,
                       const double[::1] values,
                       const double[::1] g,
                       const double[::1] h,
                       double g_tot, double h_tot, long n_node,
                       double lam, long min_leaf,
                       const double[::1] banned):
    cdef Py_ssize_t N = presort.shape[0]
    cdef Py_ssize_t k, sid
    cdef double gl = 0.0, hl = 0.0
    cdef double prev_v = 0.0, cur_v, t, gr, hr, gain
    cdef double best_gain = -np.inf, best_thr = 0.0
    cdef long cnt_left = 0
    cdef bint found = False, have_prev = False
    if n_node < 2:
        return False, 0.0, 0.0
    with nogil:
        for k in range(N):
            sid = presort[k]
            if not node_mask[sid]:
                continue
            cur_v = values[sid]
            if have_prev and cur_v != prev_v:
                t = prev_v + (cur_v - prev_v) * 0.5
                if t <= prev_v:
                    t = cur_v
                if (cnt_left >= min_leaf and n_node - cnt_left >= min_leaf
                        and not _banned_thr(banned, t)):
                    gr = g_tot - gl
                    hr = h_tot - hl
                    gain = _gain(gl, hl, gr, hr, lam)
                    if gain > best_gain:
                        best_gain = gain
                        best_thr = t
                        found = True
            gl = gl + g[sid]
            hl = hl + h[sid]
            cnt_left = cnt_left + 1
            prev_v = cur_v
            have_prev = True
    if not found:
        return False, 0.0, 0.0
    return True, best_gain, best_thr


def best_categorical_split(const cnp.intp_t[::1] node_ids,
                           const cnp.int32_t[::1] codes,
                           const double[::1] g,
                           const double[::1] h,
                           double g_tot, double h_tot, long n_cats,
                           double lam, long min_leaf,
                           const cnp.int32_t[::1] banned):
    cdef Py_ssize_t n = node_ids.shape[0]
    cdef Py_ssize_t i, sid
    cdef long c
    cdef double[::1] gs = np.zeros(n_cats, dtype=np.float64)
    cdef double[::1] hs = np.zeros(n_cats, dtype=np.float64)
    cdef long[::1] cnt = np.zeros(n_cats, dtype=np.int64)
    cdef cnp.uint8_t[::1] ban = np.zeros(n_cats, dtype=np.uint8)
    cdef double gl, hl, gr, hr, gain
    cdef double best_gain = -np.inf
    cdef long best_code = -1
    cdef bint found = False
    for i in range(banned.shape[0]):
        ban[banned[i]] = 1
    with nogil:
        for i in range(n):
            sid = node_ids[i]
            c = codes[sid]
            gs[c] = gs[c] + g[sid]
            hs[c] = hs[c] + h[sid]
            cnt[c] = cnt[c] + 1
        for c in range(n_cats):
            if cnt[c] == 0 or cnt[c] < min_leaf or n - cnt[c] < min_leaf or ban[c]:
                continue
            gl = gs[c]
            hl = hs[c]
            gr = g_tot - gl
            hr = h_tot - hl
            gain = _gain(gl, hl, gr, hr, lam)
            if gain > best_gain:
                best_gain = gain
                best_code = c
                found = True
    if not found:
        return False, 0.0, 0.0
    return True, best_gain, float(best_code)
