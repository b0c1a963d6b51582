# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for Luxemburg norms of piecewise data.

The functions here mirror :mod:`varweyl._core_py` exactly (same bracket,
same bisection stopping rule) so the two backends agree to rounding.
"""
import numpy as np

from libc.math cimport pow, INFINITY, isinf, fmax, fmin

cdef double INF_EXCESS = 1e-12
cdef int MAX_DOUBLINGS = 200
cdef int MAX_BISECTIONS = 80


cdef double _modular(const double[::1] w, const double[::1] h, const double[::1] p,
                     Py_ssize_t n, double lam) noexcept nogil:
    cdef Py_ssize_t i
    cdef double total = 0.0
    cdef double s
    for i in range(n):
        if h[i] <= 0.0:
            continue
        s = h[i] / lam
        if isinf(p[i]):
            if s > 1.0 + INF_EXCESS:
                return INFINITY
        elif w[i] > 0.0:
            total += w[i] * pow(s, p[i])
    return total


cdef bint _nonzero(const double[::1] w, const double[::1] h, const double[::1] p,
                   Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(n):
        if h[i] > 0.0 and (w[i] > 0.0 or isinf(p[i])):
            return True
    return False


cdef int _luxemburg(const double[::1] w, const double[::1] h, const double[::1] p,
                    Py_ssize_t n, double tol, double* value, double* rho,
                    int* iterations, double* width) noexcept nogil:
    """Bracket then bisect; returns 0 on success and 1 when no bracket exists."""
    cdef double lo, hi, mid
    cdef int k = 0
    cdef int steps = 0
    if not _nonzero(w, h, p, n):
        value[0] = 0.0
        rho[0] = 0.0
        iterations[0] = 0
        width[0] = 0.0
        return 0
    if _modular(w, h, p, n, 1.0) <= 1.0:
        hi = 1.0
        lo = 0.5
        while _modular(w, h, p, n, lo) <= 1.0:
            hi = lo
            lo = 0.5 * lo
            k += 1
            if k > MAX_DOUBLINGS:
                return 1
    else:
        lo = 1.0
        hi = 2.0
        while _modular(w, h, p, n, hi) > 1.0:
            lo = hi
            hi = 2.0 * hi
            k += 1
            if k > MAX_DOUBLINGS:
                return 1
    while steps < MAX_BISECTIONS and (hi - lo) > tol * hi:
        mid = 0.5 * (lo + hi)
        if _modular(w, h, p, n, mid) <= 1.0:
            hi = mid
        else:
            lo = mid
        steps += 1
    value[0] = hi
    rho[0] = _modular(w, h, p, n, hi)
    iterations[0] = k + steps
    width[0] = hi - lo
    return 0


def modular_weighted(const double[::1] w, const double[::1] h, const double[::1] p, double lam):
    """Return sum_i w_i * phi_{p_i}(h_i / lam) with the infinite-exponent convention."""
    return _modular(w, h, p, w.shape[0], lam)


def luxemburg_weighted(const double[::1] w, const double[::1] h, const double[::1] p, double tol):
    """Luxemburg norm of weighted samples.

    Returns
    -------
    tuple
        ``(value, modular_at_value, iterations, bracket_width)``.
    """
    cdef double value = 0.0, rho = 0.0, width = 0.0
    cdef int iterations = 0
    if _luxemburg(w, h, p, w.shape[0], tol, &value, &rho, &iterations, &width):
        raise ArithmeticError("bracket not found after 200 doublings (non-integrable input)")
    return value, rho, iterations, width


cdef Py_ssize_t _bisect_right(const double[::1] a, double x) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if x < a[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


def window_norms(const double[::1] edges, const double[::1] heights,
                 const double[::1] starts, double length,
                 const double[::1] exp_breaks, const double[::1] exp_values,
                 bint relative, double measure_scale, double tol, bint closed_form):
    """Luxemburg norms of a piecewise-constant function on sliding windows.

    Parameters
    ----------
    edges, heights
        Piece edges (``m + 1`` values) and non-negative heights (``m`` values).
    starts, length
        Windows are ``[s, s + length]`` for every ``s`` in ``starts``.
    exp_breaks, exp_values
        Piecewise-constant exponent; ``exp_values[j]`` holds between
        ``exp_breaks[j-1]`` and ``exp_breaks[j]``.  In relative mode the
        breaks live on ``[0, 1]`` and are mapped to ``s + length * b``.
    measure_scale
        Factor applied to every piece width (``1 / length`` for rescaled
        windows).
    closed_form
        Use ``(sum w h^p)^(1/p)`` when the exponent is a single finite value.
    """
    cdef Py_ssize_t m = heights.shape[0]
    cdef Py_ssize_t nw = starts.shape[0]
    cdef Py_ssize_t J = exp_breaks.shape[0]
    cdef Py_ssize_t cap = m + J + 2
    out_arr = np.empty(nw, dtype=np.float64)
    cdef double[::1] out = out_arr
    wbuf_arr = np.empty(cap, dtype=np.float64)
    hbuf_arr = np.empty(cap, dtype=np.float64)
    pbuf_arr = np.empty(cap, dtype=np.float64)
    cdef double[::1] W = wbuf_arr
    cdef double[::1] H = hbuf_arr
    cdef double[::1] P = pbuf_arr
    cdef Py_ssize_t k, i, j, n
    cdef double s, a, b, pos, piece_end, seg_end, e, acc, p0, top, value, rho, width
    cdef int iterations
    cdef bint single = (J == 0)
    if m == 0:
        out_arr[:] = 0.0
        return out_arr
    for k in range(nw):
        s = starts[k]
        a = fmax(s, edges[0])
        b = fmin(s + length, edges[m])
        n = 0
        if b > a:
            i = _bisect_right(edges, a) - 1
            if i < 0:
                i = 0
            j = 0
            while j < J and _break_at(exp_breaks, j, s, length, relative) <= a:
                j += 1
            pos = a
            while pos < b and i < m:
                piece_end = fmin(edges[i + 1], b)
                if piece_end <= pos:
                    i += 1
                    continue
                while pos < piece_end:
                    if j < J:
                        seg_end = _break_at(exp_breaks, j, s, length, relative)
                    else:
                        seg_end = INFINITY
                    if seg_end <= pos:
                        j += 1
                        continue
                    e = fmin(piece_end, seg_end)
                    W[n] = (e - pos) * measure_scale
                    H[n] = heights[i]
                    P[n] = exp_values[j]
                    n += 1
                    pos = e
                    if e == seg_end:
                        j += 1
                i += 1
        if closed_form and single:
            p0 = exp_values[0]
            acc = 0.0
            if isinf(p0):
                for i in range(n):
                    if W[i] > 0.0 and H[i] > acc:
                        acc = H[i]
                out[k] = acc
            else:
                # scale by the largest height so tiny or huge heights neither underflow nor overflow
                top = 0.0
                for i in range(n):
                    if W[i] > 0.0 and H[i] > top:
                        top = H[i]
                if top > 0.0:
                    for i in range(n):
                        if W[i] > 0.0 and H[i] > 0.0:
                            acc += W[i] * pow(H[i] / top, p0)
                    out[k] = top * pow(acc, 1.0 / p0)
                else:
                    out[k] = 0.0
        else:
            if _luxemburg(W, H, P, n, tol, &value, &rho, &iterations, &width):
                raise ArithmeticError("bracket not found after 200 doublings (non-integrable input)")
            out[k] = value
    return out_arr


cdef inline double _break_at(const double[::1] breaks, Py_ssize_t j, double s,
                             double length, bint relative) noexcept nogil:
    if relative:
        return s + length * breaks[j]
    return breaks[j]
