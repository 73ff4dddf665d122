# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Mirrors ``_pykernels`` function for function."""

from cython.view cimport array as cvarray
from libc.math cimport INFINITY, exp, fabs, log
from libc.stdlib cimport calloc, free

cdef double LN2 = 0.6931471805599453

BACKEND = "cython"


def is_subsequence(const unsigned char[::1] y, const unsigned char[::1] x):
    cdef Py_ssize_t i = 0, j = 0
    cdef Py_ssize_t m = y.shape[0], n = x.shape[0]
    if m > n:
        return False
    while i < m and j < n:
        if y[i] == x[j]:
            i += 1
        j += 1
    return i == m


def embedding_count(const unsigned char[::1] x, const unsigned char[::1] y):
    cdef Py_ssize_t n = x.shape[0], m = y.shape[0]
    cdef Py_ssize_t i, j
    cdef unsigned long long *dp
    cdef unsigned long long result
    if m > n:
        return 0
    # C(62, 31) < 2**63, so the counts cannot overflow below this length.
    if n > 62:
        raise OverflowError("use the Python kernel for inputs longer than 62")
    dp = <unsigned long long *> calloc(m + 1, sizeof(unsigned long long))
    if dp == NULL:
        raise MemoryError()
    dp[0] = 1
    for i in range(n):
        j = m if m < i + 1 else i + 1
        while j >= 1:
            if x[i] == y[j - 1]:
                dp[j] += dp[j - 1]
            j -= 1
    result = dp[m]
    free(dp)
    return int(result)


def fill_deletion_channel(int n, double d, double[:, ::1] out):
    """Accumulate P(y|x) for every input of length n into ``out``.

    Rows are inputs by integer value, columns are outputs indexed by
    ``2**len(y) - 1 + int(y, 2)``.
    """
    cdef Py_ssize_t size = 1 << n
    cdef Py_ssize_t x, mask, y, k, j
    cdef double *weight = <double *> calloc(n + 1, sizeof(double))
    cdef double keep = 1.0 - d
    if weight == NULL:
        raise MemoryError()
    for k in range(n + 1):
        weight[k] = (d ** (n - k)) * (keep ** k)
    for x in range(size):
        for mask in range(size):
            y = 0
            k = 0
            for j in range(n):
                if (mask >> j) & 1:
                    y |= ((x >> j) & 1) << k
                    k += 1
            out[x, (1 << k) - 1 + y] += weight[k]
    free(weight)


def fwht(double[::1] a):
    """Unnormalized in-place Walsh-Hadamard butterfly."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t h = 1, i, j
    cdef double u, v
    while h < n:
        i = 0
        while i < n:
            for j in range(i, i + h):
                u = a[j]
                v = a[j + h]
                a[j] = u + v
                a[j + h] = u - v
            i += 2 * h
        h *= 2


def parse_phrases(const unsigned char[::1] bits):
    cdef Py_ssize_t n = bits.shape[0]
    cdef Py_ssize_t start = 0, i, flips, first_flip
    phrases = []
    while start < n:
        flips = 0
        first_flip = 0
        i = start + 1
        while i < n:
            if bits[i] != bits[i - 1]:
                flips += 1
                if flips == 1:
                    first_flip = i - start + 1
                else:
                    break
            i += 1
        if flips < 2:
            break
        phrases.append((bits[start] - 48, first_flip, i - start + 1 - first_flip))
        start = i + 1
    return phrases, start


cdef double _g_bits(const double[::1] lpx, const double[::1] lpy, const unsigned char[:, ::1] mask,
                    const double[::1] px, const double[::1] py,
                    double[::1] lam, double[::1] mu) noexcept nogil:
    cdef Py_ssize_t nx = lpx.shape[0], ny = lpy.shape[0], x, y
    cdef double mass = 0.0, lin = 0.0
    for x in range(nx):
        for y in range(ny):
            if mask[x, y]:
                mass += exp(lpx[x] + lam[x] + lpy[y] + mu[y])
    for x in range(nx):
        lin += lam[x] * px[x]
    for y in range(ny):
        lin += mu[y] * py[y]
    return (1.0 - mass + lin) / LN2


cdef void _update_mu(const double[::1] lpx, const unsigned char[:, ::1] mask,
                     double[::1] lam, double[::1] mu) noexcept nogil:
    cdef Py_ssize_t nx = lpx.shape[0], ny = mu.shape[0], x, y
    cdef double m, s, v
    for y in range(ny):
        m = -INFINITY
        for x in range(nx):
            if mask[x, y]:
                v = lpx[x] + lam[x]
                if v > m:
                    m = v
        s = 0.0
        for x in range(nx):
            if mask[x, y]:
                s += exp(lpx[x] + lam[x] - m)
        mu[y] = -(m + log(s))


cdef void _update_lam(const double[::1] lpy, const unsigned char[:, ::1] mask,
                      double[::1] lam, double[::1] mu) noexcept nogil:
    cdef Py_ssize_t nx = lam.shape[0], ny = lpy.shape[0], x, y
    cdef double m, s, v
    for x in range(nx):
        m = -INFINITY
        for y in range(ny):
            if mask[x, y]:
                v = lpy[y] + mu[y]
                if v > m:
                    m = v
        s = 0.0
        for y in range(ny):
            if mask[x, y]:
                s += exp(lpy[y] + mu[y] - m)
        lam[x] = -(m + log(s))


def dual_iterate(const double[::1] lpx, const double[::1] lpy, const unsigned char[:, ::1] mask,
                 double[::1] lam, double[::1] mu, long k_max, double rel_tol, double[::1] trace):
    """Alternating dual updates; see ``_pykernels.dual_iterate``."""
    cdef Py_ssize_t nx = lpx.shape[0], ny = lpy.shape[0], i
    cdef double[::1] px = cvarray(shape=(nx,), itemsize=sizeof(double), format="d")
    cdef double[::1] py = cvarray(shape=(ny,), itemsize=sizeof(double), format="d")
    cdef long k = 0
    cdef bint converged = False
    cdef double new, prev, scale
    for i in range(nx):
        px[i] = exp(lpx[i])
    for i in range(ny):
        py[i] = exp(lpy[i])
    with nogil:
        _update_mu(lpx, mask, lam, mu)
        trace[0] = _g_bits(lpx, lpy, mask, px, py, lam, mu)
        while k < k_max:
            _update_lam(lpy, mask, lam, mu)
            trace[2 * k + 1] = _g_bits(lpx, lpy, mask, px, py, lam, mu)
            _update_mu(lpx, mask, lam, mu)
            new = _g_bits(lpx, lpy, mask, px, py, lam, mu)
            trace[2 * k + 2] = new
            prev = trace[2 * k]
            k += 1
            scale = fabs(new)
            if scale < 1.0:
                scale = 1.0
            if fabs(new - prev) <= rel_tol * scale:
                converged = True
                break
    return k, converged


def ipf_fit(const double[::1] px, const double[::1] py, double[:, ::1] p, long max_iters, double tol):
    """Alternate row and column rescaling of ``p`` in place; see ``_pykernels.ipf_fit``."""
    cdef Py_ssize_t nx = px.shape[0], ny = py.shape[0], x, y
    cdef long it = 0
    cdef double s, row_err = INFINITY, col_err = INFINITY, e
    cdef bint ok = False
    cdef double[::1] cs = cvarray(shape=(ny if ny > 0 else 1,), itemsize=sizeof(double), format="d")
    with nogil:
        while it < max_iters:
            it += 1
            for x in range(nx):
                s = 0.0
                for y in range(ny):
                    s += p[x, y]
                if s > 0:
                    s = px[x] / s
                for y in range(ny):
                    p[x, y] *= s
            for y in range(ny):
                cs[y] = 0.0
            for x in range(nx):
                for y in range(ny):
                    cs[y] += p[x, y]
            for y in range(ny):
                s = cs[y]
                if s > 0:
                    s = py[y] / s
                for x in range(nx):
                    p[x, y] *= s
            row_err = 0.0
            for x in range(nx):
                s = 0.0
                for y in range(ny):
                    s += p[x, y]
                e = fabs(s - px[x])
                if e > row_err:
                    row_err = e
            if row_err <= tol:
                col_err = 0.0
                for y in range(ny):
                    cs[y] = 0.0
                for x in range(nx):
                    for y in range(ny):
                        cs[y] += p[x, y]
                for y in range(ny):
                    e = fabs(cs[y] - py[y])
                    if e > col_err:
                        col_err = e
                if col_err <= tol:
                    ok = True
                    break
    if ok:
        return it, row_err, col_err, True
    col_err = 0.0
    for y in range(ny):
        cs[y] = 0.0
    for x in range(nx):
        for y in range(ny):
            cs[y] += p[x, y]
    for y in range(ny):
        e = fabs(cs[y] - py[y])
        if e > col_err:
            col_err = e
    return it, row_err, col_err, False
