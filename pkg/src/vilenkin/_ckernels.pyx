# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled streaming kernels; drop-in replacement for ``_pykernels``.

Character phases come from two small tables (low and high halves of the
digit vector) instead of the incremental update used by the fallback.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()

ctypedef cnp.int64_t i64


def _split_tables(radices, i64 L):
    """Phase tables for the factorisation psi_n(x) = psi_{n_lo}(x_lo) * psi_{n_hi M_lo}(x_hi)."""
    m = [int(q) for q in radices]
    h = (len(m) + 1) // 2
    lo, hi = m[:h], m[h:]

    def table(part):
        size = 1
        for q in part:
            size *= q
        idx = np.arange(size)
        tab = np.zeros((size, size), dtype=np.int64)
        stride = 1
        for q in part:
            dig = (idx // stride) % q
            tab += np.outer(dig, dig) * (L // q)
            stride *= q
        return np.ascontiguousarray(tab % L)

    return table(lo), table(hi)


cdef inline double _modulus(double x, double y) noexcept nogil:
    # magnitudes stay far below overflow, so hypot's rescaling is not needed
    return sqrt(x * x + y * y)


def stream_norms(add, radices, i64 L, phase, digits, roots, coeffs,
                 Py_ssize_t n_start, Py_ssize_t n_stop, state, target):
    tabs = _split_tables(radices, L)
    cdef const i64[:, ::1] A = tabs[0]
    cdef const i64[:, ::1] B = tabs[1]
    cdef Py_ssize_t ncell = A.shape[0] * B.shape[0]
    cdef cnp.ndarray out_arr = np.empty(n_stop - n_start + 1)
    cdef double[::1] out = out_arr
    if L == 2 and not np.iscomplexobj(state):
        _walsh_stream(A, B, np.asarray(coeffs, dtype=np.float64), n_start, n_stop,
                      state, None if target is None else np.ascontiguousarray(target, dtype=np.float64),
                      out)
        return out_arr
    cdef double[::1] cre = np.ascontiguousarray(np.real(coeffs), dtype=np.float64)
    cdef double[::1] cim = np.ascontiguousarray(np.imag(coeffs), dtype=np.float64)
    cdef const double[::1] rre = np.ascontiguousarray(np.real(roots), dtype=np.float64)
    cdef const double[::1] rim = np.ascontiguousarray(np.imag(roots), dtype=np.float64)
    sre_arr = np.ascontiguousarray(np.real(state), dtype=np.float64)
    sim_arr = np.ascontiguousarray(np.imag(state), dtype=np.float64)
    cdef double[::1] sre = sre_arr
    cdef double[::1] sim = sim_arr
    has_target = target is not None
    cdef double[::1] tre = np.ascontiguousarray(np.real(target) if has_target else np.zeros(ncell), dtype=np.float64)
    cdef double[::1] tim = np.ascontiguousarray(np.imag(target) if has_target else np.zeros(ncell), dtype=np.float64)
    cdef Py_ssize_t mlo = A.shape[0], mhi = B.shape[0]
    cdef Py_ssize_t n, c, ch, cl, base, nlo, nhi, i = 0
    cdef i64 p, hb
    cdef double acc, a, b
    with nogil:
        acc = 0.0
        for c in range(ncell):
            acc += _modulus(sre[c] - tre[c], sim[c] - tim[c])
        out[0] = acc / ncell
        for n in range(n_start, n_stop):
            i += 1
            a = cre[n]
            b = cim[n]
            acc = 0.0
            if a != 0.0 or b != 0.0:
                nlo = n % mlo
                nhi = n // mlo
                for ch in range(mhi):
                    hb = B[nhi, ch]
                    base = ch * mlo
                    for cl in range(mlo):
                        p = A[nlo, cl] + hb
                        if p >= L:
                            p -= L
                        c = base + cl
                        sre[c] += a * rre[p] - b * rim[p]
                        sim[c] += a * rim[p] + b * rre[p]
                        acc += _modulus(sre[c] - tre[c], sim[c] - tim[c])
            else:
                for c in range(ncell):
                    acc += _modulus(sre[c] - tre[c], sim[c] - tim[c])
            out[i] = acc / ncell
    state[...] = sre_arr + 1j * sim_arr
    return out_arr


cdef _walsh_stream(const i64[:, ::1] A, const i64[:, ::1] B,
                   double[::1] coeffs, Py_ssize_t n_start, Py_ssize_t n_stop,
                   state, target, double[::1] out):
    cdef cnp.ndarray s_arr = np.ascontiguousarray(state, dtype=np.float64)
    cdef double[::1] s = s_arr
    cdef double[::1] t = target if target is not None else np.zeros(A.shape[0] * B.shape[0])
    cdef Py_ssize_t mlo = A.shape[0], mhi = B.shape[0]
    cdef Py_ssize_t ncell = mlo * mhi
    cdef Py_ssize_t n, c, ch, cl, i = 0
    cdef double acc, a, v
    cdef i64 b
    with nogil:
        acc = 0.0
        for c in range(ncell):
            acc += fabs(s[c] - t[c])
        out[0] = acc / ncell
        for n in range(n_start, n_stop):
            i += 1
            a = coeffs[n]
            acc = 0.0
            if a != 0.0:
                for ch in range(mhi):
                    b = B[n // mlo, ch]
                    for cl in range(mlo):
                        c = ch * mlo + cl
                        if A[n % mlo, cl] ^ b:
                            v = s[c] - a
                        else:
                            v = s[c] + a
                        s[c] = v
                        acc += fabs(v - t[c])
            else:
                for c in range(ncell):
                    acc += fabs(s[c] - t[c])
            out[i] = acc / ncell
    state[...] = s_arr


def fejer_sup(add, radices, i64 L, phase, digits, roots, coeffs, Py_ssize_t n_max):
    tabs = _split_tables(radices, L)
    cdef const i64[:, ::1] A = tabs[0]
    cdef const i64[:, ::1] B = tabs[1]
    cdef Py_ssize_t ncell = A.shape[0] * B.shape[0]
    cdef double[::1] cre = np.ascontiguousarray(np.real(coeffs), dtype=np.float64)
    cdef double[::1] cim = np.ascontiguousarray(np.imag(coeffs), dtype=np.float64)
    cdef const double[::1] rre = np.ascontiguousarray(np.real(roots), dtype=np.float64)
    cdef const double[::1] rim = np.ascontiguousarray(np.imag(roots), dtype=np.float64)
    cdef double[::1] sre = np.zeros(ncell)
    cdef double[::1] sim = np.zeros(ncell)
    cdef double[::1] qre = np.zeros(ncell)
    cdef double[::1] qim = np.zeros(ncell)
    sup_arr = np.zeros(ncell)
    cdef double[::1] sup = sup_arr
    cdef Py_ssize_t mlo = A.shape[0], mhi = B.shape[0]
    cdef Py_ssize_t n, c, ch, cl, base, nlo, nhi
    cdef i64 p, hb
    cdef double a, b, v, inv
    with nogil:
        for n in range(1, n_max + 1):
            inv = 1.0 / n
            for c in range(ncell):
                qre[c] += sre[c]
                qim[c] += sim[c]
                v = _modulus(qre[c], qim[c]) * inv
                if v > sup[c]:
                    sup[c] = v
            a = cre[n - 1]
            b = cim[n - 1]
            if a != 0.0 or b != 0.0:
                nlo = (n - 1) % mlo
                nhi = (n - 1) // mlo
                for ch in range(mhi):
                    hb = B[nhi, ch]
                    base = ch * mlo
                    for cl in range(mlo):
                        p = A[nlo, cl] + hb
                        if p >= L:
                            p -= L
                        c = base + cl
                        sre[c] += a * rre[p] - b * rim[p]
                        sim[c] += a * rim[p] + b * rre[p]
    return sup_arr


def fwht(double[:, ::1] a):
    """In-place unnormalized Walsh butterfly along axis 0."""
    cdef Py_ssize_t n = a.shape[0], w = a.shape[1]
    cdef Py_ssize_t h = 1, i, j, col
    cdef double x, y
    with nogil:
        while h < n:
            i = 0
            while i < n:
                for j in range(i, i + h):
                    for col in range(w):
                        x = a[j, col]
                        y = a[j + h, col]
                        a[j, col] = x + y
                        a[j + h, col] = x - y
                i += 2 * h
            h *= 2
    return np.asarray(a)
