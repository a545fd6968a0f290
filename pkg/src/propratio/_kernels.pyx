# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled backend for the sampling hot loops.

Same functions and conventions as propratio._kernels_py (which is the
readable reference); integer sampling arithmetic is bit-identical, and
floating-point accumulation uses Kahan-Neumaier compensated summation so
the two backends agree to ~1e-15 relative.  The Monte Carlo chunk loop
releases the GIL, so thread pools achieve real parallelism.
"""

from libc.math cimport exp, fabs, pow
from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free, malloc

import numpy as np

BACKEND_NAME = "c"

ERR_NONE = 0
ERR_DOMAIN = 1

cdef uint64_t GOLDEN = <uint64_t>0x9E3779B97F4A7C15
cdef uint64_t SUBSTREAM_MULT = <uint64_t>0xC2B2AE3D27D4EB4F
cdef uint64_t M32 = <uint64_t>0xFFFFFFFF

cdef int C_ERR_DOMAIN = 1
cdef int C_ERR_ALLOC = 2


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z ^= z >> 30
    z = z * <uint64_t>0xBF58476D1CE4E5B9
    z ^= z >> 27
    z = z * <uint64_t>0x94D049BB133111EB
    z ^= z >> 31
    return z


cdef inline uint64_t _mulhi64(uint64_t a, uint64_t b) noexcept nogil:
    # 32-bit-limb form, identical to rng.mulhi64
    cdef uint64_t ah = a >> 32
    cdef uint64_t al = a & M32
    cdef uint64_t bh = b >> 32
    cdef uint64_t bl = b & M32
    cdef uint64_t ll = al * bl
    cdef uint64_t m1 = ah * bl
    cdef uint64_t m2 = al * bh
    cdef uint64_t carry = ((ll >> 32) + (m1 & M32) + (m2 & M32)) >> 32
    return ah * bh + (m1 >> 32) + (m2 >> 32) + carry


cdef inline void _acc(double* s, double* comp, double v) noexcept nogil:
    # Kahan-Neumaier compensated accumulation
    cdef double t = s[0] + v
    if fabs(s[0]) >= fabs(v):
        comp[0] += (s[0] - t) + v
    else:
        comp[0] += (v - t) + s[0]
    s[0] = t


cdef inline double _evaluate(const double* row, double p, double x_bar,
                             double x_mean, int* err) noexcept nogil:
    cdef int code = <int>row[0]
    cdef double u, num, den
    if code == 0:
        return p
    if code == 1:
        if x_bar == 0.0:
            err[0] = C_ERR_DOMAIN
            return 0.0
        return p * x_mean / x_bar
    if code == 2:
        return p + row[1] * (x_bar / x_mean - 1.0)
    if code == 3:
        u = x_bar / x_mean
        if u <= 0.0:
            err[0] = C_ERR_DOMAIN
            return 0.0
        return p * pow(u, row[1])
    if code == 4:
        u = x_bar / x_mean
        if u <= 0.0:
            err[0] = C_ERR_DOMAIN
            return 0.0
        return p * exp(row[1] * (1.0 - u) / (1.0 + u))
    if code == 5:
        num = row[5] * x_mean + row[6]
        den = row[5] * x_bar + row[6]
        if den <= 0.0:
            err[0] = C_ERR_DOMAIN
            return 0.0
        return (row[1] * p + row[2] * (x_mean - x_bar)) \
            * pow(num / den, row[3]) * exp(row[4] * (num - den) / (num + den))
    if code == 6:
        return p + row[1] * (x_mean - x_bar)
    err[0] = C_ERR_DOMAIN
    return 0.0


def mc_chunk(phi_arr, x_arr, n, est_arr, master_seed, rep_start, rep_end,
             p_pop, x_mean):
    """Monte Carlo accumulators for replicates [rep_start, rep_end).

    Returns (partials, err_code, err_rep, err_est); partials has shape
    (n_est, 3) with per-estimator sums of t, (t-P)^2 and (t-P)^4.
    """
    cdef const int64_t[::1] phi = np.ascontiguousarray(phi_arr, dtype=np.int64)
    cdef const double[::1] x = np.ascontiguousarray(x_arr, dtype=np.float64)
    cdef const double[:, ::1] est = np.ascontiguousarray(est_arr, dtype=np.float64)
    cdef Py_ssize_t n_pop = phi.shape[0]
    cdef Py_ssize_t n_samp = n
    cdef Py_ssize_t n_est = est.shape[0]
    cdef Py_ssize_t start = rep_start
    cdef Py_ssize_t stop = rep_end
    cdef double p_pop_c = p_pop
    cdef double x_mean_c = x_mean
    cdef uint64_t seed_base = _mix64(<uint64_t>(int(master_seed) & 0xFFFFFFFFFFFFFFFF))

    sums_arr = np.zeros((n_est, 3))
    comps_arr = np.zeros((n_est, 3))
    cdef double[:, ::1] sums = sums_arr
    cdef double[:, ::1] comps = comps_arr

    cdef Py_ssize_t* pool = <Py_ssize_t*>malloc(n_pop * sizeof(Py_ssize_t))
    if pool == NULL:
        raise MemoryError("mc_chunk: pool allocation failed")

    cdef int err_code = 0
    cdef Py_ssize_t err_rep = -1
    cdef Py_ssize_t err_est = -1
    cdef Py_ssize_t rep, i, j, r, k, e
    cdef uint64_t state, value
    cdef int64_t a
    cdef double xs, p, x_bar, t, d, sq
    cdef int err

    with nogil:
        for rep in range(start, stop):
            state = _mix64(seed_base + (<uint64_t>rep) * SUBSTREAM_MULT)
            for i in range(n_pop):
                pool[i] = i
            for j in range(n_samp):
                state = state + GOLDEN
                value = _mix64(state)
                r = j + <Py_ssize_t>_mulhi64(value, <uint64_t>(n_pop - j))
                k = pool[j]
                pool[j] = pool[r]
                pool[r] = k
            a = 0
            xs = 0.0
            for j in range(n_samp):
                k = pool[j]
                a += phi[k]
                xs += x[k]
            p = (<double>a) / (<double>n_samp)
            x_bar = xs / (<double>n_samp)
            for e in range(n_est):
                err = 0
                t = _evaluate(&est[e, 0], p, x_bar, x_mean_c, &err)
                if err != 0:
                    err_code = err
                    err_rep = rep
                    err_est = e
                    break
                d = t - p_pop_c
                sq = d * d
                _acc(&sums[e, 0], &comps[e, 0], t)
                _acc(&sums[e, 1], &comps[e, 1], sq)
                _acc(&sums[e, 2], &comps[e, 2], sq * sq)
            if err_code != 0:
                break

    free(pool)
    if err_code != 0:
        return np.zeros((n_est, 3)), ERR_DOMAIN, int(err_rep), int(err_est)
    partials = sums_arr + comps_arr
    return partials, ERR_NONE, -1, -1


def enum_exact(phi_arr, x_arr, n, est_arr, p_pop, x_mean):
    """Exact per-estimator sums over every size-n subset.

    Returns (partials, count, err_code, err_rank, err_est); partials has
    shape (n_est, 2) holding sums of t and (t-P)^2, subsets visited in
    lexicographic order with prefix-sum updates.
    """
    cdef const int64_t[::1] phi = np.ascontiguousarray(phi_arr, dtype=np.int64)
    cdef const double[::1] x = np.ascontiguousarray(x_arr, dtype=np.float64)
    cdef const double[:, ::1] est = np.ascontiguousarray(est_arr, dtype=np.float64)
    cdef Py_ssize_t n_pop = phi.shape[0]
    cdef Py_ssize_t n_samp = n
    cdef Py_ssize_t n_est = est.shape[0]
    cdef double p_pop_c = p_pop
    cdef double x_mean_c = x_mean

    sums_arr = np.zeros((n_est, 2))
    comps_arr = np.zeros((n_est, 2))
    cdef double[:, ::1] sums = sums_arr
    cdef double[:, ::1] comps = comps_arr

    cdef Py_ssize_t* c = <Py_ssize_t*>malloc(n_samp * sizeof(Py_ssize_t))
    cdef int64_t* pre_a = <int64_t*>malloc((n_samp + 1) * sizeof(int64_t))
    cdef double* pre_x = <double*>malloc((n_samp + 1) * sizeof(double))
    if c == NULL or pre_a == NULL or pre_x == NULL:
        free(c); free(pre_a); free(pre_x)
        raise MemoryError("enum_exact: scratch allocation failed")

    cdef int err_code = 0
    cdef Py_ssize_t err_est = -1
    cdef int64_t count = 0
    cdef int64_t err_rank = -1
    cdef Py_ssize_t i, j, e
    cdef double p, x_bar, t, d
    cdef int err

    with nogil:
        for j in range(n_samp):
            c[j] = j
        pre_a[0] = 0
        pre_x[0] = 0.0
        for j in range(n_samp):
            pre_a[j + 1] = pre_a[j] + phi[c[j]]
            pre_x[j + 1] = pre_x[j] + x[c[j]]
        while True:
            p = (<double>pre_a[n_samp]) / (<double>n_samp)
            x_bar = pre_x[n_samp] / (<double>n_samp)
            for e in range(n_est):
                err = 0
                t = _evaluate(&est[e, 0], p, x_bar, x_mean_c, &err)
                if err != 0:
                    err_code = err
                    err_rank = count
                    err_est = e
                    break
                d = t - p_pop_c
                _acc(&sums[e, 0], &comps[e, 0], t)
                _acc(&sums[e, 1], &comps[e, 1], d * d)
            if err_code != 0:
                break
            count += 1
            # lexicographic successor
            i = n_samp - 1
            while i >= 0 and c[i] == n_pop - n_samp + i:
                i -= 1
            if i < 0:
                break
            c[i] += 1
            for j in range(i + 1, n_samp):
                c[j] = c[j - 1] + 1
            for j in range(i, n_samp):
                pre_a[j + 1] = pre_a[j] + phi[c[j]]
                pre_x[j + 1] = pre_x[j] + x[c[j]]

    free(c)
    free(pre_a)
    free(pre_x)
    if err_code != 0:
        return np.zeros((n_est, 2)), int(count), ERR_DOMAIN, int(err_rank), int(err_est)
    partials = sums_arr + comps_arr
    return partials, int(count), ERR_NONE, -1, -1


def enum_moments(phi_arr, x_arr, n, p_pop, x_mean):
    """Exact deviation/proportion moments over every size-n subset.

    Returns (sums, count) with sums = [e_p, e_x, e_p^2, e_x^2, e_p*e_x,
    p, (p-P)^2] summed over all subsets.
    """
    cdef const int64_t[::1] phi = np.ascontiguousarray(phi_arr, dtype=np.int64)
    cdef const double[::1] x = np.ascontiguousarray(x_arr, dtype=np.float64)
    cdef Py_ssize_t n_pop = phi.shape[0]
    cdef Py_ssize_t n_samp = n
    cdef double p_pop_c = p_pop
    cdef double x_mean_c = x_mean

    sums_arr = np.zeros(7)
    comps_arr = np.zeros(7)
    cdef double[::1] sums = sums_arr
    cdef double[::1] comps = comps_arr

    cdef Py_ssize_t* c = <Py_ssize_t*>malloc(n_samp * sizeof(Py_ssize_t))
    cdef int64_t* pre_a = <int64_t*>malloc((n_samp + 1) * sizeof(int64_t))
    cdef double* pre_x = <double*>malloc((n_samp + 1) * sizeof(double))
    if c == NULL or pre_a == NULL or pre_x == NULL:
        free(c); free(pre_a); free(pre_x)
        raise MemoryError("enum_moments: scratch allocation failed")

    cdef int64_t count = 0
    cdef Py_ssize_t i, j
    cdef double p, x_bar, e_p, e_x

    with nogil:
        for j in range(n_samp):
            c[j] = j
        pre_a[0] = 0
        pre_x[0] = 0.0
        for j in range(n_samp):
            pre_a[j + 1] = pre_a[j] + phi[c[j]]
            pre_x[j + 1] = pre_x[j] + x[c[j]]
        while True:
            p = (<double>pre_a[n_samp]) / (<double>n_samp)
            x_bar = pre_x[n_samp] / (<double>n_samp)
            e_p = (p - p_pop_c) / p_pop_c
            e_x = (x_bar - x_mean_c) / x_mean_c
            _acc(&sums[0], &comps[0], e_p)
            _acc(&sums[1], &comps[1], e_x)
            _acc(&sums[2], &comps[2], e_p * e_p)
            _acc(&sums[3], &comps[3], e_x * e_x)
            _acc(&sums[4], &comps[4], e_p * e_x)
            _acc(&sums[5], &comps[5], p)
            _acc(&sums[6], &comps[6], (p - p_pop_c) * (p - p_pop_c))
            count += 1
            i = n_samp - 1
            while i >= 0 and c[i] == n_pop - n_samp + i:
                i -= 1
            if i < 0:
                break
            c[i] += 1
            for j in range(i + 1, n_samp):
                c[j] = c[j - 1] + 1
            for j in range(i, n_samp):
                pre_a[j + 1] = pre_a[j] + phi[c[j]]
                pre_x[j + 1] = pre_x[j] + x[c[j]]

    free(c)
    free(pre_a)
    free(pre_x)
    return sums_arr + comps_arr, int(count)
