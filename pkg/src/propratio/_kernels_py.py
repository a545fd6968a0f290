"""Pure-Python/NumPy backend for the sampling hot loops.

Drop-in fallback for the compiled extension (propratio._kernels): same
functions, same argument conventions, and bit-identical integer sampling
(the SplitMix64/Fisher-Yates arithmetic is mirrored on uint64 arrays).
Floating-point accumulations use math.fsum, so the two backends agree on
reported statistics to ~1e-15 relative; bit-identity across worker counts
within a backend is guaranteed by the fixed chunk grid (see sampling).

Estimator rows are float64 vectors [code, p0, ..., p5] with codes

    0 usual | 1 ratio | 2 linear-difference(d) | 3 power-ratio(g)
    4 exponential(delta) | 5 ratio-exponential(q1,q2,alpha,beta,a,b)
    6 regression(slope)
"""

from __future__ import annotations

import itertools
import math
from math import fsum

import numpy as np

from .rng import GOLDEN, SUBSTREAM_MULT, mix64

BACKEND_NAME = "python"

_U64 = np.uint64
_M32 = _U64(0xFFFFFFFF)
_GOLDEN = _U64(GOLDEN)
_MULT = _U64(SUBSTREAM_MULT)

ERR_NONE = 0
ERR_DOMAIN = 1

_ENUM_BUFFER = 65536


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> _U64(30))
    z = z * _U64(0xBF58476D1CE4E5B9)
    z = z ^ (z >> _U64(27))
    z = z * _U64(0x94D049BB133111EB)
    return z ^ (z >> _U64(31))


def _mulhi64_vec(a: np.ndarray, k: int) -> np.ndarray:
    """High 64 bits of a * k, elementwise; mirrors rng.mulhi64."""
    b = _U64(k)
    ah, al = a >> _U64(32), a & _M32
    bh, bl = b >> _U64(32), b & _M32
    ll = al * bl
    m1 = ah * bl
    m2 = al * bh
    carry = ((ll >> _U64(32)) + (m1 & _M32) + (m2 & _M32)) >> _U64(32)
    return ah * bh + (m1 >> _U64(32)) + (m2 >> _U64(32)) + carry


def _sample_means(phi, x, n, master_seed, rep_start, rep_end):
    """(p, x_bar) for each replicate in [rep_start, rep_end).

    Vectorized partial Fisher-Yates over a (reps, N) index pool; the
    integer draws are identical to the scalar and compiled paths.
    """
    n_pop = phi.shape[0]
    m = rep_end - rep_start
    idx = np.arange(rep_start, rep_end, dtype=np.uint64)
    state = _mix64_vec(_U64(mix64(master_seed)) + idx * _MULT)
    pool = np.broadcast_to(np.arange(n_pop, dtype=np.int64), (m, n_pop)).copy()
    rows = np.arange(m)
    for j in range(n):
        state = state + _GOLDEN
        value = _mix64_vec(state)
        r = j + _mulhi64_vec(value, n_pop - j).astype(np.int64)
        tmp = pool[rows, j].copy()
        pool[rows, j] = pool[rows, r]
        pool[rows, r] = tmp
    chosen = pool[:, :n]
    p = phi[chosen].sum(axis=1) / n
    x_bar = x[chosen].sum(axis=1) / n
    return p, x_bar


def _eval_row(row, p, x_bar, x_mean):
    """Vector-evaluate one estimator row; returns (values, bad_mask|None)."""
    code = int(row[0])
    if code == 0:
        return p.copy(), None
    if code == 1:
        bad = x_bar == 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            return p * x_mean / x_bar, (bad if bad.any() else None)
    if code in (2, 3, 4):
        u = x_bar / x_mean
        if code == 2:
            return p + row[1] * (u - 1.0), None
        bad = u <= 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            if code == 3:
                vals = p * u ** row[1]
            else:
                vals = p * np.exp(row[1] * (1.0 - u) / (1.0 + u))
        return vals, (bad if bad.any() else None)
    if code == 5:
        q1, q2, alpha, beta, a, b = row[1:7]
        num = a * x_mean + b
        den = a * x_bar + b
        bad = den <= 0.0
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = (
                (q1 * p + q2 * (x_mean - x_bar))
                * (num / den) ** alpha
                * np.exp(beta * (num - den) / (num + den))
            )
        return vals, (bad if bad.any() else None)
    if code == 6:
        return p + row[1] * (x_mean - x_bar), None
    raise ValueError(f"unknown estimator code {code}")


def mc_chunk(phi, x, n, est, master_seed, rep_start, rep_end, p_pop, x_mean):
    """Monte Carlo accumulators for replicates [rep_start, rep_end).

    Returns (partials, err_code, err_rep, err_est) where partials has
    shape (n_est, 3): per-estimator sums of t, (t-P)^2 and (t-P)^4.
    On a domain error the partials are meaningless and (err_rep, err_est)
    identify the first offending (replicate, estimator) in replicate-major
    order.
    """
    n_est = est.shape[0]
    p, x_bar = _sample_means(phi, x, n, master_seed, rep_start, rep_end)
    values = []
    err_rep, err_est = -1, -1
    for e in range(n_est):
        vals, bad = _eval_row(est[e], p, x_bar, x_mean)
        if bad is not None:
            first = int(np.flatnonzero(bad)[0])
            if err_rep < 0 or first < err_rep:
                err_rep, err_est = first, e
        values.append(vals)
    if err_rep >= 0:
        return np.zeros((n_est, 3)), ERR_DOMAIN, rep_start + err_rep, err_est
    partials = np.empty((n_est, 3))
    for e in range(n_est):
        sq = (values[e] - p_pop) ** 2
        partials[e, 0] = fsum(values[e].tolist())
        partials[e, 1] = fsum(sq.tolist())
        partials[e, 2] = fsum((sq * sq).tolist())
    return partials, ERR_NONE, -1, -1


def _make_scalar_eval(row, x_mean):
    """Scalar closure (p, x_bar) -> t mirroring the compiled switch.

    Returns math.nan to flag a domain failure (the caller aborts on the
    first flagged subset, so the sentinel never leaks into results).
    """
    code = int(row[0])
    if code == 0:
        return lambda p, xb: p
    if code == 1:
        return lambda p, xb: p * x_mean / xb if xb != 0.0 else math.nan
    if code == 2:
        d = row[1]
        return lambda p, xb: p + d * (xb / x_mean - 1.0)
    if code == 3:
        g = row[1]
        return lambda p, xb: p * (xb / x_mean) ** g if xb / x_mean > 0.0 else math.nan
    if code == 4:
        delta = row[1]

        def _exp(p, xb):
            u = xb / x_mean
            if u <= 0.0:
                return math.nan
            return p * math.exp(delta * (1.0 - u) / (1.0 + u))

        return _exp
    if code == 5:
        q1, q2, alpha, beta, a, b = row[1:7]
        num = a * x_mean + b

        def _rexp(p, xb):
            den = a * xb + b
            if den <= 0.0:
                return math.nan
            return (
                (q1 * p + q2 * (x_mean - xb))
                * (num / den) ** alpha
                * math.exp(beta * (num - den) / (num + den))
            )

        return _rexp
    if code == 6:
        slope = row[1]
        return lambda p, xb: p + slope * (x_mean - xb)
    raise ValueError(f"unknown estimator code {code}")


class _BufferedSum:
    """Exact streaming sum: buffer values, fsum per block, fsum of blocks."""

    def __init__(self):
        self._buffer = []
        self._blocks = []

    def add(self, value):
        self._buffer.append(value)
        if len(self._buffer) >= _ENUM_BUFFER:
            self._blocks.append(fsum(self._buffer))
            self._buffer.clear()

    def total(self):
        return fsum(self._blocks + [fsum(self._buffer)])


def enum_exact(phi, x, n, est, p_pop, x_mean):
    """Exact per-estimator sums over every size-n subset.

    Returns (partials, count, err_code, err_rank, err_est); partials has
    shape (n_est, 2) holding sums of t and (t-P)^2.  Subsets are visited
    in lexicographic order; err_rank is the rank of the first subset on
    which an estimator left its domain.
    """
    n_pop = phi.shape[0]
    n_est = est.shape[0]
    phi_list = phi.tolist()
    x_list = x.tolist()
    evals = [_make_scalar_eval(est[e], x_mean) for e in range(n_est)]
    sums = [(_BufferedSum(), _BufferedSum()) for _ in range(n_est)]
    count = 0
    for combo in itertools.combinations(range(n_pop), n):
        a = 0
        xs = 0.0
        for i in combo:
            a += phi_list[i]
            xs += x_list[i]
        p = a / n
        x_bar = xs / n
        for e in range(n_est):
            t = evals[e](p, x_bar)
            if math.isnan(t):
                return np.zeros((n_est, 2)), count, ERR_DOMAIN, count, e
            d = t - p_pop
            sums[e][0].add(t)
            sums[e][1].add(d * d)
        count += 1
    partials = np.array([[s0.total(), s1.total()] for s0, s1 in sums])
    return partials, count, ERR_NONE, -1, -1


def enum_moments(phi, x, n, p_pop, x_mean):
    """Exact deviation/proportion moments over every size-n subset.

    Returns (sums, count) with sums = [e_p, e_x, e_p^2, e_x^2, e_p*e_x,
    p, (p-P)^2] summed over all subsets.  Requires p_pop > 0 and
    x_mean != 0 (validated by the caller).
    """
    n_pop = phi.shape[0]
    phi_list = phi.tolist()
    x_list = x.tolist()
    acc = [_BufferedSum() for _ in range(7)]
    count = 0
    for combo in itertools.combinations(range(n_pop), n):
        a = 0
        xs = 0.0
        for i in combo:
            a += phi_list[i]
            xs += x_list[i]
        p = a / n
        x_bar = xs / n
        e_p = (p - p_pop) / p_pop
        e_x = (x_bar - x_mean) / x_mean
        acc[0].add(e_p)
        acc[1].add(e_x)
        acc[2].add(e_p * e_p)
        acc[3].add(e_x * e_x)
        acc[4].add(e_p * e_x)
        acc[5].add(p)
        acc[6].add((p - p_pop) ** 2)
        count += 1
    return np.array([s.total() for s in acc]), count
