# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled round loop. Must stay arithmetic-for-arithmetic identical to _kernel_py."""

import numpy as np

from libc.math cimport exp, fabs, pow, isinf
from libc.stdint cimport int32_t, int64_t, uint8_t

BACKEND = "cython"


cdef inline double cell_value(
    const double[:, ::1] table, const double[::1] dest, const double[:, ::1] original,
    const uint8_t[:, ::1] on_target, bint blend, bint thresholded, bint discrete,
    double lo, double hi, const double[:, :, ::1] u_design, Py_ssize_t s,
    Py_ssize_t c, Py_ssize_t i, double w,
) noexcept nogil:
    cdef double x, o
    if blend:
        x = w * table[c, i] + (1.0 - w) * dest[i]
        if thresholded:
            o = original[c, i]
            if on_target[c, i]:
                if o < x:
                    x = o
            elif o > x:
                x = o
    else:
        x = table[c, i]
    if discrete:
        if u_design[s, c, i] < (x - lo) / (hi - lo):
            x = hi
        else:
            x = lo
    return x


def run_chunk(
    const double[:, ::1] table,
    const double[::1] dest,
    const double[:, ::1] original,
    const uint8_t[:, ::1] on_target,
    bint blend,
    bint thresholded,
    double exponent,
    bint discrete,
    double lo,
    double hi,
    const int64_t[::1] counts,
    const int64_t[::1] strides,
    const double[::1] gamma,
    const double[::1] beta,
    const double[::1] eta_lr,
    double[:, ::1] logw,
    double[:, ::1] cum_probs,
    double[:, ::1] cf_sums,
    double[::1] realized,
    int64_t[::1] profile_counts,
    double[::1] cum_cost,
    double cost_eta,
    double cost_p,
    int64_t t0,
    int64_t renorm_every,
    const double[:, ::1] u_play,
    const double[:, :, ::1] u_design,
    int32_t[:, ::1] out_actions,
    double[::1] out_cost,
    bint record_rows,
    double[:, :, ::1] out_rows,
):
    cdef Py_ssize_t n = u_play.shape[0]
    cdef Py_ssize_t m = counts.shape[0]
    cdef Py_ssize_t kmax = logw.shape[1]
    probs_arr = np.empty((m, kmax), dtype=np.float64)
    e_arr = np.empty(kmax, dtype=np.float64)
    acts_arr = np.empty(m, dtype=np.int64)
    cdef double[:, ::1] probs = probs_arr
    cdef double[::1] e = e_arr
    cdef int64_t[::1] acts = acts_arr
    cdef Py_ssize_t s, i, j, b, k, cell, cb, last
    cdef int64_t t
    cdef double w = 1.0, mx, tot, g, u, c, x, loss, gain, d, cost, bt, et
    cdef bint inf_norm = isinf(cost_p)

    with nogil:
        for s in range(n):
            t = t0 + s + 1
            if blend:
                w = pow(<double>t, exponent)
            cell = 0
            for i in range(m):
                k = counts[i]
                mx = logw[i, 0]
                for j in range(1, k):
                    if logw[i, j] > mx:
                        mx = logw[i, j]
                tot = 0.0
                for j in range(k):
                    e[j] = exp(logw[i, j] - mx)
                    tot += e[j]
                g = gamma[i]
                for j in range(k):
                    probs[i, j] = (1.0 - g) * e[j] / tot + g / k
                    cum_probs[i, j] += probs[i, j]
                u = u_play[s, i]
                c = 0.0
                last = k - 1
                acts[i] = last
                for j in range(last):
                    c += probs[i, j]
                    if u < c:
                        acts[i] = j
                        break
                out_actions[s, i] = <int32_t>acts[i]
                cell += acts[i] * strides[i]

            cost = 0.0
            for i in range(m):
                k = counts[i]
                for b in range(k):
                    cb = cell + (b - acts[i]) * strides[i]
                    x = cell_value(table, dest, original, on_target, blend, thresholded,
                                   discrete, lo, hi, u_design, s, cb, i, w)
                    cf_sums[i, b] += x
                    if record_rows:
                        out_rows[s, i, b] = x
                loss = cell_value(table, dest, original, on_target, blend, thresholded,
                                  discrete, lo, hi, u_design, s, cell, i, w)
                realized[i] += loss
                gain = (hi - loss) / (hi - lo)
                bt = beta[i]
                et = eta_lr[i]
                for j in range(k):
                    if j == acts[i]:
                        logw[i, j] += et * ((gain + bt) / probs[i, j])
                    else:
                        logw[i, j] += et * (bt / probs[i, j])
                if t % renorm_every == 0:
                    mx = logw[i, 0]
                    for j in range(1, k):
                        if logw[i, j] > mx:
                            mx = logw[i, j]
                    for j in range(k):
                        logw[i, j] -= mx
                d = fabs(original[cell, i] - loss)
                if inf_norm:
                    if d > cost:
                        cost = d
                elif cost_p == 1.0:
                    cost += d
                else:
                    cost += pow(d, cost_p)
            if not inf_norm and cost_p != 1.0:
                cost = pow(cost, 1.0 / cost_p)
            cost = cost_eta * cost
            out_cost[s] = cost
            cum_cost[0] += cost
            profile_counts[cell] += 1
