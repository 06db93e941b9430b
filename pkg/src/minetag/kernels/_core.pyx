# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled implementations of the numeric hot kernels.

Mirrors ``minetag.kernels.pure`` function for function; see that module for
the semantics. The sequential recurrence and the CRF dynamic programs are
the training hot path, hence the C loops.
"""

import numpy as np

from libc.math cimport exp, log, tanh, INFINITY

BACKEND = "compiled"


def rnn_forward(double[:, ::1] pre, double[:, ::1] w_rec):
    cdef Py_ssize_t T = pre.shape[0]
    cdef Py_ssize_t H = pre.shape[1]
    h_arr = np.empty((T, H), dtype=np.float64)
    cdef double[:, ::1] h = h_arr
    cdef Py_ssize_t t, i, j
    cdef double acc
    for j in range(H):
        h[0, j] = tanh(pre[0, j])
    for t in range(1, T):
        for j in range(H):
            acc = pre[t, j]
            for i in range(H):
                acc += h[t - 1, i] * w_rec[i, j]
            h[t, j] = tanh(acc)
    return h_arr


def rnn_backward(double[:, ::1] h, double[:, ::1] w_rec, double[:, ::1] dh):
    cdef Py_ssize_t T = h.shape[0]
    cdef Py_ssize_t H = h.shape[1]
    dpre_arr = np.zeros((T, H), dtype=np.float64)
    dw_arr = np.zeros((H, H), dtype=np.float64)
    cdef double[:, ::1] dpre = dpre_arr
    cdef double[:, ::1] dw = dw_arr
    da_next_arr = np.zeros(H, dtype=np.float64)
    cdef double[::1] da_next = da_next_arr
    cdef Py_ssize_t t, i, j
    cdef double tot, da
    for t in range(T - 1, -1, -1):
        for j in range(H):
            tot = dh[t, j]
            for i in range(H):
                tot += da_next[i] * w_rec[j, i]
            da = tot * (1.0 - h[t, j] * h[t, j])
            dpre[t, j] = da
        if t > 0:
            for i in range(H):
                for j in range(H):
                    dw[i, j] += h[t - 1, i] * dpre[t, j]
        for j in range(H):
            da_next[j] = dpre[t, j]
    return dpre_arr, dw_arr


cdef double _lse(double[::1] v, Py_ssize_t n) noexcept:
    cdef double m = -INFINITY
    cdef double s = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        if v[i] > m:
            m = v[i]
    if m == -INFINITY:
        return -INFINITY
    for i in range(n):
        s += exp(v[i] - m)
    return m + log(s)


def crf_log_partition(double[:, ::1] emissions, double[:, ::1] trans,
                      double[::1] start, double[::1] stop):
    cdef Py_ssize_t T = emissions.shape[0]
    cdef Py_ssize_t K = emissions.shape[1]
    work = np.empty(K, dtype=np.float64)
    alpha_arr = np.empty(K, dtype=np.float64)
    nxt_arr = np.empty(K, dtype=np.float64)
    cdef double[::1] w = work
    cdef double[::1] alpha = alpha_arr
    cdef double[::1] nxt = nxt_arr
    cdef Py_ssize_t t, i, j
    for j in range(K):
        alpha[j] = start[j] + emissions[0, j]
    for t in range(1, T):
        for j in range(K):
            for i in range(K):
                w[i] = alpha[i] + trans[i, j]
            nxt[j] = _lse(w, K) + emissions[t, j]
        for j in range(K):
            alpha[j] = nxt[j]
    for j in range(K):
        w[j] = alpha[j] + stop[j]
    return _lse(w, K)


def crf_forward_backward(double[:, ::1] emissions, double[:, ::1] trans,
                         double[::1] start, double[::1] stop):
    cdef Py_ssize_t T = emissions.shape[0]
    cdef Py_ssize_t K = emissions.shape[1]
    alpha_arr = np.empty((T, K), dtype=np.float64)
    beta_arr = np.empty((T, K), dtype=np.float64)
    unary_arr = np.empty((T, K), dtype=np.float64)
    pair_arr = np.zeros((K, K), dtype=np.float64)
    work = np.empty(K, dtype=np.float64)
    cdef double[:, ::1] alpha = alpha_arr
    cdef double[:, ::1] beta = beta_arr
    cdef double[:, ::1] unary = unary_arr
    cdef double[:, ::1] pair = pair_arr
    cdef double[::1] w = work
    cdef Py_ssize_t t, i, j
    cdef double log_z, v
    for j in range(K):
        alpha[0, j] = start[j] + emissions[0, j]
    for t in range(1, T):
        for j in range(K):
            for i in range(K):
                w[i] = alpha[t - 1, i] + trans[i, j]
            alpha[t, j] = _lse(w, K) + emissions[t, j]
    for j in range(K):
        w[j] = alpha[T - 1, j] + stop[j]
    log_z = _lse(w, K)
    for j in range(K):
        beta[T - 1, j] = stop[j]
    for t in range(T - 2, -1, -1):
        for i in range(K):
            for j in range(K):
                w[j] = trans[i, j] + emissions[t + 1, j] + beta[t + 1, j]
            beta[t, i] = _lse(w, K)
    for t in range(T):
        for j in range(K):
            v = alpha[t, j] + beta[t, j] - log_z
            unary[t, j] = exp(v) if v > -INFINITY else 0.0
    for t in range(T - 1):
        for i in range(K):
            for j in range(K):
                v = (alpha[t, i] + trans[i, j] + emissions[t + 1, j]
                     + beta[t + 1, j] - log_z)
                if v > -INFINITY:
                    pair[i, j] += exp(v)
    p_start = unary_arr[0].copy()
    p_stop = unary_arr[T - 1].copy()
    return log_z, unary_arr, pair_arr, p_start, p_stop


def crf_viterbi(double[:, ::1] emissions, double[:, ::1] trans,
                double[::1] start, double[::1] stop):
    cdef Py_ssize_t T = emissions.shape[0]
    cdef Py_ssize_t K = emissions.shape[1]
    delta_arr = np.empty(K, dtype=np.float64)
    nxt_arr = np.empty(K, dtype=np.float64)
    back_arr = np.zeros((T, K), dtype=np.int64)
    path_arr = np.empty(T, dtype=np.int64)
    cdef double[::1] delta = delta_arr
    cdef double[::1] nxt = nxt_arr
    cdef long[:, ::1] back = back_arr
    cdef long[::1] path = path_arr
    cdef Py_ssize_t t, i, j, best_i
    cdef double best, s
    for j in range(K):
        delta[j] = start[j] + emissions[0, j]
    for t in range(1, T):
        for j in range(K):
            best = -INFINITY
            best_i = 0
            for i in range(K):
                s = delta[i] + trans[i, j]
                if s > best:
                    best = s
                    best_i = i
            back[t, j] = best_i
            nxt[j] = best + emissions[t, j]
        for j in range(K):
            delta[j] = nxt[j]
    best = -INFINITY
    best_i = 0
    for j in range(K):
        s = delta[j] + stop[j]
        if s > best:
            best = s
            best_i = j
    path[T - 1] = best_i
    for t in range(T - 1, 0, -1):
        path[t - 1] = back[t, path[t]]
    return path_arr
