"""Numpy implementations of the numeric hot kernels.

This is the fallback backend; ``minetag.kernels._core`` is the compiled
twin with identical signatures and semantics. Both operate on C-contiguous
float64 arrays. Scores may be -inf (forbidden transitions); they must never
be +inf or NaN.
"""

import numpy as np

BACKEND = "pure"

_NEG_INF = -np.inf


def rnn_forward(pre, w_rec):
    """Run a tanh recurrence over pre-computed input projections.

    h[t] = tanh(pre[t] + h[t-1] @ w_rec) with h[-1] = 0.

    pre: (T, H) input projection plus bias per step.
    w_rec: (H, H) recurrent weights.
    Returns h with shape (T, H).
    """
    T, H = pre.shape
    h = np.empty((T, H), dtype=np.float64)
    h[0] = np.tanh(pre[0])
    for t in range(1, T):
        h[t] = np.tanh(pre[t] + h[t - 1] @ w_rec)
    return h


def rnn_backward(h, w_rec, dh):
    """Backpropagate through :func:`rnn_forward`.

    h: (T, H) activations from the forward pass.
    dh: (T, H) loss gradient w.r.t. each h[t] (external contributions only).
    Returns (dpre, dw_rec): gradients w.r.t. the input projections and the
    recurrent weights.
    """
    T, H = h.shape
    dpre = np.zeros((T, H), dtype=np.float64)
    dw_rec = np.zeros((H, H), dtype=np.float64)
    da_next = np.zeros(H, dtype=np.float64)
    for t in range(T - 1, -1, -1):
        dh_total = dh[t] + da_next @ w_rec.T
        da = dh_total * (1.0 - h[t] * h[t])
        dpre[t] = da
        if t > 0:
            dw_rec += np.outer(h[t - 1], da)
        da_next = da
    return dpre, dw_rec


def _logsumexp(v):
    m = np.max(v)
    if m == _NEG_INF:
        return _NEG_INF
    return m + np.log(np.sum(np.exp(v - m)))


def crf_log_partition(emissions, trans, start, stop):
    """Log of the sum of exp(path score) over all label paths.

    emissions: (T, K); trans: (K, K) internal transitions; start/stop: (K,)
    entry and exit scores.
    """
    T, K = emissions.shape
    alpha = start + emissions[0]
    for t in range(1, T):
        scores = alpha[:, None] + trans
        m = scores.max(axis=0)
        safe = m > _NEG_INF
        nxt = np.full(K, _NEG_INF)
        if np.any(safe):
            nxt[safe] = m[safe] + np.log(
                np.sum(np.exp(scores[:, safe] - m[safe]), axis=0)
            )
        alpha = nxt + emissions[t]
    return _logsumexp(alpha + stop)


def crf_forward_backward(emissions, trans, start, stop):
    """Forward-backward pass returning logZ and expected feature counts.

    Returns (log_z, unary, pairwise, p_start, p_stop) where unary[t, j] is
    the posterior marginal of label j at position t, pairwise[i, j] the
    expected count of the i->j transition summed over positions, and
    p_start/p_stop the marginals at the boundary (gradients of log_z w.r.t.
    the start/stop scores).
    """
    T, K = emissions.shape
    alpha = np.empty((T, K), dtype=np.float64)
    beta = np.empty((T, K), dtype=np.float64)
    alpha[0] = start + emissions[0]
    for t in range(1, T):
        for j in range(K):
            alpha[t, j] = _logsumexp(alpha[t - 1] + trans[:, j]) + emissions[t, j]
    log_z = _logsumexp(alpha[T - 1] + stop)
    beta[T - 1] = stop
    for t in range(T - 2, -1, -1):
        nxt = emissions[t + 1] + beta[t + 1]
        for i in range(K):
            beta[t, i] = _logsumexp(trans[i] + nxt)
    unary = np.exp(alpha + beta - log_z)
    pairwise = np.zeros((K, K), dtype=np.float64)
    for t in range(T - 1):
        joint = (
            alpha[t][:, None]
            + trans
            + emissions[t + 1][None, :]
            + beta[t + 1][None, :]
            - log_z
        )
        pairwise += np.exp(joint)
    p_start = unary[0]
    p_stop = unary[T - 1]
    return log_z, unary, pairwise, p_start, p_stop


def crf_viterbi(emissions, trans, start, stop):
    """Best-scoring label path; ties resolved toward the lowest label index.

    Returns an int64 array of length T.
    """
    T, K = emissions.shape
    delta = start + emissions[0]
    back = np.zeros((T, K), dtype=np.int64)
    for t in range(1, T):
        scores = delta[:, None] + trans
        # argmax returns the first (lowest-index) maximizer, which is the
        # tie-break contract.
        back[t] = np.argmax(scores, axis=0)
        delta = scores[back[t], np.arange(K)] + emissions[t]
    final = delta + stop
    path = np.empty(T, dtype=np.int64)
    path[T - 1] = int(np.argmax(final))
    for t in range(T - 1, 0, -1):
        path[t - 1] = back[t, path[t]]
    return path
