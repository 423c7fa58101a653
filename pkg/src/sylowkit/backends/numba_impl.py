"""numba @njit implementations of the hot kernels.

Signatures and results match :mod:`sylowkit.backends.numpy_impl` exactly;
the selection between the two happens in the package ``__init__``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def matmul_table(A, B, mul_t, add_t):
    N, a, k = A.shape
    b = B.shape[2]
    C = np.zeros((N, a, b), dtype=A.dtype)
    for r in range(N):
        for i in range(a):
            for j in range(b):
                acc = C[r, i, j]
                for kk in range(k):
                    acc = add_t[mul_t[A[r, i, kk], B[r, kk, j]], acc]
                C[r, i, j] = acc
    return C


@njit(cache=True)
def entrywise_table(A, B, op_t):
    N, k = A.shape
    C = np.empty_like(A)
    for r in range(N):
        for i in range(k):
            C[r, i] = op_t[A[r, i], B[r, i]]
    return C


@njit(cache=True)
def compose_perms(A, B):
    N, n = A.shape
    C = np.empty_like(A)
    for r in range(N):
        for i in range(n):
            C[r, i] = B[r, A[r, i]]
    return C


@njit(cache=True)
def pair_mul(an, ah, bn, bh, tab_n, tab_h, act):
    N = an.shape[0]
    cn = np.empty_like(an)
    ch = np.empty_like(ah)
    for r in range(N):
        cn[r] = tab_n[an[r], act[ah[r], bn[r]]]
        ch[r] = tab_h[ah[r], bh[r]]
    return cn, ch


@njit(cache=True)
def encode_base(W, weights):
    N, k = W.shape
    out = np.zeros(N, dtype=np.int64)
    for r in range(N):
        acc = np.int64(0)
        for i in range(k):
            acc += weights[i] * np.int64(W[r, i])
        out[r] = acc
    return out


@njit(cache=True)
def det_table(A, perms, signs, mul_t, add_t, neg_t):
    N, n, _ = A.shape
    K = perms.shape[0]
    out = np.zeros(N, dtype=A.dtype)
    for r in range(N):
        acc = out[r]
        for t in range(K):
            prod = A[r, 0, perms[t, 0]]
            for i in range(1, n):
                prod = mul_t[prod, A[r, i, perms[t, i]]]
            if signs[t] < 0:
                prod = neg_t[prod]
            acc = add_t[acc, prod]
        out[r] = acc
    return out
