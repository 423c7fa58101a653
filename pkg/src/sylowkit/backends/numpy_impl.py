"""Pure-numpy implementations of the hot kernels.

Every function here has a numba twin in :mod:`sylowkit.backends.numba_impl`
with the same signature and bit-identical results.  All arithmetic is
table-driven: a finite field (or a small group) is handled through its
operation tables, so the kernels only ever gather integers.
"""

import numpy as np


def matmul_table(A, B, mul_t, add_t):
    """Batch matrix product over a finite field.

    A: (N, a, k), B: (N, k, b) arrays of field codes; mul_t/add_t: (q, q)
    field tables.
    """
    N, a, k = A.shape
    b = B.shape[2]
    C = np.zeros((N, a, b), dtype=A.dtype)
    for kk in range(k):
        term = mul_t[A[:, :, kk][:, :, None], B[:, kk, :][:, None, :]]
        C = add_t[C, term]
    return C


def entrywise_table(A, B, op_t):
    """Componentwise table operation on (N, k) index arrays."""
    return op_t[A, B]


def compose_perms(A, B):
    """Compose permutation words: result(i) = B[A[i]] (apply A, then B)."""
    return np.take_along_axis(B, A.astype(np.int64), axis=1).astype(A.dtype)


def pair_mul(an, ah, bn, bh, tab_n, tab_h, act):
    """Semidirect-pair product (x, h)(x', h') = (x * act(h, x'), h h')."""
    cn = tab_n[an, act[ah, bn]]
    ch = tab_h[ah, bh]
    return cn, ch


def encode_base(W, weights):
    """Mixed-radix encoding of digit rows into int64 codes."""
    return W.astype(np.int64) @ weights


def det_table(A, perms, signs, mul_t, add_t, neg_t):
    """Batch determinant by permutation expansion.

    perms: (K, n) int8 permutations of range(n); signs: (K,) in {+1, -1}.
    """
    N, n, _ = A.shape
    out = np.zeros(N, dtype=A.dtype)
    for t in range(perms.shape[0]):
        prod = A[:, 0, perms[t, 0]]
        for i in range(1, n):
            prod = mul_t[prod, A[:, i, perms[t, i]]]
        if signs[t] < 0:
            prod = neg_t[prod]
        out = add_t[out, prod]
    return out
