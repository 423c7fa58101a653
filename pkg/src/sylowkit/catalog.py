"""The catalog: one model constructor per verified Sylow-structure claim.

Each entry names a claim about Syl_p of a classical group, an
applicability predicate on the parameters, the ambient group to extract
ground truth from, and a constructor for the claimed model group.  The
matrix-shaped carrier groups (unitriangular, symmetric, antisymmetric,
conjugate-antisymmetric, and the twisted odd-unitary carrier) live here
as well.
"""

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from . import backends as bk
from .classical import ClassicalSpec
from .errors import BudgetExceeded, Inapplicable, InvalidConstruction
from .ff import FiniteField, arith_params, ff_from_size, ff_make, is_prime, v_l
from .groups import (
    DEFAULT_BUDGET,
    Action,
    Group,
    MatrixAddRep,
    MatrixMulRep,
    central_quotient,
    constrained_subgroup,
    cyclic,
    dihedral,
    direct_product,
    group_from_elements,
    mu_group,
    permuting_action,
    power_group,
    quaternion,
    semidirect_product,
    sylow_of_symmetric,
)

# ---------------------------------------------------------------------------
# matrix-shaped carrier groups


def _free_entry_words(field, positions, width, budget, fill):
    """Enumerate words with the given free positions over all field codes."""
    q = field.q
    total = q ** len(positions)
    if total > budget:
        raise BudgetExceeded(f"{total} elements over budget {budget}", partial=0)
    words = np.zeros((total, width), dtype=field.add_t.dtype)
    ar = np.arange(total, dtype=np.int64)
    for k, pos in enumerate(positions):
        words[:, pos] = (ar // q**k) % q
    fill(words)
    return words


def up_group(n: int, field: FiniteField, budget: int = DEFAULT_BUDGET) -> Group:
    """Unitriangular n x n matrices over the field, under multiplication."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rep = MatrixMulRep(field, n)
    positions = [i * n + j for i in range(n) for j in range(i + 1, n)]

    def fill(words):
        for i in range(n):
            words[:, i * n + i] = 1

    words = _free_entry_words(field, positions, n * n, budget, fill)
    gens = []
    alphas = [field.element([0] * k + [1]).code for k in range(field.r)]
    for pos in positions:
        for a in alphas:
            w = rep.identity_word().copy()
            w[pos] = a
            gens.append(w)
    g = group_from_elements(rep, words, name=f"Up_{n}(F_{field.q})",
                            gens_words=np.stack(gens) if gens else None, budget=budget)
    return g


def _additive_group(field, n_rows, n_cols, positions, fill, name, budget, gens_positions=None):
    rep = MatrixAddRep(field, n_rows, n_cols)
    words = _free_entry_words(field, positions, n_rows * n_cols, budget, fill)
    gens = None
    if positions:
        gens = []
        alphas = [field.element([0] * k + [1]).code for k in range(field.r)]
        for pos in positions:
            for a in alphas:
                w = np.zeros(n_rows * n_cols, dtype=rep.dtype)
                w[pos] = a
                gens.append(w)
        base = np.stack(gens)
        fill(base)
        # re-zero: fill only sets dependent entries from free ones
        gens = base
    return group_from_elements(rep, words, name=name, gens_words=gens, budget=budget)


def sym_matrices(n: int, field: FiniteField, budget: int = DEFAULT_BUDGET) -> Group:
    """Symmetric n x n matrices under addition."""
    positions = [i * n + j for i in range(n) for j in range(i, n)]

    def fill(words):
        for i in range(n):
            for j in range(i + 1, n):
                words[:, j * n + i] = words[:, i * n + j]

    return _additive_group(field, n, n, positions, fill, f"Sym({n},F_{field.q})", budget)


def antisym_matrices(m: int, field: FiniteField, budget: int = DEFAULT_BUDGET) -> Group:
    """Antisymmetric matrices (B^T = -B) under addition.  In characteristic
    2 this coincides with the symmetric matrices."""
    if field.p == 2:
        return sym_matrices(m, field, budget)
    positions = [i * m + j for i in range(m) for j in range(i + 1, m)]

    def fill(words):
        for i in range(m):
            for j in range(i + 1, m):
                words[:, j * m + i] = field.neg_t[words[:, i * m + j]]

    return _additive_group(field, m, m, positions, fill, f"Antisym({m},F_{field.q})", budget)


def antisym0_matrices(m: int, field: FiniteField, budget: int = DEFAULT_BUDGET) -> Group:
    """Symmetric matrices with zero diagonal, characteristic 2 only."""
    if field.p != 2:
        raise Inapplicable("zero-diagonal antisymmetric carrier is a char-2 object")
    positions = [i * m + j for i in range(m) for j in range(i + 1, m)]

    def fill(words):
        for i in range(m):
            for j in range(i + 1, m):
                words[:, j * m + i] = words[:, i * m + j]

    return _additive_group(field, m, m, positions, fill, f"Antisym0({m},F_{field.q})", budget)


def antisym_star_matrices(m: int, field: FiniteField, budget: int = DEFAULT_BUDGET) -> Group:
    """Conjugate-antisymmetric matrices B^T = -conj(B) over F_{p^{2r}}."""
    if field.conj_t is None:
        raise Inapplicable("conjugate-antisymmetric carrier needs an even-degree field")
    rep = MatrixAddRep(field, m, m)
    diag_vals = [a for a in range(field.q) if int(field.add_t[a, field.conj_t[a]]) == 0]
    upper = [(i, j) for i in range(m) for j in range(i + 1, m)]
    total = len(diag_vals) ** m * field.q ** len(upper)
    if total > budget:
        raise BudgetExceeded(f"{total} elements over budget {budget}", partial=0)
    words = np.zeros((total, m * m), dtype=rep.dtype)
    ar = np.arange(total, dtype=np.int64)
    base = 0
    dv = np.array(diag_vals, dtype=rep.dtype)
    for k in range(m):
        words[:, k * m + k] = dv[(ar // len(diag_vals) ** k) % len(diag_vals)]
    stride = len(diag_vals) ** m
    for k, (i, j) in enumerate(upper):
        vals = ((ar // (stride * field.q**k)) % field.q).astype(rep.dtype)
        words[:, i * m + j] = vals
        words[:, j * m + i] = field.neg_t[field.conj_t[vals]]
    return group_from_elements(rep, words, name=f"antisym*({m},F_{field.q})", budget=budget)


class SRep:
    """Carrier of the odd-dimensional unitary model: pairs (y, B) with
    B^T + conj(B) = -y^T conj(y), multiplied as
    (y, B)(y', B') = (y + y', B + B' - conj(y)^T y')."""

    def __init__(self, field: FiniteField, m: int):
        if field.conj_t is None:
            raise Inapplicable("the twisted carrier needs an even-degree field")
        self.field = field
        self.m = m
        self.width = m + m * m
        self.dtype = field.add_t.dtype
        self.weights = field.q ** np.arange(self.width, dtype=np.int64)

    def identity_word(self):
        return np.zeros(self.width, dtype=self.dtype)

    def mul(self, A, B):
        f, m = self.field, self.m
        ya, Ba = A[:, :m], A[:, m:].reshape(-1, m, m)
        yb, Bb = B[:, :m], B[:, m:].reshape(-1, m, m)
        yc = f.add_t[ya, yb]
        outer = f.mul_t[f.conj_t[ya][:, :, None], yb[:, None, :]]
        Bc = f.add_t[f.add_t[Ba, Bb], f.neg_t[outer]]
        return np.concatenate([yc, Bc.reshape(len(A), -1)], axis=1)

    def encode(self, A):
        return bk.encode_base(np.ascontiguousarray(A), self.weights)

    def el_str(self, word):
        f, m = self.field, self.m
        y = "(" + ",".join(f.code_str(int(c)) for c in word[:m]) + ")"
        rows = word[m:].reshape(m, m)
        b = "[" + ",".join("[" + ",".join(f.code_str(int(c)) for c in r) + "]" for r in rows) + "]"
        return f"({y};{b})"


def s_group(m: int, field: FiniteField, budget: int = DEFAULT_BUDGET) -> Group:
    """The twisted carrier S of the odd unitary model, built by exhaustive
    solve of the constraint; |S| = q^(m^2 + 2m) for q^2 = |field|."""
    rep = SRep(field, m)
    f = field
    total = f.q ** (m + m * m)
    if total > max(budget, 1 << 22):
        raise BudgetExceeded(f"solve space {total} too large", partial=0)
    ar = np.arange(total, dtype=np.int64)
    W = ((ar[:, None] // rep.weights[None, :]) % f.q).astype(rep.dtype)
    y = W[:, :m]
    B = W[:, m:].reshape(-1, m, m)
    lhs = f.add_t[B.swapaxes(1, 2), f.conj_t[B]]
    rhs = f.neg_t[f.mul_t[y[:, :, None], f.conj_t[y][:, None, :]]]
    keep = np.all(lhs == rhs, axis=(1, 2))
    words = W[keep]
    g = group_from_elements(rep, words, name=f"S({m},F_{f.q})", budget=budget)
    import math as _math
    expected = _math.isqrt(f.q) ** (m * m + 2 * m)
    if len(g) != expected:
        raise InvalidConstruction(
            f"S({m},F_{f.q}) has {len(g)} elements, expected {expected}"
        )
    # closure of the constraint set under the twisted product
    n = len(g)
    if n * n <= 1 << 22:
        ii = np.repeat(np.arange(n), n)
        jj = np.tile(np.arange(n), n)
    else:
        ii = np.repeat(np.arange(64), n)
        jj = np.tile(np.arange(n), 64)
    prods = rep.mul(g.words[ii], g.words[jj])
    if np.any(g.find_codes(rep.encode(prods)) < 0):
        raise InvalidConstruction("twisted carrier is not closed under its product")
    return g


# ---------------------------------------------------------------------------
# batch matrix action helpers


def _conj_transpose_tile(f, A, count):
    At = f.conj_t[A.T]
    return np.repeat(At[None, :, :], count, axis=0)


def _matrix_action_rule(f, n, conj_right: bool):
    """Action of a matrix A on matrix words by B -> A B A^T (or A B conj(A)^T)."""

    def rule(A, words):
        B = words.reshape(len(words), n, n)
        At = f.conj_t[A.T] if conj_right else A.T
        left = np.repeat(A[None, :, :], len(B), axis=0)
        right = np.repeat(At[None, :, :], len(B), axis=0)
        out = bk.matmul_table(bk.matmul_table(left, B, f.mul_t, f.add_t),
                              np.ascontiguousarray(right), f.mul_t, f.add_t)
        return out.reshape(len(words), -1)

    return rule


def _up_action_on_matrices(up: Group, target: Group, conj_right=False) -> Action:
    f = up.rep.field
    n = up.rep.n
    rule = _matrix_action_rule(f, n, conj_right)

    def word_rule(h, words):
        A = up.words[h].reshape(n, n)
        return rule(A, words)

    return Action.from_word_rule(up, target, word_rule)


# ---------------------------------------------------------------------------
# model constructors, one per claim


def model_psl_p(n: int, q: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Defining-characteristic model for PSL_n: the unitriangular group."""
    if n < 2:
        raise Inapplicable("need n >= 2")
    return up_group(n, ff_from_size(q), budget)


def _mu_wreath(f: FiniteField, l: int, s: int, n: int, budget: int) -> Group:
    """(mu_{l^s})^n with P_l(S_n) permuting coordinates."""
    mu = mu_group(f, l, s)
    P = sylow_of_symmetric(l, n, budget)
    N = power_group(mu, n, budget)
    act = permuting_action(P, N)
    return semidirect_product(N, P, act, budget,
                              name=f"mu_{l**s}^{n} : P_{l}(S_{n})")


def model_sl_l(n: int, q: int, l: int, allow_l2: bool = False,
               budget: int = DEFAULT_BUDGET) -> Group:
    """Cross-characteristic model for SL_n when l divides q - 1: the
    product-equals-sign subgroup of the mu wreath group."""
    f = ff_from_size(q)
    if q % l == 0:
        raise Inapplicable("l divides q")
    s = v_l(l, q - 1)
    if s < 1:
        raise Inapplicable(f"l = {l} does not divide q - 1 = {q - 1}")
    if l == 2 and not allow_l2:
        raise Inapplicable("the l = 2 regime is provisional: pass allow_l2=True")
    W = _mu_wreath(f, l, s, n, budget)
    return constrained_subgroup(W, name=f"SL-model(n={n},q={q},l={l})")


def model_psl_l(n: int, q: int, l: int, allow_l2: bool = False,
                budget: int = DEFAULT_BUDGET) -> Group:
    """As model_sl_l, then quotient by the diagonal scalars of n-th-root order."""
    C = model_sl_l(n, q, l, allow_l2, budget)
    W = C.rep.parent
    mu = W.rep.N.rep.base
    f = mu.scalar_field
    diag_w = []
    for i, code in enumerate(mu.scalar_codes.tolist()):
        if f.pow_code(int(code), n) == 1:
            diag_w.append(i)
    nh = len(W.rep.H)
    base_size = len(mu)
    kernel_w_idx = []
    for i in diag_w:
        npow_code = sum(i * base_size**c for c in range(W.rep.N.rep.k))
        npow_idx = int(W.rep.N.index_of_codes(np.array([npow_code]))[0])
        kernel_w_idx.append(npow_idx * nh)
    kern = C.find_codes(np.array(kernel_w_idx, dtype=np.int64))
    if np.any(kern < 0):
        raise InvalidConstruction("diagonal kernel escaped the constraint subgroup")
    return central_quotient(C, kern, name=f"PSL-model(n={n},q={q},l={l})")


def model_gl_l(n: int, q: int, l: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Cross-characteristic model for GL_n: root-of-unity wreath over the
    order parameters (d, s, n0)."""
    ap = arith_params(l, q, n)
    if ap.n0 == 0:
        return cyclic(1)
    base = ff_from_size(q)
    host = ff_make(base.p, base.r * ap.d)
    return _mu_wreath(host, l, ap.s, ap.n0, budget)


def model_psp_p(n: int, q: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Defining-characteristic model for PSp(2n): symmetric matrices
    extended by the unitriangular group acting as B -> A B A^T."""
    f = ff_from_size(q)
    N = sym_matrices(n, f, budget)
    H = up_group(n, f, budget)
    act = _up_action_on_matrices(H, N)
    return semidirect_product(N, H, act, budget, name=f"Sym({n},{q}) : Up_{n}({q})")


def model_psp_2(n: int, q: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Sylow 2-model for PSp(2n), odd q: quaternion power modulo the
    diagonal central involution, with coordinates permuted.

    The undetermined exponent is resolved as s = v_2(q^2 - 1), anchored by
    Syl_2(SL_2(q)) being generalized quaternion of that order.
    """
    if q % 2 == 0:
        raise Inapplicable("the quaternion model needs odd q")
    s = v_l(2, q * q - 1)
    Q = quaternion(2**s)
    Npow = power_group(Q, n, budget)
    w_central = 2 ** (s - 2)  # index of w^(2^(s-2)), the unique involution
    diag_code = sum(w_central * len(Q) ** c for c in range(n))
    diag_idx = int(Npow.index_of_codes(np.array([diag_code]))[0])
    quot = central_quotient(Npow, [diag_idx], name=f"Q_{2**s}^{n}/diag")
    P = sylow_of_symmetric(2, n, budget)
    act = permuting_action(P, Npow).induced_on_quotient(quot)
    return semidirect_product(quot, P, act, budget,
                              name=f"(Q_{2**s}^{n}/diag) : P_2(S_{n})")


def model_pomega_even_p(m: int, q: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Defining-characteristic model for POmega^eps(2m), odd q."""
    f = ff_from_size(q)
    if f.p == 2:
        raise Inapplicable("this model is for odd characteristic")
    N = antisym_matrices(m, f, budget)
    H = up_group(m, f, budget)
    act = _up_action_on_matrices(H, N)
    return semidirect_product(N, H, act, budget, name=f"Antisym({m},{q}) : Up_{m}({q})")


def model_omega_even_2(m: int, q: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Defining-characteristic model for Omega^eps(2m), q even."""
    f = ff_from_size(q)
    if f.p != 2:
        raise Inapplicable("this model is for characteristic 2")
    N = antisym0_matrices(m, f, budget)
    H = up_group(m, f, budget)
    act = _up_action_on_matrices(H, N)
    return semidirect_product(N, H, act, budget, name=f"Antisym0({m},{q}) : Up_{m}({q})")


class OddOrthCarrierRep:
    """Carrier of the odd-dimensional orthogonal model: pairs (b, B) with
    b a row vector and B antisymmetric, multiplied with the
    antisymmetrized-outer-product twist
    (b, B)(b', B') = (b + b', B + B' + (b'^T b - b^T b')).

    At m = 1 the twist vanishes and this is the plain product of the
    vector and antisymmetric parts."""

    def __init__(self, field: FiniteField, m: int):
        self.field = field
        self.m = m
        self.width = m + m * m
        self.dtype = field.add_t.dtype
        self.weights = field.q ** np.arange(self.width, dtype=np.int64)

    def identity_word(self):
        return np.zeros(self.width, dtype=self.dtype)

    def mul(self, A, B):
        f, m = self.field, self.m
        ba, Ba = A[:, :m], A[:, m:].reshape(-1, m, m)
        bb, Bb = B[:, :m], B[:, m:].reshape(-1, m, m)
        bc = f.add_t[ba, bb]
        tw = f.add_t[f.mul_t[bb[:, :, None], ba[:, None, :]],
                     f.neg_t[f.mul_t[ba[:, :, None], bb[:, None, :]]]]
        Bc = f.add_t[f.add_t[Ba, Bb], tw]
        return np.concatenate([bc, Bc.reshape(len(A), -1)], axis=1)

    def encode(self, A):
        return bk.encode_base(np.ascontiguousarray(A), self.weights)

    def el_str(self, word):
        f, m = self.field, self.m
        b = "(" + ",".join(f.code_str(int(c)) for c in word[:m]) + ")"
        rows = word[m:].reshape(m, m)
        mat = "[" + ",".join("[" + ",".join(f.code_str(int(c)) for c in r) + "]" for r in rows) + "]"
        return f"({b};{mat})"


def odd_orth_carrier(m: int, field: FiniteField, budget: int = DEFAULT_BUDGET) -> Group:
    """The twisted (vector, antisymmetric-matrix) carrier of order
    q^(m(m+1)/2)."""
    rep = OddOrthCarrierRep(field, m)
    q = field.q
    upper = [(i, j) for i in range(m) for j in range(i + 1, m)]
    total = q ** (m + len(upper))
    if total > budget:
        raise BudgetExceeded(f"{total} elements over budget {budget}", partial=0)
    words = np.zeros((total, m + m * m), dtype=rep.dtype)
    ar = np.arange(total, dtype=np.int64)
    for k in range(m):
        words[:, k] = (ar // q**k) % q
    for k, (i, j) in enumerate(upper):
        vals = ((ar // q ** (m + k)) % q).astype(rep.dtype)
        words[:, m + i * m + j] = vals
        words[:, m + j * m + i] = field.neg_t[vals]
    return group_from_elements(rep, words, name=f"V{m}.Antisym({m},F_{q})", budget=budget)


def model_omega_odd_p(m: int, q: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Defining-characteristic model for Omega(2m+1), odd q: the two-step
    carrier of row vectors and antisymmetric matrices, extended by the
    unitriangular group via A(b, B) = (b A^T, A B A^T)."""
    f = ff_from_size(q)
    if f.p == 2:
        raise Inapplicable("this model is for odd characteristic")
    N = odd_orth_carrier(m, f, budget)
    H = up_group(m, f, budget)
    mat_rule = _matrix_action_rule(f, m, conj_right=False)

    def rule(h, words):
        A = H.words[h].reshape(m, m)
        b = words[:, :m]
        right = np.repeat(A.T[None, :, :], len(words), axis=0)
        b2 = bk.matmul_table(b.reshape(len(words), 1, m),
                             np.ascontiguousarray(right), f.mul_t, f.add_t)
        B2 = mat_rule(A, words[:, m:])
        return np.concatenate([b2.reshape(len(words), -1), B2], axis=1)

    act = Action.from_word_rule(H, N, rule)
    return semidirect_product(N, H, act, budget,
                              name=f"(V.Antisym)({m},{q}) : Up_{m}({q})")


def _o2_wreath(s, mm, budget) -> Group:
    if mm == 0:
        return cyclic(1)
    D = dihedral(2 ** (s + 1))
    N = power_group(D, mm, budget)
    P = sylow_of_symmetric(2, mm, budget)
    return semidirect_product(N, P, permuting_action(P, N), budget,
                              name=f"D_{2**(s+1)}^{mm} : P_2(S_{mm})")


def model_o_even_2(m: int, q: int, eps: str, budget: int = DEFAULT_BUDGET) -> Group:
    """Sylow 2-model for O^eps(2m), odd q: dihedral wreath groups, with the
    Klein-four correction in the reflection-deficient branch.

    The dihedral size is resolved as 2^(s+1) with s = v_2(q^2 - 1) - 1,
    anchored by |O^+-(2,q)| = 2(q -+ 1) being dihedral.
    """
    if q % 2 == 0:
        raise Inapplicable("the dihedral model needs odd q")
    if eps not in ("+", "-"):
        raise Inapplicable("eps must be '+' or '-'")
    s = v_l(2, q * q - 1) - 1
    if eps == "+":
        full = (q % 4 == 1) or (q % 4 == 3 and m % 2 == 0)
    else:
        full = q % 4 == 3 and m % 2 == 1
    if full:
        return _o2_wreath(s, m, budget)
    c2 = cyclic(2)
    tail = _o2_wreath(s, m - 1, budget)
    return direct_product(direct_product(c2, c2, budget), tail, budget,
                          name=f"2^2 x (D-wreath over {m - 1})")


def model_o_odd_2(m: int, q: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Sylow 2-model for O(2m+1), odd q: a Z/2 factor times the selected
    even-dimensional dihedral model."""
    if q % 2 == 0:
        raise Inapplicable("odd-dimensional orthogonal groups are used with odd q")
    if q % 4 == 1 or m % 2 == 0:
        inner = model_o_even_2(m, q, "+", budget)
    else:
        inner = model_o_even_2(m, q, "-", budget)
    return direct_product(cyclic(2), inner, budget, name=f"2 x {inner.name}")


def model_u_even_p(m: int, p: int, r: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Defining-characteristic model for U(2m): conjugate-antisymmetric
    matrices extended by Up_m over the extension field, B -> A B conj(A)^T."""
    f = ff_make(p, 2 * r)
    N = antisym_star_matrices(m, f, budget)
    H = up_group(m, f, budget)
    act = _up_action_on_matrices(H, N, conj_right=True)
    return semidirect_product(N, H, act, budget,
                              name=f"antisym*({m},{p**(2*r)}) : Up_{m}")


def model_u_odd_p(m: int, p: int, r: int, budget: int = DEFAULT_BUDGET) -> Group:
    """Defining-characteristic model for U(2m+1): the twisted carrier S
    extended by Up_m, A(y, B) = (y conj(A)^T, A B conj(A)^T)."""
    f = ff_make(p, 2 * r)
    S = s_group(m, f, budget)
    H = up_group(m, f, budget)
    mat_rule = _matrix_action_rule(f, m, conj_right=True)

    def rule(h, words):
        A = H.words[h].reshape(m, m)
        y = words[:, :m]
        right = np.repeat(f.conj_t[A.T][None, :, :], len(words), axis=0)
        y2 = bk.matmul_table(y.reshape(len(words), 1, m),
                             np.ascontiguousarray(right), f.mul_t, f.add_t)
        B2 = mat_rule(A, words[:, m:])
        return np.concatenate([y2.reshape(len(words), -1), B2], axis=1)

    act = Action.from_word_rule(H, S, rule)
    return semidirect_product(S, H, act, budget, name=f"S({m}) : Up_{m}")


# ---------------------------------------------------------------------------
# cross-characteristic reductions (to a GL/SL/PSL/U target)


def reduce_psp_l(n: int, q: int, l: int) -> ClassicalSpec:
    """PSp(2n) reduces to GL_{2n} (d even) or GL_n (d odd)."""
    f = ff_from_size(q)
    if l == 2 or l == f.p:
        raise Inapplicable("reduction needs l distinct from 2 and the characteristic")
    d = arith_params(l, q, n).d
    return ClassicalSpec("GL", 2 * n if d % 2 == 0 else n, q)


def reduce_pomega_l(n_dim: int, q: int, l: int, eps: str = "") -> ClassicalSpec:
    """POmega^eps(n) reduces to a GL target by the parity table on
    (dim parity, d parity, n0 parity, eps)."""
    f = ff_from_size(q)
    if l == 2 or l == f.p:
        raise Inapplicable("reduction needs l distinct from 2 and the characteristic")
    ap = arith_params(l, q, n_dim)
    d, n0 = ap.d, ap.n0
    m = n_dim // 2
    if n_dim % 2 == 1:
        target = m if d % 2 == 1 else 2 * m
    else:
        if eps not in ("+", "-"):
            raise Inapplicable("even dimension needs a sign")
        if d % 2 == 1:
            target = m if eps == "+" else m - 1
        elif (n0 % 2 == 0 and eps == "+") or (n0 % 2 == 1 and eps == "-"):
            target = 2 * m
        else:
            target = 2 * m - 2
    if target < 1:
        target = 1
    return ClassicalSpec("GL", target, q)


def reduce_psu_l(n: int, q: int, l: int) -> ClassicalSpec:
    """PSU(n, q^2) reduces to PSL_n / SL_n over F_{q^2}, or stays unitary."""
    f = ff_from_size(q)
    if l == f.p:
        raise Inapplicable("reduction needs l != p")
    if (q + 1) % l == 0:
        fam = "PSL" if n % l == 0 else "SL"
        return ClassicalSpec(fam, n, q * q)
    return ClassicalSpec("U", n, q * q)


def reduce_u_l(n: int, q: int, l: int) -> ClassicalSpec:
    """U(n, q^2) reduces to GL_n(F_{q^2}) when d = 2 mod 4, else to
    GL_{floor(n/2)}(F_{q^2})."""
    f = ff_from_size(q)
    if l == f.p:
        raise Inapplicable("reduction needs l != p")
    d = arith_params(l, q, n).d
    target = n if d % 4 == 2 else n // 2
    if target < 1:
        target = 1
    return ClassicalSpec("GL", target, q * q)


# ---------------------------------------------------------------------------
# catalog entries


@dataclass(frozen=True)
class CatalogEntry:
    """A verifiable claim: applicability predicate, ambient group,
    model constructor, and notes on any resolved constants."""

    id: str
    claim: str
    param_names: tuple[str, ...]
    notes: str
    applicable: Callable[[dict, int], tuple[bool, str]]
    ambient: Callable[[dict, int], ClassicalSpec]
    model: Callable[[dict, int, int], Group]
    provisional: Callable[[dict, int], bool] = dc_field(default=lambda params, prime: False)

    def describe(self) -> dict:
        return {
            "id": self.id,
            "claim": self.claim,
            "params": list(self.param_names),
            "notes": self.notes,
        }


def _char_of(q: int) -> int:
    return ff_from_size(q).p


def _ok(cond: bool, why: str) -> tuple[bool, str]:
    return (True, "") if cond else (False, why)


def _entry_list() -> list[CatalogEntry]:
    entries = []

    entries.append(CatalogEntry(
        id="PSL-p",
        claim="Syl_p(PSL_n(F_q)) is the unitriangular group Up_n(F_q), p = char",
        param_names=("n", "q"),
        notes="",
        applicable=lambda pr, p: _ok(pr["n"] >= 2 and p == _char_of(pr["q"]),
                                     "needs n >= 2 and p = char(F_q)"),
        ambient=lambda pr, p: ClassicalSpec("PSL", pr["n"], pr["q"]),
        model=lambda pr, p, budget: model_psl_p(pr["n"], pr["q"], budget),
    ))

    def _psl_l_applicable(pr, l):
        q = pr["q"]
        if l == _char_of(q):
            return False, "needs l != char(F_q)"
        if (q - 1) % l:
            return False, "needs l | q - 1 (otherwise the root-of-unity part is empty)"
        return True, ""

    entries.append(CatalogEntry(
        id="PSL-l",
        claim="Syl_l(PSL_n(F_q)) is the product-equals-sign subgroup of the "
              "mu_{l^s} wreath group modulo diagonal n-th-root scalars, s = v_l(q-1)",
        param_names=("n", "q"),
        notes="restricted to odd l by default; the l = 2 regime is provisional "
              "and runs only under an explicit override",
        applicable=_psl_l_applicable,
        ambient=lambda pr, l: ClassicalSpec("PSL", pr["n"], pr["q"]),
        model=lambda pr, l, budget: model_psl_l(pr["n"], pr["q"], l, True, budget),
        provisional=lambda pr, l: l == 2,
    ))

    entries.append(CatalogEntry(
        id="SL-l",
        claim="Syl_l(SL_n(F_q)) is the product-equals-sign subgroup of the "
              "mu_{l^s} wreath group, s = v_l(q-1)",
        param_names=("n", "q"),
        notes="restricted to odd l by default; the l = 2 regime is provisional",
        applicable=_psl_l_applicable,
        ambient=lambda pr, l: ClassicalSpec("SL", pr["n"], pr["q"]),
        model=lambda pr, l, budget: model_sl_l(pr["n"], pr["q"], l, True, budget),
        provisional=lambda pr, l: l == 2,
    ))

    entries.append(CatalogEntry(
        id="GL-l",
        claim="Syl_l(GL_n(F_q)) is (mu_{l^s})^{n0} : P_l(S_{n0}) with "
              "d = ord_l(q), s = v_l(q^d - 1), n0 = floor(n/d)",
        param_names=("n", "q"),
        notes="",
        applicable=lambda pr, l: _ok(l != _char_of(pr["q"]), "needs l != char(F_q)"),
        ambient=lambda pr, l: ClassicalSpec("GL", pr["n"], pr["q"]),
        model=lambda pr, l, budget: model_gl_l(pr["n"], pr["q"], l, budget),
    ))

    entries.append(CatalogEntry(
        id="PSp-p",
        claim="Syl_p(PSp(2n, F_q)) is Sym(n,q) : Up_n(q) with A(B) = A B A^T, p = char",
        param_names=("n", "q"),
        notes="",
        applicable=lambda pr, p: _ok(p == _char_of(pr["q"]), "needs p = char(F_q)"),
        ambient=lambda pr, p: ClassicalSpec("PSp", 2 * pr["n"], pr["q"]),
        model=lambda pr, p, budget: model_psp_p(pr["n"], pr["q"], budget),
    ))

    entries.append(CatalogEntry(
        id="PSp-l-reduce",
        claim="Syl_l(PSp(2n, F_q)) matches Syl_l of GL_{2n} (d even) or GL_n (d odd)",
        param_names=("n", "q"),
        notes="",
        applicable=lambda pr, l: _ok(l not in (2, _char_of(pr["q"])),
                                     "needs l distinct from 2 and the characteristic"),
        ambient=lambda pr, l: ClassicalSpec("PSp", 2 * pr["n"], pr["q"]),
        model=lambda pr, l, budget: model_gl_l(
            reduce_psp_l(pr["n"], pr["q"], l).dim, pr["q"], l, budget),
    ))

    entries.append(CatalogEntry(
        id="PSp-2",
        claim="Syl_2(PSp(2n, F_q)), odd q, is (Q_{2^s})^n modulo the diagonal "
              "involution, with coordinates permuted by P_2(S_n)",
        param_names=("n", "q"),
        notes="s resolved as v_2(q^2 - 1), anchored by Syl_2(SL_2(q)) = Q_{2^s} "
              "and confirmed against the brute-force oracle at (n,q) = (1,3)",
        applicable=lambda pr, p: _ok(p == 2 and pr["q"] % 2 == 1, "needs p = 2 and odd q"),
        ambient=lambda pr, p: ClassicalSpec("PSp", 2 * pr["n"], pr["q"]),
        model=lambda pr, p, budget: model_psp_2(pr["n"], pr["q"], budget),
    ))

    entries.append(CatalogEntry(
        id="Omega-even-p",
        claim="Syl_p(POmega^eps(2m, F_q)), odd q = p^r, is Antisym(m,q) : Up_m(q)",
        param_names=("m", "q", "eps"),
        notes="the model does not depend on eps",
        applicable=lambda pr, p: _ok(
            p == _char_of(pr["q"]) and p != 2 and pr["m"] >= 1,
            "needs odd p = char(F_q)"),
        ambient=lambda pr, p: ClassicalSpec("POmega", 2 * pr["m"], pr["q"], pr.get("eps", "+")),
        model=lambda pr, p, budget: model_pomega_even_p(pr["m"], pr["q"], budget),
    ))

    entries.append(CatalogEntry(
        id="Omega-even-2",
        claim="Syl_2(Omega^eps(2m, F_q)), q = 2^r, is Antisym0(m,q) : Up_m(q)",
        param_names=("m", "q", "eps"),
        notes="the model does not depend on eps",
        applicable=lambda pr, p: _ok(p == 2 and pr["q"] % 2 == 0, "needs p = 2 = char(F_q)"),
        ambient=lambda pr, p: ClassicalSpec("Omega", 2 * pr["m"], pr["q"], pr.get("eps", "+")),
        model=lambda pr, p, budget: model_omega_even_2(pr["m"], pr["q"], budget),
    ))

    entries.append(CatalogEntry(
        id="Omega-odd-p",
        claim="Syl_p(Omega(2m+1, F_q)), odd q = p^r, is "
              "((F_q^+)^m x Antisym(m,q)) : Up_m(q)",
        param_names=("m", "q"),
        notes="",
        applicable=lambda pr, p: _ok(p == _char_of(pr["q"]) and p != 2,
                                     "needs odd p = char(F_q)"),
        ambient=lambda pr, p: ClassicalSpec("Omega", 2 * pr["m"] + 1, pr["q"]),
        model=lambda pr, p, budget: model_omega_odd_p(pr["m"], pr["q"], budget),
    ))

    def _omega_reduce_ambient(pr, l):
        dim = pr["n"]
        sign = pr.get("eps", "") if dim % 2 == 0 else ""
        return ClassicalSpec("POmega", dim, pr["q"], sign)

    entries.append(CatalogEntry(
        id="Omega-l-reduce",
        claim="Syl_l(POmega^eps(n, F_q)) matches Syl_l of a GL_k(F_q) chosen "
              "by the parity table on (n, d, n0, eps)",
        param_names=("n", "q", "eps"),
        notes="",
        applicable=lambda pr, l: _ok(l not in (2, _char_of(pr["q"])),
                                     "needs l distinct from 2 and the characteristic"),
        ambient=_omega_reduce_ambient,
        model=lambda pr, l, budget: model_gl_l(
            reduce_pomega_l(pr["n"], pr["q"], l, pr.get("eps", "")).dim,
            pr["q"], l, budget),
    ))

    entries.append(CatalogEntry(
        id="O-even-2",
        claim="Syl_2(O^eps(2m, F_q)), odd q, is a dihedral wreath group "
              "(D_{2^{s+1}})^m : P_2(S_m), or 2^2 x the (m-1)-fold variant",
        param_names=("m", "q", "eps"),
        notes="s resolved as v_2(q^2 - 1) - 1, anchored by |O^+-(2, q)| = 2(q -+ 1)",
        applicable=lambda pr, p: _ok(p == 2 and pr["q"] % 2 == 1, "needs p = 2 and odd q"),
        ambient=lambda pr, p: ClassicalSpec("O", 2 * pr["m"], pr["q"], pr["eps"]),
        model=lambda pr, p, budget: model_o_even_2(pr["m"], pr["q"], pr["eps"], budget),
    ))

    entries.append(CatalogEntry(
        id="O-odd-2",
        claim="Syl_2(O(2m+1, F_q)), odd q, is Z/2 x the selected even model",
        param_names=("m", "q"),
        notes="",
        applicable=lambda pr, p: _ok(p == 2 and pr["q"] % 2 == 1, "needs p = 2 and odd q"),
        ambient=lambda pr, p: ClassicalSpec("O", 2 * pr["m"] + 1, pr["q"]),
        model=lambda pr, p, budget: model_o_odd_2(pr["m"], pr["q"], budget),
    ))

    entries.append(CatalogEntry(
        id="U-even-p",
        claim="Syl_p(U(2m, F_{p^{2r}})) is antisym*(m) : Up_m over the "
              "extension field, with A(B) = A B conj(A)^T",
        param_names=("m", "p", "r"),
        notes="",
        applicable=lambda pr, p: _ok(p == pr["p"], "prime must equal the characteristic"),
        ambient=lambda pr, p: ClassicalSpec("U", 2 * pr["m"], pr["p"] ** (2 * pr["r"])),
        model=lambda pr, p, budget: model_u_even_p(pr["m"], pr["p"], pr["r"], budget),
    ))

    entries.append(CatalogEntry(
        id="U-odd-p",
        claim="Syl_p(U(2m+1, F_{p^{2r}})) is the twisted carrier S : Up_m, "
              "with A(y,B) = (y conj(A)^T, A B conj(A)^T)",
        param_names=("m", "p", "r"),
        notes="",
        applicable=lambda pr, p: _ok(p == pr["p"], "prime must equal the characteristic"),
        ambient=lambda pr, p: ClassicalSpec("U", 2 * pr["m"] + 1, pr["p"] ** (2 * pr["r"])),
        model=lambda pr, p, budget: model_u_odd_p(pr["m"], pr["p"], pr["r"], budget),
    ))

    def _psu_model(pr, l, budget):
        target = reduce_psu_l(pr["n"], pr["q"], l)
        if target.family == "PSL":
            return model_psl_l(target.dim, target.q, l, True, budget)
        if target.family == "SL":
            return model_sl_l(target.dim, target.q, l, True, budget)
        # identity reduction: the claim compares against Syl_l of U itself
        from .classical import build
        from .sylow import sylow as _sylow
        return _sylow(build(target, budget), l).subgroup

    entries.append(CatalogEntry(
        id="PSU-l-reduce",
        claim="Syl_l(PSU(n, F_{q^2})) matches Syl_l of PSL_n/SL_n over F_{q^2} "
              "(l | q+1, by l | n) or of U(n, F_{q^2}) itself",
        param_names=("n", "q"),
        notes="",
        applicable=lambda pr, l: _ok(l != _char_of(pr["q"]), "needs l != p"),
        ambient=lambda pr, l: ClassicalSpec("PSU", pr["n"], pr["q"] ** 2),
        model=_psu_model,
        provisional=lambda pr, l: l == 2 and (pr["q"] + 1) % l == 0,
    ))

    entries.append(CatalogEntry(
        id="U-l-reduce",
        claim="Syl_l(U(n, F_{q^2})) matches Syl_l of GL_n(F_{q^2}) when "
              "d = 2 mod 4, else GL_{floor(n/2)}(F_{q^2})",
        param_names=("n", "q"),
        notes="the GL model is re-parameterized over F_{q^2} with its own d, s, n0",
        applicable=lambda pr, l: _ok(l != _char_of(pr["q"]), "needs l != p"),
        ambient=lambda pr, l: ClassicalSpec("U", pr["n"], pr["q"] ** 2),
        model=lambda pr, l, budget: model_gl_l(
            reduce_u_l(pr["n"], pr["q"], l).dim, pr["q"] ** 2, l, budget),
    ))

    return entries


CATALOG: dict[str, CatalogEntry] = {e.id: e for e in _entry_list()}


def get_entry(entry_id: str) -> CatalogEntry:
    if entry_id not in CATALOG:
        raise Inapplicable(f"unknown catalog entry {entry_id!r}")
    return CATALOG[entry_id]


def list_catalog() -> list[dict]:
    return [CATALOG[k].describe() for k in CATALOG]
