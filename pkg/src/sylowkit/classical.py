"""Construction of the classical matrix groups over small finite fields.

Groups are built either by exhaustive filtering of all n x n matrices
(tiny cases) or by closure from standard generator sets (transvections,
reflections, a torus element), and the enumerated order is always checked
against the closed-form order polynomial.  Conventions:

* row vectors, x -> x g;
* symplectic form J = [[0, I], [-I, 0]] (g J g^T = J);
* Hermitian form H = identity pairing between the two half blocks, plus a
  central 1 in odd dimension (g H conj(g)^T = H);
* quadratic forms as upper-triangular matrices U with Q(x) = x U x^T,
  hyperbolic pairs plus, for minus type, an irreducible binary block
  x^2 + xy + c y^2; preservation means the upper normal form of g U g^T
  equals U (valid in every characteristic).
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import backends as bk
from .errors import BudgetExceeded, Inapplicable, InvalidConstruction, SylowkitError
from .ff import FiniteField, ff_from_size
from .groups import (
    DEFAULT_BUDGET,
    Group,
    MatrixMulRep,
    QuotientRep,
    SubgroupRep,
    central_quotient,
    close_group,
    derived_subgroup,
    group_from_elements,
    quotient_by_normal,
)

FAMILIES = ("GL", "SL", "PSL", "Sp", "PSp", "U", "SU", "PSU", "O", "SO", "Omega", "POmega")
_UNITARY = ("U", "SU", "PSU")
_ORTHOGONAL = ("O", "SO", "Omega", "POmega")
_FILTER_MAX = 1 << 21  # exhaustive-scan cap on q^(n^2)


@dataclass(frozen=True)
class ClassicalSpec:
    """A classical group instance: family, matrix dimension, entry field
    size (for the unitary family this is the quadratic extension p^{2r}),
    and the sign for even-dimensional orthogonal families."""

    family: str
    dim: int
    q: int
    sign: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise Inapplicable(f"unknown family {self.family!r}")
        if self.dim < 1:
            raise Inapplicable("dimension must be >= 1")
        f = ff_from_size(self.q)  # raises if not a prime power
        if self.family in ("Sp", "PSp") and self.dim % 2:
            raise Inapplicable("symplectic dimension must be even")
        if self.family in _UNITARY and f.r % 2:
            raise Inapplicable(
                "unitary groups need a quadratic-extension field (q = p^(2r))"
            )
        if self.family in _ORTHOGONAL:
            if self.dim % 2 == 0 and self.sign not in ("+", "-"):
                raise Inapplicable("even-dimensional orthogonal groups need a sign")
            if self.dim % 2 == 1 and self.sign:
                raise Inapplicable("odd-dimensional orthogonal groups take no sign")
            if self.family in ("Omega", "POmega") and self.dim % 2 and f.p == 2:
                raise Inapplicable(
                    "odd-dimensional Omega groups are only built for odd q"
                )
        elif self.sign:
            raise Inapplicable(f"family {self.family} takes no sign")

    @property
    def field(self) -> FiniteField:
        return ff_from_size(self.q)

    def __str__(self):
        return f"{self.family}{self.sign}({self.dim},{self.q})"


def _prod(vals) -> int:
    out = 1
    for v in vals:
        out *= v
    return out


def order_formula(spec: ClassicalSpec) -> int:
    """Closed-form group order; cross-checked against enumeration."""
    fam, n, q = spec.family, spec.dim, spec.q
    if fam in ("GL", "SL", "PSL"):
        gl = _prod(q**n - q**i for i in range(n))
        if fam == "GL":
            return gl
        sl = gl // (q - 1)
        return sl if fam == "SL" else sl // math.gcd(n, q - 1)
    if fam in ("Sp", "PSp"):
        m = n // 2
        sp = q ** (m * m) * _prod(q ** (2 * i) - 1 for i in range(1, m + 1))
        return sp if fam == "Sp" else sp // math.gcd(2, q - 1)
    if fam in _UNITARY:
        q0 = math.isqrt(q)
        gu = q0 ** (n * (n - 1) // 2) * _prod(q0**i - (-1) ** i for i in range(1, n + 1))
        if fam == "U":
            return gu
        su = gu // (q0 + 1)
        return su if fam == "SU" else su // math.gcd(n, q0 + 1)
    # orthogonal
    if n % 2:
        m = n // 2
        if q % 2 == 0:
            o = q ** (m * m) * _prod(q ** (2 * i) - 1 for i in range(1, m + 1))
            if fam in ("O", "SO"):
                return o
            raise Inapplicable("odd-dimensional Omega groups are only built for odd q")
        so = q ** (m * m) * _prod(q ** (2 * i) - 1 for i in range(1, m + 1))
        if fam == "O":
            return 2 * so
        if fam == "SO":
            return so
        return so // 2 if m >= 1 else 1  # Omega, POmega (centerless in odd dim)
    m = n // 2
    e = 1 if spec.sign == "+" else -1
    o = 2 * q ** (m * (m - 1)) * (q**m - e) * _prod(q ** (2 * i) - 1 for i in range(1, m - 1 + 1))
    if fam == "O":
        return o
    if q % 2 == 0:
        return o if fam == "SO" else o // 2  # Omega = POmega in char 2
    if fam == "SO":
        return o // 2
    om = o // 4
    if fam == "Omega":
        return om
    return o // (2 * math.gcd(4, q**m - e))  # POmega


# ---------------------------------------------------------------------------
# small exact matrix helpers over a field (plain python, tiny inputs)


def _fmat_id(f, n):
    M = np.zeros((n, n), dtype=f.add_t.dtype)
    np.fill_diagonal(M, 1)
    return M


def _fmat_mul(f, A, B):
    n = A.shape[0]
    C = np.zeros_like(A)
    for i in range(n):
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = int(f.add_t[acc, f.mul_t[A[i, k], B[k, j]]])
            C[i, j] = acc
    return C


def _fvec_mat(f, v, M):
    n = len(v)
    out = np.zeros(n, dtype=M.dtype)
    for j in range(n):
        acc = 0
        for i in range(n):
            acc = int(f.add_t[acc, f.mul_t[v[i], M[i, j]]])
        out[j] = acc
    return out


def _quad_value(f, v, U):
    w = _fvec_mat(f, v, U)
    acc = 0
    for i in range(len(v)):
        acc = int(f.add_t[acc, f.mul_t[v[i], w[i]]])
    return acc


def _upper_normal_batch(f, M):
    """Upper normal form of (N, n, n) matrices: N_ii = M_ii,
    N_ij = M_ij + M_ji for i < j, zero below the diagonal."""
    n = M.shape[1]
    out = np.zeros_like(M)
    iu, ju = np.triu_indices(n, 1)
    out[:, iu, ju] = f.add_t[M[:, iu, ju], M[:, ju, iu]]
    d = np.arange(n)
    out[:, d, d] = M[:, d, d]
    return out


def _irreducible_binary_coeff(f) -> int:
    """Smallest c such that t^2 + t + c has no root in the field."""
    for c in range(f.q):
        if all(
            int(f.add_t[f.add_t[f.mul_t[t, t], t], c]) != 0 for t in range(f.q)
        ):
            return c
    raise SylowkitError(f"no irreducible t^2 + t + c over {f}")


def standard_forms(spec: ClassicalSpec) -> dict:
    """The fixed form matrices (as field-code arrays) for the spec's family."""
    f = spec.field
    n = spec.dim
    dt = f.add_t.dtype
    if spec.family in ("Sp", "PSp"):
        m = n // 2
        J = np.zeros((n, n), dtype=dt)
        for i in range(m):
            J[i, m + i] = 1
            J[m + i, i] = f.neg_t[1]
        return {"kind": "symplectic", "matrix": J}
    if spec.family in _UNITARY:
        m = n // 2
        H = np.zeros((n, n), dtype=dt)
        for i in range(m):
            H[i, m + i] = 1
            H[m + i, i] = 1
        if n % 2:
            H[n - 1, n - 1] = 1
        return {"kind": "hermitian", "matrix": H}
    if spec.family in _ORTHOGONAL:
        m = n // 2
        U = np.zeros((n, n), dtype=dt)
        if n % 2:
            for i in range(m):
                U[i, m + i] = 1
            U[n - 1, n - 1] = 1
        elif spec.sign == "+":
            for i in range(m):
                U[i, m + i] = 1
        else:
            for i in range(m - 1):
                U[i, m + i] = 1
            c = _irreducible_binary_coeff(f)
            U[m - 1, m - 1] = 1
            U[m - 1, n - 1] = 1
            U[n - 1, n - 1] = c
        return {"kind": "quadratic", "matrix": U}
    return {"kind": "none", "matrix": None}


# ---------------------------------------------------------------------------
# batch form predicates


def _dets(f, W, n):
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    signs = np.array([_perm_sign_py(p) for p in perms], dtype=np.int8)
    return bk.det_table(
        np.ascontiguousarray(W).reshape(-1, n, n), perms, signs, f.mul_t, f.add_t, f.neg_t
    )


def _perm_sign_py(p):
    inv = sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])
    return 1 - 2 * (inv % 2)


def _preserves_form(f, W, n, form) -> np.ndarray:
    g = np.ascontiguousarray(W).reshape(-1, n, n)
    kind, F = form["kind"], form["matrix"]
    if kind == "none":
        return _dets(f, W, n) != 0
    Ft = np.repeat(F[None, :, :], len(g), axis=0)
    if kind == "symplectic":
        M = bk.matmul_table(bk.matmul_table(g, Ft, f.mul_t, f.add_t),
                            np.ascontiguousarray(g.swapaxes(1, 2)), f.mul_t, f.add_t)
        return np.all(M == F[None], axis=(1, 2))
    if kind == "hermitian":
        gc = f.conj_t[g]
        M = bk.matmul_table(bk.matmul_table(g, Ft, f.mul_t, f.add_t),
                            np.ascontiguousarray(gc.swapaxes(1, 2)), f.mul_t, f.add_t)
        return np.all(M == F[None], axis=(1, 2))
    if kind == "quadratic":
        M = bk.matmul_table(bk.matmul_table(g, Ft, f.mul_t, f.add_t),
                            np.ascontiguousarray(g.swapaxes(1, 2)), f.mul_t, f.add_t)
        return np.all(_upper_normal_batch(f, M) == _upper_normal_batch(f, F[None]), axis=(1, 2))
    raise SylowkitError(f"unknown form kind {kind}")


# ---------------------------------------------------------------------------
# generator sets


def _transvection_gens(f, n):
    gens = []
    alphas = [int(f.element([0] * k + [1]).code) for k in range(f.r)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for a in alphas:
                T = _fmat_id(f, n)
                T[i, j] = a
                gens.append(T)
    return gens


def _proj_vectors(f, n, max_support):
    """Projective vectors (first nonzero coordinate = 1), by support size,
    support position, then entry codes; deterministic order."""
    out = []
    for k in range(1, max_support + 1):
        for supp in itertools.combinations(range(n), k):
            for rest in itertools.product(range(1, f.q), repeat=k - 1):
                v = np.zeros(n, dtype=f.add_t.dtype)
                v[supp[0]] = 1
                for pos, val in zip(supp[1:], rest):
                    v[pos] = val
                out.append(v)
    return out


def _symplectic_transvections(f, n, J, vectors):
    gens = []
    alphas = [int(f.element([0] * k + [1]).code) for k in range(f.r)]
    for v in vectors:
        col = _fvec_mat(f, v, J.T)  # (J v^T)_a = sum_b J[a,b] v[b]
        for a in alphas:
            T = _fmat_id(f, n)
            for r in range(n):
                if col[r]:
                    for c in range(n):
                        if v[c]:
                            T[r, c] = int(
                                f.add_t[T[r, c], f.mul_t[a, f.mul_t[col[r], v[c]]]]
                            )
            gens.append(T)
    return gens


def _reflection_gens(f, n, U, vectors):
    B = np.zeros_like(U)
    for i in range(n):
        for j in range(n):
            B[i, j] = f.add_t[U[i, j], U[j, i]]
    gens = []
    for v in vectors:
        qv = _quad_value(f, v, U)
        if qv == 0:
            continue
        coef = int(f.inv_t[qv])
        col = _fvec_mat(f, v, B.T)
        R = _fmat_id(f, n)
        for r in range(n):
            if col[r]:
                for c in range(n):
                    if v[c]:
                        term = int(f.mul_t[coef, f.mul_t[col[r], v[c]]])
                        R[r, c] = int(f.add_t[R[r, c], f.neg_t[term]])
        gens.append(R)
    return gens


def _trace_zero_alphas(f):
    """F_p-basis of the trace-zero subspace {a : a + conj(a) = 0}."""
    basis: list[int] = []
    span = {0}
    for a in range(1, f.q):
        if int(f.add_t[a, f.conj_t[a]]) or a in span:
            continue
        basis.append(a)
        new = set()
        for s in span:
            x = s
            for _ in range(f.p):
                new.add(x)
                x = int(f.add_t[x, a])
        span = new
    return basis


def _unitary_transvections(f, n, H, vectors):
    alphas = _trace_zero_alphas(f)
    gens = []
    for v in vectors:
        vc = f.conj_t[v]
        col = _fvec_mat(f, vc, H.T)  # (H conj(v)^T)_a
        phi_vv = 0
        for a_i in range(n):
            phi_vv = int(f.add_t[phi_vv, f.mul_t[v[a_i], col[a_i]]])
        if phi_vv != 0:
            continue
        for a in alphas:
            T = _fmat_id(f, n)
            for r in range(n):
                if col[r]:
                    for c in range(n):
                        if v[c]:
                            T[r, c] = int(
                                f.add_t[T[r, c], f.mul_t[a, f.mul_t[col[r], v[c]]]]
                            )
            gens.append(T)
    return gens


def _unitary_torus(f, n):
    m = n // 2
    u = f.primitive
    ubar_inv = int(f.inv_t[f.conj_t[u]])
    T = _fmat_id(f, n)
    T[0, 0] = u
    T[m, m] = ubar_inv
    return T


# ---------------------------------------------------------------------------
# the builders


def _filter_build(spec, form, budget) -> Group:
    f, n = spec.field, spec.dim
    total = f.q ** (n * n)
    rep = MatrixMulRep(f, n)
    chunks = []
    chunk = 1 << 17
    weights = rep.weights
    for start in range(0, total, chunk):
        ar = np.arange(start, min(start + chunk, total), dtype=np.int64)
        W = ((ar[:, None] // weights[None, :]) % f.q).astype(rep.dtype)
        keep = _preserves_form(f, W, n, form)
        chunks.append(W[keep])
    words = np.concatenate(chunks)
    return group_from_elements(rep, words, name=str(spec), budget=budget)


def _closure_build(spec, form, gen_tiers, budget) -> Group:
    f, n = spec.field, spec.dim
    rep = MatrixMulRep(f, n)
    expected = order_formula(spec)
    gens: list[np.ndarray] = []
    seen: set[int] = set()
    last_err = None
    for tier in gen_tiers:
        for T in tier:
            code = int(rep.encode(T.reshape(1, -1))[0])
            if code not in seen:
                seen.add(code)
                gens.append(T)
        if not gens:
            continue
        gw = np.stack([g.reshape(-1) for g in gens])
        ok = _preserves_form(f, gw, n, form)
        if not np.all(ok):
            raise InvalidConstruction(f"{spec}: a generator does not preserve the form")
        g = close_group(rep, gw, budget=budget, name=str(spec), expected=expected)
        if len(g) == expected:
            return g
        last_err = f"{spec}: closed to {len(g)} elements, expected {expected}"
        if len(g) > expected:
            break
    raise InvalidConstruction(last_err or f"{spec}: no generators produced")


def _build_linear(spec, budget) -> Group:
    f, n = spec.field, spec.dim
    gens = _transvection_gens(f, n) if n > 1 else []
    if spec.family == "GL" and f.q > 2:
        D = _fmat_id(f, n)
        D[0, 0] = f.primitive
        gens = gens + [D]
    if not gens:  # GL_1(F_2), SL_1, ...
        rep = MatrixMulRep(f, n)
        return group_from_elements(rep, rep.identity_word()[None, :], name=str(spec))
    return _closure_build(spec, {"kind": "none", "matrix": None}, [gens], budget)


def _build_symplectic(spec, budget) -> Group:
    f, n = spec.field, spec.dim
    form = standard_forms(spec)
    J = form["matrix"]
    tiers = [
        _symplectic_transvections(f, n, J, _proj_vectors(f, n, min(2, n))),
        _symplectic_transvections(f, n, J, _proj_vectors(f, n, n)),
    ]
    return _closure_build(spec, form, tiers, budget)


def _build_unitary(spec, budget) -> Group:
    f, n = spec.field, spec.dim
    form = standard_forms(spec)
    if f.q ** (n * n) <= _FILTER_MAX:
        return _filter_build(spec, form, budget)
    H = form["matrix"]
    base = _unitary_transvections(f, n, H, _proj_vectors(f, n, min(2, n)))
    tiers = [
        base + [_unitary_torus(f, n)],
        _unitary_transvections(f, n, H, _proj_vectors(f, n, n)) + [_unitary_torus(f, n)],
    ]
    return _closure_build(spec, form, tiers, budget)


def _build_orthogonal(spec, budget) -> Group:
    f, n = spec.field, spec.dim
    form = standard_forms(spec)
    if f.q ** (n * n) <= _FILTER_MAX:
        return _filter_build(spec, form, budget)
    U = form["matrix"]
    tiers = [
        _reflection_gens(f, n, U, _proj_vectors(f, n, min(3, n))),
        _reflection_gens(f, n, U, _proj_vectors(f, n, n)),
    ]
    return _closure_build(spec, form, tiers, budget)


def _det_one_subgroup(g: Group, name) -> Group:
    f, n = g.spec.field, g.spec.dim
    d = _dets(f, g.words, n)
    return g.subgroup(np.nonzero(d == 1)[0], name=name)


def _dickson_parities(O: Group) -> np.ndarray:
    """rank(g - I) mod 2 for each element (the Dickson invariant in char 2)."""
    f = O.spec.field
    n = O.spec.dim
    M = O.words.reshape(len(O), n, n).copy()
    d = np.arange(n)
    M[:, d, d] = f.add_t[M[:, d, d], f.neg_t[1]]
    out = np.zeros(len(O), dtype=np.int64)
    for t in range(len(O)):
        A = [[int(x) for x in row] for row in M[t]]
        rank = 0
        rowi = 0
        for col in range(n):
            piv = next((r for r in range(rowi, n) if A[r][col]), None)
            if piv is None:
                continue
            A[rowi], A[piv] = A[piv], A[rowi]
            inv = int(f.inv_t[A[rowi][col]])
            for r in range(rowi + 1, n):
                if A[r][col]:
                    c = int(f.mul_t[A[r][col], inv])
                    for cc in range(col, n):
                        A[r][cc] = int(
                            f.add_t[A[r][cc], f.neg_t[f.mul_t[c, A[rowi][cc]]]]
                        )
            rank += 1
            rowi += 1
        out[t] = rank & 1
    return out


def omega_subgroup(O: Group) -> tuple[Group, int]:
    """The Omega subgroup of an orthogonal group, with the index [O : Omega].

    Odd q (and odd dimension): the derived subgroup.  Even q, even
    dimension: the kernel of the Dickson invariant rank(g - I) mod 2,
    which differs from the derived subgroup in the one exceptional desk
    case O+(4,2) where the derived subgroup has index 4.
    """
    spec = getattr(O, "spec", None)
    if spec is None or spec.family not in ("O", "SO"):
        raise Inapplicable("omega_subgroup expects a built orthogonal group")
    if spec.q % 2 == 1 or spec.dim % 2 == 1:
        der = derived_subgroup(O)
        om = O.subgroup(der.parent_indices(), name=f"Omega({spec.dim},{spec.q})")
    else:
        par = _dickson_parities(O)
        der = derived_subgroup(O)
        der_idx = der.parent_indices()
        if np.any(par[der_idx] != 0):
            raise InvalidConstruction("Dickson parity does not vanish on the derived subgroup")
        if len(der) * 2 == len(O):
            kernel = der_idx
        else:
            # parity must then descend to a homomorphism on O/O'
            quot = quotient_by_normal(O, der_idx, check_normal=False)
            canon = quot.rep.canon
            reps = quot.words[:, 0]
            for r in reps:
                coset = np.nonzero(canon == r)[0]
                if np.unique(par[coset]).size != 1:
                    raise InvalidConstruction("Dickson parity not constant on cosets")
            qpar = par[reps]
            tab = quot.cayley()
            if np.any((qpar[:, None] + qpar[None, :]) % 2 != qpar[tab]):
                raise InvalidConstruction("Dickson parity is not a homomorphism")
            kernel = np.nonzero(par == 0)[0]
        om = O.subgroup(kernel, name=f"Omega({spec.dim},{spec.q})")
    index = len(O) // len(om)
    om.spec = spec
    return om, index


def _central_quotient_of(g: Group, name) -> Group:
    return central_quotient(g, g.center_indices(), name=name)


@lru_cache(maxsize=None)
def _build_cached(spec: ClassicalSpec, budget: int) -> Group:
    expected = order_formula(spec)
    if expected > budget:
        raise BudgetExceeded(
            f"|{spec}| = {expected} exceeds the enumeration budget {budget}",
            partial=0,
        )
    fam = spec.family
    if fam in ("GL", "SL", "PSL"):
        base = ClassicalSpec("GL" if fam == "GL" else "SL", spec.dim, spec.q)
        g = _build_linear(base, budget)
        g.spec = base
        if fam == "PSL":
            g = _central_quotient_of(g, str(spec))
    elif fam in ("Sp", "PSp"):
        base = ClassicalSpec("Sp", spec.dim, spec.q)
        g = _build_symplectic(base, budget)
        g.spec = base
        if fam == "PSp":
            g = _central_quotient_of(g, str(spec))
    elif fam in _UNITARY:
        base = ClassicalSpec("U", spec.dim, spec.q)
        g = _build_unitary(base, budget)
        g.spec = base
        if fam in ("SU", "PSU"):
            g = _det_one_subgroup(g, f"SU({spec.dim},{spec.q})")
            g.spec = ClassicalSpec("SU", spec.dim, spec.q)
            if fam == "PSU":
                g = _central_quotient_of(g, str(spec))
    else:
        base = ClassicalSpec("O", spec.dim, spec.q, spec.sign)
        g = _build_orthogonal(base, budget)
        g.spec = base
        if fam == "SO":
            g = _det_one_subgroup(g, str(spec))
        elif fam in ("Omega", "POmega"):
            g, _ = omega_subgroup(g)
            g.spec = ClassicalSpec("Omega", spec.dim, spec.q, spec.sign)
            if fam == "POmega":
                g = _central_quotient_of(g, str(spec))
    if len(g) != expected:
        raise InvalidConstruction(
            f"{spec}: enumerated order {len(g)} != formula value {expected}"
        )
    g.name = str(spec)
    g.spec = spec
    g.form = standard_forms(spec)
    return g


def build(spec: ClassicalSpec, budget: int | None = None) -> Group:
    """Construct the group named by the spec, fully enumerated.

    The enumerated order must match order_formula exactly, and every
    element preserves the declared form (re-checkable via form_check).
    """
    return _build_cached(spec, DEFAULT_BUDGET if budget is None else budget)


def _carrier_words(g: Group) -> np.ndarray:
    """Matrix words of the elements (coset representatives for quotients)."""
    idx = np.arange(len(g), dtype=np.int64)
    cur = g
    while not isinstance(cur.rep, MatrixMulRep):
        if isinstance(cur.rep, (SubgroupRep, QuotientRep)):
            idx = cur.words[idx, 0]
            cur = cur.rep.parent
        else:
            raise Inapplicable("group has no matrix carrier")
    return cur.words[idx]


def form_check(g: Group) -> bool:
    """Exhaustively re-verify that every element preserves the stored form."""
    spec = g.spec
    words = _carrier_words(g)
    f = ff_from_size(spec.q)
    return bool(np.all(_preserves_form(f, words, spec.dim, g.form)))
