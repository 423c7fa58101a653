"""Uniform finite-group machinery.

Every group is an enumerated list of elements.  An element is a row of a
numpy "word" array whose meaning depends on the representation:

* matrices over F_q under multiplication or addition (codes per entry),
* permutation image vectors,
* rows of a small explicit multiplication table,
* tuples of component indices (direct powers, semidirect pairs),
* parent indices (subgroups, quotients by canonical coset representative).

Words encode injectively into int64 codes, so membership, deduplication
and index lookup are sorted-array searches, and all products run through
the batch kernels in :mod:`sylowkit.backends`.  Enumeration order is
deterministic everywhere: BFS discovery order for closures, ascending
code or parent-index order for direct enumerations.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import backends as bk
from .errors import BudgetExceeded, Inapplicable, InvalidConstruction
from .ff import FiniteField, is_prime, v_l

DEFAULT_BUDGET = 1 << 21
CAYLEY_MAX = 4096


# ---------------------------------------------------------------------------
# representations


class MatrixMulRep:
    """n x n invertible matrices over a finite field, under multiplication."""

    def __init__(self, field: FiniteField, n: int):
        self.field = field
        self.n = n
        self.width = n * n
        self.dtype = field.add_t.dtype
        self.weights = field.q ** np.arange(self.width, dtype=np.int64)

    def identity_word(self):
        w = np.zeros(self.width, dtype=self.dtype)
        w[:: self.n + 1] = 1
        return w

    def mul(self, A, B):
        n = self.n
        C = bk.matmul_table(
            np.ascontiguousarray(A).reshape(-1, n, n),
            np.ascontiguousarray(B).reshape(-1, n, n),
            self.field.mul_t,
            self.field.add_t,
        )
        return C.reshape(-1, self.width)

    def encode(self, A):
        return bk.encode_base(np.ascontiguousarray(A), self.weights)

    def el_str(self, word):
        f = self.field
        rows = word.reshape(self.n, self.n)
        return "[" + ",".join("[" + ",".join(f.code_str(int(c)) for c in r) + "]" for r in rows) + "]"


class MatrixAddRep:
    """Matrices of a fixed shape over a finite field, under addition."""

    def __init__(self, field: FiniteField, rows: int, cols: int):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.width = rows * cols
        self.dtype = field.add_t.dtype
        self.weights = field.q ** np.arange(self.width, dtype=np.int64)

    def identity_word(self):
        return np.zeros(self.width, dtype=self.dtype)

    def mul(self, A, B):
        return bk.entrywise_table(
            np.ascontiguousarray(A), np.ascontiguousarray(B), self.field.add_t
        )

    def encode(self, A):
        return bk.encode_base(np.ascontiguousarray(A), self.weights)

    def el_str(self, word):
        f = self.field
        rows = word.reshape(self.rows, self.cols)
        return "[" + ",".join("[" + ",".join(f.code_str(int(c)) for c in r) + "]" for r in rows) + "]"


class PermRep:
    """Permutations of {0..n-1} as image vectors; x*y = apply x, then y."""

    def __init__(self, n: int):
        self.n = n
        self.width = n
        self.dtype = np.int8
        self.weights = n ** np.arange(n, dtype=np.int64) if n > 1 else np.ones(1, np.int64)

    def identity_word(self):
        return np.arange(self.n, dtype=self.dtype)

    def mul(self, A, B):
        return bk.compose_perms(np.ascontiguousarray(A), np.ascontiguousarray(B))

    def encode(self, A):
        return bk.encode_base(np.ascontiguousarray(A), self.weights)

    def el_str(self, word):
        return perm_cycles_str(word)


class TableRep:
    """A small group given by an explicit multiplication table on 0..m-1."""

    def __init__(self, table: np.ndarray, labels: list[str]):
        self.table = np.ascontiguousarray(table, dtype=np.int32)
        self.labels = labels
        self.width = 1
        self.dtype = np.int32

    def identity_word(self):
        return np.zeros(1, dtype=self.dtype)

    def mul(self, A, B):
        return self.table[A[:, 0], B[:, 0]][:, None]

    def encode(self, A):
        return A[:, 0].astype(np.int64)

    def el_str(self, word):
        return self.labels[int(word[0])]


class PowerRep:
    """k-fold direct power of a small base group (component index tuples)."""

    def __init__(self, base: "Group", k: int):
        base.ensure_cayley()
        self.base = base
        self.k = k
        self.width = k
        self.dtype = np.int32
        self.weights = len(base) ** np.arange(k, dtype=np.int64)

    def identity_word(self):
        return np.zeros(self.k, dtype=self.dtype)

    def mul(self, A, B):
        return bk.entrywise_table(
            np.ascontiguousarray(A), np.ascontiguousarray(B), self.base.cayley()
        )

    def encode(self, A):
        return bk.encode_base(np.ascontiguousarray(A), self.weights)

    def el_str(self, word):
        return "(" + ",".join(self.base.element_str(int(i)) for i in word) + ")"


class PairRep:
    """Pairs (x, h) with (x,h)(x',h') = (x * act(h, x'), h h').

    ``act`` is an index table (|H|, |N|); None means the trivial action,
    i.e. a plain direct product.
    """

    def __init__(self, N: "Group", H: "Group", act: np.ndarray | None):
        self.N = N
        self.H = H
        self.act = act
        self.width = 2
        self.dtype = np.int64

    def identity_word(self):
        return np.zeros(2, dtype=self.dtype)

    def mul(self, A, B):
        an, ah = A[:, 0], A[:, 1]
        bn, bh = B[:, 0], B[:, 1]
        if self.act is not None:
            bn = self.act[ah, bn]
        return np.stack([self.N.mul_idx(an, bn), self.H.mul_idx(ah, bh)], axis=1)

    def encode(self, A):
        return A[:, 0].astype(np.int64) * len(self.H) + A[:, 1]

    def el_str(self, word):
        return f"({self.N.element_str(int(word[0]))}; {self.H.element_str(int(word[1]))})"


class SubgroupRep:
    """Elements are indices into a parent group's enumeration."""

    def __init__(self, parent: "Group"):
        self.parent = parent
        self.width = 1
        self.dtype = np.int64

    def identity_word(self):
        return np.zeros(1, dtype=self.dtype)

    def mul(self, A, B):
        return self.parent.mul_idx(A[:, 0], B[:, 0])[:, None]

    def encode(self, A):
        return A[:, 0].astype(np.int64)

    def el_str(self, word):
        return self.parent.element_str(int(word[0]))


class QuotientRep:
    """Cosets of a normal subgroup, as canonical (minimal-index) parent
    representatives: rep(x) = canon[x]."""

    def __init__(self, parent: "Group", canon: np.ndarray):
        self.parent = parent
        self.canon = canon
        self.width = 1
        self.dtype = np.int64

    def identity_word(self):
        return np.array([self.canon[0]], dtype=self.dtype)

    def mul(self, A, B):
        return self.canon[self.parent.mul_idx(A[:, 0], B[:, 0])][:, None]

    def encode(self, A):
        return A[:, 0].astype(np.int64)

    def el_str(self, word):
        return "[" + self.parent.element_str(int(word[0])) + "]"


# ---------------------------------------------------------------------------
# the Group object


class Group:
    """An enumerated finite group over some representation.

    Immutable after construction.  Index 0 is always the identity.
    """

    def __init__(self, rep, words, name="G", gens_idx=None):
        self.rep = rep
        self.words = np.ascontiguousarray(words, dtype=rep.dtype)
        self.name = name
        self.codes = rep.encode(self.words)
        n = len(self.words)
        idc = int(rep.encode(rep.identity_word()[None, :])[0])
        if int(self.codes[0]) != idc:
            raise InvalidConstruction(f"{name}: element 0 is not the identity")
        self._sorter = np.argsort(self.codes, kind="stable").astype(np.int64)
        self._sorted = self.codes[self._sorter]
        if n > 1 and np.any(self._sorted[1:] == self._sorted[:-1]):
            raise InvalidConstruction(f"{name}: duplicate elements in enumeration")
        self._gens = None if gens_idx is None else [int(g) for g in gens_idx]
        self._cayley = None
        self._orders = None
        self._inv = None
        self._fingerprint = None

    # -- basics ------------------------------------------------------------

    def __len__(self):
        return len(self.words)

    def order(self) -> int:
        return len(self.words)

    def __repr__(self):
        return f"<Group {self.name} of order {len(self)}>"

    def element_str(self, i: int) -> str:
        return self.rep.el_str(self.words[int(i)])

    # -- index lookup --------------------------------------------------------

    def find_codes(self, codes):
        """Indices of the given codes, -1 where absent."""
        codes = np.asarray(codes, dtype=np.int64)
        pos = np.minimum(np.searchsorted(self._sorted, codes), len(self) - 1)
        return np.where(self._sorted[pos] == codes, self._sorter[pos], -1)

    def index_of_codes(self, codes):
        idx = self.find_codes(codes)
        if np.any(idx < 0):
            raise KeyError(f"{self.name}: element not in enumeration (not closed?)")
        return idx

    # -- multiplication ------------------------------------------------------

    def mul_idx(self, i, j):
        """Index-level product; accepts scalars or arrays (broadcast)."""
        if self._cayley is not None:
            out = self._cayley[i, j]
            return int(out) if np.ndim(out) == 0 else out.astype(np.int64)
        scalar = np.ndim(i) == 0 and np.ndim(j) == 0
        i, j = np.broadcast_arrays(np.atleast_1d(i), np.atleast_1d(j))
        wc = self.rep.mul(self.words[i], self.words[j])
        out = self.index_of_codes(self.rep.encode(wc))
        return int(out[0]) if scalar else out

    def conj_idx(self, x, g):
        """g^-1 x g (broadcasts)."""
        inv = self.inverses()
        return self.mul_idx(self.mul_idx(inv[g], x), g)

    def ensure_cayley(self):
        if self._cayley is None and len(self) <= CAYLEY_MAX:
            self.cayley()
        return self._cayley is not None

    def cayley(self):
        if self._cayley is None:
            n = len(self)
            if n > CAYLEY_MAX:
                raise BudgetExceeded(
                    f"{self.name}: order {n} exceeds the Cayley-table cap {CAYLEY_MAX}",
                    partial=n,
                )
            ar = np.arange(n, dtype=np.int64)
            rows = []
            for i in range(n):
                wc = self.rep.mul(self.words[np.full(n, i)], self.words[ar])
                rows.append(self.index_of_codes(self.rep.encode(wc)))
            self._cayley = np.ascontiguousarray(np.stack(rows), dtype=np.int32)
        return self._cayley

    # -- element orders and inverses ------------------------------------------

    def orders(self):
        if self._orders is None:
            n = len(self)
            out = np.zeros(n, dtype=np.int64)
            alive = np.arange(n)
            cur = self.words.copy()
            idc = int(self.codes[0])
            k = 1
            while alive.size:
                if k > n + 1:
                    raise InvalidConstruction(f"{self.name}: order loop ran away")
                done = self.rep.encode(cur) == idc
                out[alive[done]] = k
                alive = alive[~done]
                cur = cur[~done]
                if alive.size:
                    cur = self.rep.mul(cur, self.words[alive])
                k += 1
            self._orders = out
        return self._orders

    def inverses(self):
        if self._inv is None:
            e = self.orders() - 1
            n = len(self)
            res = np.repeat(self.rep.identity_word()[None, :], n, axis=0)
            base = self.words.copy()
            bit = 0
            maxe = int(e.max()) if n else 0
            while (1 << bit) <= maxe:
                mask = ((e >> bit) & 1) == 1
                if mask.any():
                    res[mask] = self.rep.mul(res[mask], base[mask])
                bit += 1
                if (1 << bit) <= maxe:
                    base = self.rep.mul(base, base)
            self._inv = self.index_of_codes(self.rep.encode(res))
        return self._inv

    def element_order(self, i: int) -> int:
        return int(self.orders()[int(i)])

    # -- generators ------------------------------------------------------------

    @property
    def gens(self) -> list[int]:
        """A generating set (indices).  Provided by the construction when
        natural, otherwise the greedy enumeration-order set."""
        if self._gens is None:
            self._gens = self._greedy_generators()
        return self._gens

    def _greedy_generators(self) -> list[int]:
        n = len(self)
        clo = IndexClosure(self)
        known = np.zeros(n, dtype=bool)
        known[0] = True
        while not known.all():
            clo.add_gen(int(np.argmin(known)))
            known[:] = False
            known[clo.closed] = True
        return clo.gens

    # -- subgroup machinery -----------------------------------------------------

    def subgroup_closure(self, gen_idx) -> np.ndarray:
        """Ascending indices of the subgroup generated by the given elements."""
        clo = IndexClosure(self)
        for g in gen_idx:
            clo.add_gen(int(g))
        return clo.closed

    def subgroup(self, indices, name=None) -> "Group":
        indices = np.unique(np.asarray(indices, dtype=np.int64))
        if indices.size == 0 or indices[0] != 0:
            raise InvalidConstruction("subgroup must contain the identity (index 0)")
        return Group(
            SubgroupRep(self),
            indices[:, None],
            name=name or f"subgroup of {self.name}",
        )

    def center_indices(self) -> np.ndarray:
        n = len(self)
        ar = np.arange(n, dtype=np.int64)
        mask = np.ones(n, dtype=bool)
        for g in self.gens:
            mask &= self.mul_idx(ar, g) == self.mul_idx(g, ar)
        return ar[mask]

    def parent_indices(self) -> np.ndarray:
        """For subgroup/quotient groups: the parent indices of the elements."""
        if not isinstance(self.rep, (SubgroupRep, QuotientRep)):
            raise TypeError("group has no parent")
        return self.words[:, 0].astype(np.int64)


class IndexClosure:
    """Incrementally grown subgroup of an enumerated group, as index sets.

    ``add_gen`` absorbs one element: if it is already inside nothing
    happens, otherwise a BFS over the current generator list extends the
    closed set.  Total work stays near |subgroup| * #absorbed-generators.
    """

    def __init__(self, G: Group):
        self.G = G
        self.closed = np.zeros(1, dtype=np.int64)
        self.gens: list[int] = []

    def contains(self, i: int) -> bool:
        pos = np.searchsorted(self.closed, i)
        return pos < self.closed.size and self.closed[pos] == i

    def add_gen(self, g: int) -> bool:
        g = int(g)
        if self.contains(g):
            return False
        self.gens.append(g)
        frontier = np.setdiff1d(self.G.mul_idx(self.closed, g), self.closed)
        self.closed = np.union1d(self.closed, frontier)
        while frontier.size:
            cand = np.unique(
                np.concatenate([self.G.mul_idx(frontier, x) for x in self.gens])
            )
            new = np.setdiff1d(cand, self.closed, assume_unique=False)
            self.closed = np.union1d(self.closed, new)
            frontier = new
        return True


# ---------------------------------------------------------------------------
# construction: closure and direct enumeration

_CLOSURE_CHUNK = 1 << 19


def close_group(rep, gen_words, budget=DEFAULT_BUDGET, name="G", expected=None) -> Group:
    """BFS closure of a generating set; deterministic discovery order.

    ``expected``, when given, is a known upper bound equal to the target
    order: the scan stops as soon as that many elements are found (the
    remaining products can only repeat known elements).
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    gen_words = np.ascontiguousarray(gen_words, dtype=rep.dtype)
    idw = rep.identity_word()[None, :]
    idc = int(rep.encode(idw)[0])
    gcodes = rep.encode(gen_words)
    keep, seen = [], {idc}
    for i, c in enumerate(gcodes.tolist()):
        if c not in seen:
            seen.add(c)
            keep.append(i)
    frontier = gen_words[keep]
    gen_list = [frontier[i] for i in range(len(frontier))]
    all_words = [idw, frontier] if len(frontier) else [idw]
    known = np.sort(rep.encode(np.concatenate(all_words)))
    total = known.size
    done = expected is not None and total >= expected
    while frontier.size and not done:
        new_words_level = []
        block = max(1, _CLOSURE_CHUNK // max(1, len(frontier)))
        for s in range(0, len(gen_list), block):
            parts = [
                rep.mul(frontier, np.repeat(g[None, :], len(frontier), axis=0))
                for g in gen_list[s : s + block]
            ]
            cand = np.concatenate(parts)
            codes = rep.encode(cand)
            _, first = np.unique(codes, return_index=True)
            order_keep = np.sort(first)
            cand, codes = cand[order_keep], codes[order_keep]
            pos = np.minimum(np.searchsorted(known, codes), known.size - 1)
            fresh = known[pos] != codes
            if fresh.any():
                cand = cand[fresh]
                total += len(cand)
                if total > budget:
                    raise BudgetExceeded(
                        f"{name}: closure exceeded budget {budget} "
                        f"(at least {total} elements)",
                        partial=total,
                    )
                new_words_level.append(cand)
                known = np.union1d(known, codes[fresh])
                if expected is not None and total >= expected:
                    done = True
                    break
        if not new_words_level:
            break
        frontier = np.concatenate(new_words_level)
        all_words.append(frontier)
    words = np.concatenate(all_words)
    g = Group(rep, words, name=name)
    gens_idx = g.index_of_codes(gcodes) if len(gcodes) else np.empty(0, np.int64)
    seen2: list[int] = []
    for i in gens_idx.tolist():
        if i != 0 and i not in seen2:
            seen2.append(i)
    g._gens = seen2
    return g


def group_from_elements(rep, words, name="G", gens_words=None, budget=DEFAULT_BUDGET) -> Group:
    """Group from a complete element list: identity first, then ascending code."""
    words = np.ascontiguousarray(words, dtype=rep.dtype)
    if len(words) > budget:
        raise BudgetExceeded(
            f"{name}: {len(words)} elements exceed budget {budget}", partial=len(words)
        )
    codes = rep.encode(words)
    idc = int(rep.encode(rep.identity_word()[None, :])[0])
    order = np.argsort(codes, kind="stable")
    sorted_codes = codes[order]
    hit = np.searchsorted(sorted_codes, idc)
    if hit >= len(words) or sorted_codes[hit] != idc:
        raise InvalidConstruction(f"{name}: identity missing from element list")
    order = np.concatenate(([order[hit]], np.delete(order, hit)))
    g = Group(rep, words[order], name=name)
    if gens_words is not None and len(gens_words):
        gcodes = rep.encode(np.ascontiguousarray(gens_words, dtype=rep.dtype))
        g._gens = [int(i) for i in g.index_of_codes(gcodes)]
    return g


# ---------------------------------------------------------------------------
# permutations


def perm_signs(words: np.ndarray) -> np.ndarray:
    """Parity (+1/-1) of each permutation row."""
    words = np.atleast_2d(words)
    n = words.shape[1]
    inv = np.zeros(len(words), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            inv += words[:, i] > words[:, j]
    return (1 - 2 * (inv & 1)).astype(np.int64)


def perm_cycles_str(word) -> str:
    n = len(word)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start] or word[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = int(word[start])
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = int(word[nxt])
        out.append("(" + " ".join(str(p + 1) for p in cyc) + ")")
    return "".join(out) if out else "()"


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n}, stored as a 0-based image tuple."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise InvalidConstruction("images are not a bijection")

    @property
    def sign(self) -> int:
        return int(perm_signs(np.array([self.images], dtype=np.int8))[0])

    def __str__(self):
        return perm_cycles_str(np.array(self.images))


def sign(t) -> int:
    """Parity homomorphism; accepts a Permutation or an image sequence."""
    if isinstance(t, Permutation):
        return t.sign
    return int(perm_signs(np.array([list(t)], dtype=np.int8))[0])


def symmetric(n: int, budget: int = DEFAULT_BUDGET) -> Group:
    if n < 1:
        raise ValueError("n must be >= 1")
    size = math.factorial(n)
    if size > budget:
        raise BudgetExceeded(f"S_{n} has {size} elements, over budget {budget}", partial=0)
    words = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    gens = []
    if n >= 2:
        t = list(range(n))
        t[0], t[1] = t[1], t[0]
        gens.append(t)
        gens.append(list(range(1, n)) + [0])
    return group_from_elements(
        PermRep(n), words, name=f"S_{n}",
        gens_words=np.array(gens, dtype=np.int8) if gens else None,
        budget=budget,
    )


def legendre_exponent(l: int, n: int) -> int:
    """Exponent of the l-part of n! (sum of floor(n / l^j))."""
    out, pw = 0, l
    while pw <= n:
        out += n // pw
        pw *= l
    return out


def sylow_of_symmetric(l: int, n: int, budget: int = DEFAULT_BUDGET) -> Group:
    """The block-permuting Sylow l-subgroup P_l(S_n).

    Generators: for each level j and each group i of l consecutive blocks of
    size l^(j-1), the permutation cycling those l blocks.
    """
    if not is_prime(l):
        raise ValueError(f"l = {l} is not prime")
    if n < 1:
        raise ValueError("n must be >= 1")
    gens = []
    j = 1
    while l**j <= n:
        bs = l ** (j - 1)
        for i in range(n // l**j):
            base = i * l**j
            w = np.arange(n, dtype=np.int8)
            for t in range(l):
                for o in range(bs):
                    w[base + t * bs + o] = base + ((t + 1) % l) * bs + o
            gens.append(w)
        j += 1
    rep = PermRep(n)
    if not gens:
        return group_from_elements(rep, rep.identity_word()[None, :], name=f"P_{l}(S_{n})")
    g = close_group(rep, np.array(gens, dtype=np.int8), budget=budget, name=f"P_{l}(S_{n})")
    expected = l ** legendre_exponent(l, n)
    if len(g) != expected:
        raise InvalidConstruction(
            f"P_{l}(S_{n}) closed to {len(g)} elements, expected {expected}"
        )
    return g


# ---------------------------------------------------------------------------
# small standard groups (explicit tables)


def _table_group(table, labels, name, gens=None) -> Group:
    rep = TableRep(np.asarray(table), labels)
    m = len(labels)
    words = np.arange(m, dtype=np.int32)[:, None]
    g = Group(rep, words, name=name, gens_idx=gens)
    g.ensure_cayley()
    return g


def cyclic(n: int) -> Group:
    if n < 1:
        raise ValueError("n must be >= 1")
    i = np.arange(n)
    table = (i[:, None] + i[None, :]) % n
    return _table_group(table, [str(k) for k in range(n)], f"C_{n}",
                        gens=[1] if n > 1 else None)


def dihedral(two_n: int) -> Group:
    """Dihedral group of order two_n = 2n: rotations x^k and flips x^k y."""
    if two_n < 4 or two_n % 2:
        raise ValueError("dihedral order must be an even number >= 4")
    n = two_n // 2
    idx = lambda k, s: s * n + k
    table = np.zeros((two_n, two_n), dtype=np.int32)
    for k in range(n):
        for s in range(2):
            for k2 in range(n):
                for s2 in range(2):
                    kk = (k + (n - k2 if s else k2)) % n
                    table[idx(k, s), idx(k2, s2)] = idx(kk, s ^ s2)
    labels = [f"x^{k}" if not s else f"x^{k}y" for s in range(2) for k in range(n)]
    g = _table_group(table, labels, f"D_{two_n}", gens=[1, n])
    x, y = 1, idx(0, 1)
    assert g.element_order(x) == n and g.element_order(y) == 2
    assert g.mul_idx(g.mul_idx(y, x), y) == int(g.inverses()[x])
    return g


def quaternion(four_n: int) -> Group:
    """Generalized quaternion group of order four_n = 4n:
    w^n = v^2, w^(2n) = 1, v w v^-1 = w^-1."""
    if four_n < 8 or four_n % 4:
        raise ValueError("quaternion order must be a multiple of 4, >= 8")
    n = four_n // 4
    two_n = 2 * n
    idx = lambda a, b: b * two_n + a
    table = np.zeros((four_n, four_n), dtype=np.int32)
    for a in range(two_n):
        for b in range(2):
            for a2 in range(two_n):
                for b2 in range(2):
                    if b == 0:
                        aa, bb = (a + a2) % two_n, b2
                    elif b2 == 0:
                        aa, bb = (a - a2) % two_n, 1
                    else:
                        aa, bb = (a - a2 + n) % two_n, 0
                    table[idx(a, b), idx(a2, b2)] = idx(aa, bb)
    labels = [f"w^{a}" if not b else f"w^{a}v" for b in range(2) for a in range(two_n)]
    g = _table_group(table, labels, f"Q_{four_n}", gens=[1, two_n])
    w, v = 1, idx(0, 1)
    assert table[v, v] == idx(n % two_n, 0)  # v^2 = w^n
    assert g.element_order(w) == two_n
    assert g.mul_idx(g.mul_idx(v, w), int(g.inverses()[v])) == int(g.inverses()[w])
    return g


def mu_group(f: FiniteField, l: int, s: int) -> Group:
    """The group of l^s-th roots of unity inside F^*, under multiplication."""
    if not is_prime(l):
        raise ValueError(f"l = {l} is not prime")
    m = l**s
    if (f.q - 1) % m:
        raise Inapplicable(f"{m}-th roots of unity absent from {f} (|F^*| = {f.q - 1})")
    codes = [c for c in range(1, f.q) if f.pow_code(c, m) == 1]
    if len(codes) != m:
        raise InvalidConstruction(f"found {len(codes)} solutions of x^{m} = 1, expected {m}")
    codes.sort()
    codes.remove(1)
    codes = [1] + codes
    pos = {c: i for i, c in enumerate(codes)}
    table = np.array(
        [[pos[int(f.mul_t[a, b])] for b in codes] for a in codes], dtype=np.int32
    )
    gen = next((i for i, c in enumerate(codes) if f.code_order(c) == m), None)
    g = _table_group(table, [f.code_str(c) for c in codes], f"mu_{m}({f})",
                     gens=[gen] if gen else None)
    g.scalar_field = f
    g.scalar_codes = np.array(codes, dtype=np.int64)
    return g


# ---------------------------------------------------------------------------
# actions and products


class Action:
    """A group H acting on a group N by automorphisms, as an index table:
    table[h, x] = index of h(x) in N's enumeration."""

    def __init__(self, H: Group, N: Group, table: np.ndarray, check: bool = True):
        self.H = H
        self.N = N
        self.table = np.ascontiguousarray(table, dtype=np.int64)
        if self.table.shape != (len(H), len(N)):
            raise InvalidConstruction("action table shape mismatch")
        if check:
            self.verify()

    def verify(self):
        nN, nH = len(self.N), len(self.H)
        ar = np.arange(nN)
        if not np.array_equal(np.sort(self.table, axis=1), np.broadcast_to(ar, (nH, nN))):
            raise InvalidConstruction("action rows are not bijections")
        if not np.array_equal(self.table[0], ar):
            raise InvalidConstruction("identity does not act trivially")
        tab = self.N.cayley()
        for h in range(nH):
            row = self.table[h]
            if not np.array_equal(row[tab], tab[np.ix_(row, row)]):
                raise InvalidConstruction(f"action of element {h} is not an automorphism")
        htab = self.H.cayley()
        for h1 in range(nH):
            comp = self.table[h1][self.table]
            if not np.array_equal(self.table[htab[h1]], comp):
                raise InvalidConstruction("action is not a homomorphism H -> Aut(N)")

    @classmethod
    def trivial(cls, H: Group, N: Group) -> "Action":
        table = np.broadcast_to(np.arange(len(N), dtype=np.int64), (len(H), len(N))).copy()
        return cls(H, N, table, check=False)

    @classmethod
    def from_index_rule(cls, H: Group, N: Group, fn, check: bool = True) -> "Action":
        table = np.stack([np.asarray(fn(h), dtype=np.int64) for h in range(len(H))])
        return cls(H, N, table, check=check)

    @classmethod
    def from_word_rule(cls, H: Group, N: Group, fn, check: bool = True) -> "Action":
        """fn(h_index, N_words) -> mapped N_words (batch over all of N)."""

        def row(h):
            mapped = fn(h, N.words)
            return N.index_of_codes(N.rep.encode(np.ascontiguousarray(mapped, dtype=N.rep.dtype)))

        return cls.from_index_rule(H, N, row, check=check)

    def induced_on_quotient(self, Q: Group, check: bool = True) -> "Action":
        """The action induced on a quotient Q of N (kernel must be invariant)."""
        if not isinstance(Q.rep, QuotientRep) or Q.rep.parent is not self.N:
            raise InvalidConstruction("Q is not a quotient of the acted-on group")
        canon = Q.rep.canon
        reps = Q.words[:, 0]
        rows = canon[self.table[:, reps]]
        table = Q.index_of_codes(rows.reshape(-1)).reshape(len(self.H), len(Q))
        return Action(self.H, Q, table, check=check)


def direct_product(A: Group, B: Group, budget: int = DEFAULT_BUDGET, name=None) -> Group:
    size = len(A) * len(B)
    if size > budget:
        raise BudgetExceeded(f"|{A.name} x {B.name}| = {size} over budget", partial=0)
    rep = PairRep(A, B, act=None)
    na, nb = len(A), len(B)
    words = np.stack(
        [np.repeat(np.arange(na, dtype=np.int64), nb), np.tile(np.arange(nb, dtype=np.int64), na)],
        axis=1,
    )
    g = Group(rep, words, name=name or f"{A.name} x {B.name}")
    g._gens = [a * nb for a in A.gens if a] + [b for b in B.gens if b]
    return g


def semidirect_product(N: Group, H: Group, act: Action, budget: int = DEFAULT_BUDGET,
                       name=None) -> Group:
    """Pairs (x, h), (x,h)(x',h') = (x * act(h,x'), hh'); action checked."""
    if act.N is not N or act.H is not H:
        raise InvalidConstruction("action does not match the given groups")
    act.verify()
    size = len(N) * len(H)
    if size > budget:
        raise BudgetExceeded(f"semidirect product of size {size} over budget", partial=0)
    rep = PairRep(N, H, act=act.table)
    nn, nh = len(N), len(H)
    words = np.stack(
        [np.repeat(np.arange(nn, dtype=np.int64), nh), np.tile(np.arange(nh, dtype=np.int64), nn)],
        axis=1,
    )
    g = Group(rep, words, name=name or f"{N.name} : {H.name}")
    g._gens = [x * nh for x in N.gens if x] + [h for h in H.gens if h]
    return g


def power_group(base: Group, k: int, budget: int = DEFAULT_BUDGET, name=None) -> Group:
    """k-fold direct power of a small group."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return cyclic(1)
    size = len(base) ** k
    if size > budget:
        raise BudgetExceeded(f"|{base.name}|^{k} = {size} over budget", partial=0)
    rep = PowerRep(base, k)
    ar = np.arange(size, dtype=np.int64)
    words = np.empty((size, k), dtype=np.int32)
    m = len(base)
    for c in range(k):
        words[:, c] = (ar // m**c) % m
    g = Group(rep, words, name=name or f"{base.name}^{k}")
    g._gens = [x * int(m**c) for c in range(k) for x in base.gens if x]
    return g


def permuting_action(P: Group, N: Group, check: bool = True) -> Action:
    """P (a permutation group on k points) acting on a k-fold power N by
    permuting the coordinates."""
    if not isinstance(P.rep, PermRep):
        raise InvalidConstruction("acting group is not a permutation group")
    if not isinstance(N.rep, PowerRep):
        raise InvalidConstruction("target group is not a direct power")
    if P.rep.n != N.rep.k:
        raise Inapplicable(
            f"arity mismatch: {P.rep.n} points acting on a {N.rep.k}-fold power"
        )

    def row(h, words):
        return words[:, P.words[h]]

    return Action.from_word_rule(P, N, row, check=check)


def constrained_subgroup(W: Group, name=None) -> Group:
    """The subgroup of a wreath-type group of pairs (b, tau) selected by the
    multiplicative constraint: product of the base coordinates = sign(tau).

    W must be a (semi)direct product of a power of a root-of-unity group by
    a permutation group.  The selected subset is checked to be closed.
    """
    rep = W.rep
    if not isinstance(rep, PairRep) or not isinstance(rep.N.rep, PowerRep):
        raise InvalidConstruction("expected a wreath-type group of pairs")
    base = rep.N.rep.base
    if not hasattr(base, "scalar_codes"):
        raise InvalidConstruction("base group does not expose field scalars")
    f = base.scalar_field
    comp = rep.N.words[W.words[:, 0]]
    fc = base.scalar_codes[comp]
    prod = np.full(len(W), 1, dtype=np.int64)
    for c in range(fc.shape[1]):
        prod = f.mul_t[prod, fc[:, c]].astype(np.int64)
    if isinstance(rep.H.rep, PermRep):
        sg = perm_signs(rep.H.words[W.words[:, 1]])
    else:
        if len(rep.H) != 1:
            raise InvalidConstruction("permutation part is not a permutation group")
        sg = np.ones(len(W), dtype=np.int64)
    target = np.where(sg > 0, 1, int(f.neg_t[1]))
    indices = np.nonzero(prod == target)[0]
    sub = np.sort(indices.astype(np.int64))
    ii = np.repeat(sub, sub.size)
    jj = np.tile(sub, sub.size)
    prods = W.mul_idx(ii, jj)
    if not np.all(np.isin(prods, sub)):
        raise InvalidConstruction("constraint subset is not closed under the product")
    return W.subgroup(sub, name=name or f"[prod=sgn] in {W.name}")


# ---------------------------------------------------------------------------
# quotients


def quotient_by_normal(G: Group, sub_indices, name=None, check_normal: bool = True) -> Group:
    sub = np.unique(np.asarray(sub_indices, dtype=np.int64))
    if sub[0] != 0:
        raise InvalidConstruction("kernel must contain the identity")
    if len(G) % sub.size:
        raise InvalidConstruction("kernel size does not divide the group order")
    if check_normal:
        for g in G.gens:
            if not np.all(np.isin(G.conj_idx(sub, g), sub)):
                raise InvalidConstruction("kernel is not normal")
    n = len(G)
    ar = np.arange(n, dtype=np.int64)
    canon = ar.copy()
    for z in sub[1:]:
        canon = np.minimum(canon, G.mul_idx(ar, int(z)))
    reps = np.unique(canon)
    if reps.size * sub.size != n:
        raise InvalidConstruction("coset decomposition failed (kernel not a subgroup?)")
    q = Group(QuotientRep(G, canon), reps[:, None], name=name or f"{G.name}/K")
    gen_reps = canon[np.array(G.gens, dtype=np.int64)]
    gidx = q.index_of_codes(gen_reps)
    seen: list[int] = []
    for i in gidx.tolist():
        if i != 0 and i not in seen:
            seen.append(i)
    q._gens = seen
    return q


def central_quotient(G: Group, z_indices, name=None) -> Group:
    """G / <Z> for a central subset Z (centrality checked exhaustively)."""
    z_indices = np.asarray(z_indices, dtype=np.int64)
    if np.any(z_indices < 0) or np.any(z_indices >= len(G)):
        raise InvalidConstruction("central elements are not members of the group")
    zsub = G.subgroup_closure(z_indices)
    ar = np.arange(len(G), dtype=np.int64)
    for z in zsub[1:]:
        if not np.array_equal(G.mul_idx(ar, int(z)), G.mul_idx(int(z), ar)):
            raise InvalidConstruction(f"element {G.element_str(int(z))} is not central")
    return quotient_by_normal(G, zsub, name=name or f"{G.name}/Z", check_normal=False)


# ---------------------------------------------------------------------------
# invariants


def center(G: Group) -> Group:
    return G.subgroup(G.center_indices(), name=f"Z({G.name})")


def derived_subgroup(G: Group) -> Group:
    """Commutator subgroup: normal closure of generator commutators."""
    gens = G.gens
    inv = G.inverses()
    clo = IndexClosure(G)
    for a in gens:
        for b in gens:
            clo.add_gen(G.mul_idx(int(inv[a]), G.mul_idx(int(inv[b]), G.mul_idx(a, b))))
    while True:
        fresh = []
        karr = np.array(clo.gens, dtype=np.int64) if clo.gens else np.empty(0, np.int64)
        for g in gens:
            cj = G.conj_idx(karr, g)
            fresh.extend(cj[~np.isin(cj, clo.closed)].tolist())
        added = False
        for x in fresh:
            added = clo.add_gen(x) or added
        if not added:
            break
    sub = G.subgroup(clo.closed, name=f"[{G.name},{G.name}]")
    if clo.gens:
        sub._gens = [int(i) for i in sub.index_of_codes(np.array(clo.gens, np.int64))]
    return sub


def _abelian_invariants(orders_vec: np.ndarray) -> tuple[int, ...]:
    """Prime-power cyclic factors of an abelian group, from element orders.

    For each prime p, N_k = #{x : x^(p^k) = 1} determines the partition of
    p-exponents: v_p(N_k) - v_p(N_{k-1}) counts the factors of exponent >= k.
    """
    n = len(orders_vec)
    invs: list[int] = []
    rem = n
    p = 2
    while rem > 1:
        if rem % p == 0:
            while rem % p == 0:
                rem //= p
            logs = [0]
            k = 1
            while True:
                nk = int(np.count_nonzero(p**k % orders_vec == 0))
                logs.append(v_l(p, nk))
                if logs[-1] == logs[-2]:
                    break
                k += 1
            lambdas = [logs[i + 1] - logs[i] for i in range(len(logs) - 1)]
            for k0 in range(len(lambdas)):
                mult = lambdas[k0] - (lambdas[k0 + 1] if k0 + 1 < len(lambdas) else 0)
                invs.extend([p ** (k0 + 1)] * mult)
        p += 1 if p == 2 else 2
    return tuple(sorted(invs))


@dataclass(frozen=True)
class InvariantFingerprint:
    """Isomorphism-invariant screen: equal groups give equal fingerprints."""

    order: int
    order_hist: tuple[tuple[int, int], ...]
    center_order: int
    derived_order: int
    abelianization: tuple[int, ...]
    exponent: int

    def as_dict(self):
        return {
            "order": self.order,
            "order_histogram": [list(x) for x in self.order_hist],
            "center": self.center_order,
            "derived": self.derived_order,
            "abelianization": list(self.abelianization),
            "exponent": self.exponent,
        }


def fingerprint(G: Group) -> InvariantFingerprint:
    if G._fingerprint is not None:
        return G._fingerprint
    ords = G.orders()
    vals, counts = np.unique(ords, return_counts=True)
    hist = tuple((int(v), int(c)) for v, c in zip(vals, counts))
    exponent = 1
    for v in vals.tolist():
        exponent = math.lcm(exponent, int(v))
    der = derived_subgroup(G)
    if len(der) == len(G):
        ab: tuple[int, ...] = ()
    else:
        q = quotient_by_normal(G, der.parent_indices(), check_normal=False)
        ab = _abelian_invariants(q.orders())
    fp = InvariantFingerprint(
        order=len(G),
        order_hist=hist,
        center_order=int(G.center_indices().size),
        derived_order=len(der),
        abelianization=ab,
        exponent=exponent,
    )
    G._fingerprint = fp
    return fp


def element_order(G: Group, i: int) -> int:
    return G.element_order(i)
