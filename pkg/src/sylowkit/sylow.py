"""Brute-force extraction of Sylow subgroups from enumerated groups.

This is the ground truth every model is verified against: grow a
p-subgroup P by scanning the group, in enumeration order, for the first
element of p-power order that normalizes P and lies outside it; Sylow's
theorem guarantees such an element exists until |P| is the full p-part.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidConstruction
from .ff import is_prime
from .groups import Group


def p_part(order: int, p: int) -> int:
    """The largest power of p dividing order."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    out = 1
    while order % p == 0:
        order //= p
        out *= p
    return out


@dataclass
class SylowResult:
    prime: int
    subgroup: Group
    p_part: int
    witness_chain: list[int] = field(default_factory=list)


def _p_power_mask(orders: np.ndarray, p: int) -> np.ndarray:
    """True where the element order is a power of p (including 1)."""
    vals = np.unique(orders)
    good = set()
    for v in vals.tolist():
        m = int(v)
        while m % p == 0:
            m //= p
        if m == 1:
            good.add(int(v))
    return np.isin(orders, np.array(sorted(good), dtype=orders.dtype))


def sylow(G: Group, p: int) -> SylowResult:
    """A Sylow p-subgroup of G, deterministic in G's enumeration order."""
    target = p_part(len(G), p)
    chain = [1]
    if target == 1:
        return SylowResult(p, G.subgroup([0], name=f"Syl_{p}({G.name})"), 1, chain)
    orders = G.orders()
    inv = G.inverses()
    cand_all = np.nonzero(_p_power_mask(orders, p))[0]
    p_gens: list[int] = []
    members = np.array([0], dtype=np.int64)
    while members.size < target:
        cand = cand_all[~np.isin(cand_all, members)]
        ok = np.ones(cand.size, dtype=bool)
        for x in p_gens:
            conj = G.mul_idx(G.mul_idx(inv[cand], x), cand)
            ok &= np.isin(conj, members)
        hits = cand[ok]
        if hits.size == 0:
            raise InvalidConstruction(
                f"Sylow growth stalled at order {members.size} of {target} "
                f"in {G.name}: not a group?"
            )
        g = int(hits[0])
        p_gens.append(g)
        members = G.subgroup_closure(p_gens)
        chain.append(int(members.size))
    if members.size != target:
        raise InvalidConstruction(
            f"Sylow overgrew: {members.size} > {target} in {G.name}"
        )
    sub = G.subgroup(members, name=f"Syl_{p}({G.name})")
    sub._gens = [int(i) for i in sub.index_of_codes(np.array(p_gens, dtype=np.int64))]
    return SylowResult(p, sub, target, chain)


def is_sylow(G: Group, P: Group, p: int) -> bool:
    """Check |P| equals the p-part of |G|, P sits inside G, and every
    element of P has p-power order."""
    if len(P) != p_part(len(G), p):
        return False
    try:
        idx = P.parent_indices()
    except TypeError:
        return False
    root = P.rep.parent
    if root is not G:
        return False
    if np.any(idx < 0) or np.any(idx >= len(G)):
        return False
    return bool(np.all(_p_power_mask(G.orders()[idx], p)))
