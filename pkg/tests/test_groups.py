"""Group-kernel operations checked against independent little oracles
(tuple-based multiplication written inline, no sylowkit machinery)."""

import itertools
from collections import Counter

import numpy as np
import pytest

from sylowkit.errors import BudgetExceeded, Inapplicable, InvalidConstruction
from sylowkit.ff import ff_make
from sylowkit.groups import (
    Action,
    MatrixMulRep,
    Permutation,
    central_quotient,
    center,
    close_group,
    constrained_subgroup,
    cyclic,
    derived_subgroup,
    dihedral,
    direct_product,
    fingerprint,
    legendre_exponent,
    mu_group,
    permuting_action,
    power_group,
    quaternion,
    semidirect_product,
    sign,
    sylow_of_symmetric,
    symmetric,
)

# -- little independent oracles ---------------------------------------------


def brute_order_hist(elements, mul, identity):
    """Order histogram by repeated multiplication on opaque values."""
    hist = Counter()
    for x in elements:
        acc, k = x, 1
        while acc != identity:
            acc = mul(acc, x)
            k += 1
        hist[k] += 1
    return dict(hist)


def dihedral_tuples(n):
    """(k, s) pairs with the standard dihedral product."""
    els = [(k, s) for s in range(2) for k in range(n)]
    mul = lambda a, b: ((a[0] + (n - b[0] if a[1] else b[0])) % n, a[1] ^ b[1])
    return els, mul, (0, 0)


def quaternion_tuples(n):
    """w^a v^b normal forms for Q_{4n}."""
    els = [(a, b) for b in range(2) for a in range(2 * n)]

    def mul(x, y):
        a, b = x
        a2, b2 = y
        if b == 0:
            return ((a + a2) % (2 * n), b2)
        if b2 == 0:
            return ((a - a2) % (2 * n), 1)
        return ((a - a2 + n) % (2 * n), 0)

    return els, mul, (0, 0)


# -- closure -----------------------------------------------------------------


def test_closure_s2_and_s3():
    g = close_group(
        symmetric(3).rep, np.array([[1, 0, 2]], dtype=np.int8), name="<(1 2)>"
    )
    assert len(g) == 2
    g = close_group(
        symmetric(3).rep, np.array([[1, 0, 2], [1, 2, 0]], dtype=np.int8), name="S3"
    )
    assert len(g) == 6


def test_closure_sl2_3_vs_exhaustive_filter():
    f = ff_make(3, 1)
    rep = MatrixMulRep(f, 2)
    gens = np.array([[1, 1, 0, 1], [1, 0, 1, 1]], dtype=np.int8)
    g = close_group(rep, gens, name="SL2(3)")
    # oracle: filter all 81 matrices over Z/3 with det = 1 (plain ints)
    count = sum(
        1
        for a, b, c, d in itertools.product(range(3), repeat=4)
        if (a * d - b * c) % 3 == 1
    )
    assert len(g) == count == 24


def test_closure_budget_exceeded_reports_partial():
    with pytest.raises(BudgetExceeded) as ei:
        close_group(
            symmetric(6).rep,
            np.array([[1, 0, 2, 3, 4, 5], [1, 2, 3, 4, 5, 0]], dtype=np.int8),
            budget=100,
            name="S6",
        )
    assert ei.value.partial is not None and ei.value.partial > 100


def test_closure_is_closed_and_deterministic():
    g1 = sylow_of_symmetric(2, 6)
    g2 = sylow_of_symmetric(2, 6)
    assert np.array_equal(g1.words, g2.words)
    n = len(g1)
    ii, jj = np.repeat(np.arange(n), n), np.tile(np.arange(n), n)
    prods = g1.mul_idx(ii, jj)  # raises if any product escaped
    assert prods.min() >= 0


# -- products ------------------------------------------------------------------


def test_direct_product_klein_and_z6():
    k4 = direct_product(cyclic(2), cyclic(2))
    assert fingerprint(k4).exponent == 2 and len(k4) == 4
    z6 = direct_product(cyclic(2), cyclic(3))
    assert fingerprint(z6).abelianization == (2, 3)
    assert max(o for o, _ in fingerprint(z6).order_hist) == 6


def test_direct_product_d8_x_c2_histogram():
    # oracle: tuple product of dihedral tuples with Z/2
    els, mul, e = dihedral_tuples(4)
    prod_els = [(x, z) for x in els for z in range(2)]
    pmul = lambda a, b: (mul(a[0], b[0]), (a[1] + b[1]) % 2)
    expected = brute_order_hist(prod_els, pmul, (e, 0))
    got = dict(fingerprint(direct_product(dihedral(8), cyclic(2))).order_hist)
    assert got == expected == {1: 1, 2: 11, 4: 4}


def test_semidirect_z3_z2_is_s3():
    z3, z2 = cyclic(3), cyclic(2)
    act = Action.from_index_rule(z2, z3, lambda h: [0, 2, 1] if h else [0, 1, 2])
    g = semidirect_product(z3, z2, act)
    assert len(g) == 6
    assert fingerprint(g) == fingerprint(symmetric(3))


def test_semidirect_trivial_action_is_direct():
    n = power_group(cyclic(2), 2)
    h = cyclic(1)
    g = semidirect_product(n, h, Action.trivial(h, n))
    assert len(g) == 4 and fingerprint(g).exponent == 2


def test_semidirect_rejects_bad_action():
    z3 = cyclic(3)
    with pytest.raises(InvalidConstruction):
        Action.from_index_rule(cyclic(2), z3, lambda h: [0, 2, 2] if h else [0, 1, 2])
    # a bijection that is not an automorphism
    with pytest.raises(InvalidConstruction):
        Action.from_index_rule(cyclic(2), z3, lambda h: [1, 0, 2] if h else [0, 1, 2])


def test_sym2_semidirect_matches_sylow2_of_sp42():
    from sylowkit.catalog import model_psp_p
    from sylowkit.classical import ClassicalSpec, build
    from sylowkit.sylow import sylow
    from sylowkit.verify import is_isomorphic

    m = model_psp_p(2, 2)
    assert len(m) == 16
    p = sylow(build(ClassicalSpec("Sp", 4, 2)), 2).subgroup
    assert is_isomorphic(m, p).isomorphic


# -- central quotients -----------------------------------------------------------


def test_q8_modulo_center_is_klein():
    # oracle: coset enumeration on quaternion tuples
    els, mul, e = quaternion_tuples(2)
    z = (2, 0)  # w^2, the unique involution
    cosets = {frozenset((x, mul(x, z))) for x in els}
    assert len(cosets) == 4
    q8 = quaternion(8)
    w2 = q8.mul_idx(1, 1)
    v4 = central_quotient(q8, [w2])
    assert dict(fingerprint(v4).order_hist) == {1: 1, 2: 3}


def test_quotient_by_trivial_is_same_group():
    from sylowkit.verify import is_isomorphic

    g = symmetric(3)
    q = central_quotient(g, [0])
    assert len(q) == 6 and is_isomorphic(g, q).isomorphic


def test_z4_squared_mod_diagonal_involutions():
    g = power_group(cyclic(4), 2)
    # diagonal {(x, x): x^2 = 1} = {(0,0), (2,2)}
    diag = int(g.index_of_codes(np.array([2 * 4 + 2]))[0])
    q = central_quotient(g, [diag])
    assert len(q) == 8


def test_central_quotient_rejects_noncentral():
    s3 = symmetric(3)
    transposition = next(i for i in range(6) if s3.element_order(i) == 2)
    with pytest.raises(InvalidConstruction):
        central_quotient(s3, [transposition])


# -- named small groups ------------------------------------------------------------


def test_quaternion_histograms():
    els, mul, e = quaternion_tuples(2)
    assert brute_order_hist(els, mul, e) == {1: 1, 2: 1, 4: 6}
    assert dict(fingerprint(quaternion(8)).order_hist) == {1: 1, 2: 1, 4: 6}


def test_dihedral_histograms():
    els, mul, e = dihedral_tuples(4)
    assert brute_order_hist(els, mul, e) == {1: 1, 2: 5, 4: 2}
    assert dict(fingerprint(dihedral(8)).order_hist) == {1: 1, 2: 5, 4: 2}


def test_cyclic_trivial():
    assert len(cyclic(1)) == 1
    with pytest.raises(ValueError):
        cyclic(0)
    with pytest.raises(ValueError):
        quaternion(11)
    with pytest.raises(ValueError):
        dihedral(3)


def test_quaternion_unique_involution():
    for four_n in (8, 16, 24, 32, 48, 64):
        q = quaternion(four_n)
        assert dict(fingerprint(q).order_hist)[2] == 1


# -- symmetric groups and their Sylow subgroups -------------------------------------


def test_sign_examples():
    assert sign(Permutation((0, 1, 2))) == 1
    assert sign((1, 0, 2)) == -1
    assert sign((1, 2, 0)) == 1


def test_permutation_validates():
    with pytest.raises(InvalidConstruction):
        Permutation((0, 0, 1))


def test_symmetric_budget():
    with pytest.raises(BudgetExceeded):
        symmetric(9, budget=1000)


@pytest.mark.parametrize("l", [2, 3, 5])
@pytest.mark.parametrize("n", range(1, 13))
def test_sylow_of_symmetric_order(l, n):
    g = sylow_of_symmetric(l, n)
    assert len(g) == l ** legendre_exponent(l, n)
    # the l-part of n! (independent arithmetic)
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    lpart = 1
    while fact % l == 0:
        fact //= l
        lpart *= l
    assert len(g) == lpart


def test_sylow_of_symmetric_inside_s_n():
    s6 = symmetric(6)
    p = sylow_of_symmetric(2, 6)
    assert np.all(s6.find_codes(p.codes) >= 0)


def test_p24_isomorphic_to_d8():
    from sylowkit.verify import is_isomorphic

    assert is_isomorphic(sylow_of_symmetric(2, 4), dihedral(8)).isomorphic


def test_odd_l_block_group_is_even():
    for l, n in [(3, 6), (3, 9), (5, 10)]:
        g = sylow_of_symmetric(l, n)
        from sylowkit.groups import perm_signs

        assert np.all(perm_signs(g.words) == 1)


# -- wreath machinery -----------------------------------------------------------------


def test_permuting_action_s2_on_z3_squared():
    s2 = sylow_of_symmetric(2, 2)
    n = power_group(cyclic(3), 2)
    g = semidirect_product(n, s2, permuting_action(s2, n))
    assert len(g) == 18


def test_permuting_action_trivial():
    p = sylow_of_symmetric(2, 1)
    n = power_group(cyclic(5), 1)
    act = permuting_action(p, n)
    assert np.array_equal(act.table, np.arange(5)[None, :])


def test_permuting_action_arity_mismatch():
    with pytest.raises(Inapplicable):
        permuting_action(sylow_of_symmetric(2, 4), power_group(cyclic(2), 3))


def test_p2s4_on_c2_power_order():
    p = sylow_of_symmetric(2, 4)
    n = power_group(cyclic(2), 4)
    g = semidirect_product(n, p, permuting_action(p, n))
    assert len(g) == 2**4 * 8 == 128


def test_constrained_subgroup_examples():
    f4 = ff_make(2, 2)
    mu3 = mu_group(f4, 3, 1)
    for n, expected in [(2, 3), (1, 1)]:
        p = sylow_of_symmetric(3, n)
        npow = power_group(mu3, n)
        w = semidirect_product(npow, p, permuting_action(p, npow))
        c = constrained_subgroup(w)
        assert len(c) == expected
    # l = 2, s = 2 over F_5: count pairs per parity class -> order 8
    f5 = ff_make(5, 1)
    mu4 = mu_group(f5, 2, 2)
    p2 = sylow_of_symmetric(2, 2)
    npow = power_group(mu4, 2)
    w = semidirect_product(npow, p2, permuting_action(p2, npow))
    c = constrained_subgroup(w)
    # oracle: pairs (b1, b2) in mu_4^2, tau in S_2 with b1 b2 = sgn(tau) mod 5
    mu_vals = [1, 2, 3, 4]
    cnt = sum(
        1
        for b1 in mu_vals
        for b2 in mu_vals
        for sgn in (1, -1)
        if (b1 * b2 - sgn) % 5 == 0
    )
    assert len(c) == cnt == 8


# -- invariants --------------------------------------------------------------------


def test_mu_group_examples():
    f5 = ff_make(5, 1)
    g = mu_group(f5, 2, 2)
    assert len(g) == 4 and fingerprint(g).abelianization == (4,)
    f4 = ff_make(2, 2)
    assert len(mu_group(f4, 3, 1)) == 3
    f9 = ff_make(3, 2)
    g = mu_group(f9, 2, 3)
    # oracle: count solutions of x^8 = 1 in F_9 by elementwise powering
    sols = [a for a in range(1, 9) if (f9.element(a) ** 8) == f9.one]
    assert len(g) == len(sols) == 8
    assert fingerprint(g).abelianization == (8,)
    with pytest.raises(Inapplicable):
        mu_group(f5, 3, 1)


def test_mu_power_identity():
    f9 = ff_make(3, 2)
    for l, s in [(2, 1), (2, 2), (2, 3)]:
        g = mu_group(f9, l, s)
        assert len(g) == l**s
        assert all(
            (f9.element(int(c)) ** (l**s)) == f9.one for c in g.scalar_codes
        )


def test_fingerprints_from_spec():
    assert fingerprint(quaternion(8)).as_dict() == {
        "order": 8,
        "order_histogram": [[1, 1], [2, 1], [4, 6]],
        "center": 2,
        "derived": 2,
        "abelianization": [2, 2],
        "exponent": 4,
    }
    fp = fingerprint(dihedral(8))
    assert fp.center_order == 2 and fp.derived_order == 2
    triv = fingerprint(cyclic(1))
    assert (triv.order, triv.order_hist, triv.center_order, triv.derived_order,
            triv.abelianization, triv.exponent) == (1, ((1, 1),), 1, 1, (), 1)


def test_center_and_derived_of_s4():
    s4 = symmetric(4)
    assert len(center(s4)) == 1
    d = derived_subgroup(s4)
    assert len(d) == 12  # A_4
    dd = derived_subgroup(d)
    assert len(dd) == 4  # the Klein four group


def test_element_orders_match_brute_force():
    g = symmetric(4)
    ords = g.orders()
    for i in range(len(g)):
        w = tuple(g.words[i].tolist())
        acc, k = w, 1
        while acc != tuple(range(4)):
            acc = tuple(w[a] for a in acc)
            k += 1
        assert ords[i] == k


def test_inverses():
    for g in (symmetric(4), quaternion(16), sylow_of_symmetric(3, 9)):
        inv = g.inverses()
        ar = np.arange(len(g))
        assert np.all(g.mul_idx(ar, inv) == 0)
        assert np.all(g.mul_idx(inv, ar) == 0)
