"""Catalog carriers, models, and reductions: order identities and the
worked examples, with brute-force cross-checks where cheap."""

import numpy as np
import pytest

from sylowkit.catalog import (
    CATALOG,
    antisym0_matrices,
    antisym_matrices,
    antisym_star_matrices,
    get_entry,
    list_catalog,
    model_gl_l,
    model_o_even_2,
    model_o_odd_2,
    model_omega_even_2,
    model_omega_odd_p,
    model_pomega_even_p,
    model_psl_l,
    model_psl_p,
    model_psp_2,
    model_psp_p,
    model_sl_l,
    model_u_even_p,
    model_u_odd_p,
    reduce_pomega_l,
    reduce_psp_l,
    reduce_psu_l,
    reduce_u_l,
    s_group,
    sym_matrices,
    up_group,
)
from sylowkit.errors import Inapplicable
from sylowkit.ff import ff_make, v_l
from sylowkit.groups import dihedral, fingerprint
from sylowkit.verify import is_isomorphic


def test_carrier_orders():
    f3, f4, f9 = ff_make(3, 1), ff_make(2, 2), ff_make(3, 2)
    for n in (1, 2, 3):
        assert len(up_group(n, f3)) == 3 ** (n * (n - 1) // 2)
        assert len(sym_matrices(n, f3)) == 3 ** (n * (n + 1) // 2)
        assert len(antisym_matrices(n, f3)) == 3 ** (n * (n - 1) // 2)
        assert len(antisym0_matrices(n, f4)) == 4 ** (n * (n - 1) // 2)
        assert len(antisym_matrices(n, f4)) == len(sym_matrices(n, f4))
    # conjugate-antisymmetric: q^(m^2) for q^2 = |field|
    assert len(antisym_star_matrices(1, f4)) == 2
    assert len(antisym_star_matrices(2, f4)) == 2**4
    assert len(antisym_star_matrices(1, f9)) == 3


def test_antisym_star_f4_by_hand():
    # b = -conj(b) over F_4 means b = b^2, so b in {0, 1}
    f4 = ff_make(2, 2)
    sols = [b for b in range(4) if int(f4.neg_t[f4.conj_t[b]]) == b]
    assert sorted(sols) == [0, 1]
    assert len(antisym_star_matrices(1, f4)) == len(sols)


def test_kernel_of_trace_f9():
    f9 = ff_make(3, 2)
    sols = [b for b in range(9) if int(f9.add_t[b, f9.conj_t[b]]) == 0]
    assert len(sols) == 3
    assert len(antisym_star_matrices(1, f9)) == 3


def test_s_group_orders_and_identity():
    f4, f9 = ff_make(2, 2), ff_make(3, 2)
    s = s_group(1, f4)
    assert len(s) == 8
    assert len(s_group(1, f9)) == 27
    assert len(s_group(2, f4)) == 2**8
    # identity element is (0, 0) and multiplication fixes it
    assert s.element_str(0) == "((0);[[0]])"
    ar = np.arange(len(s))
    assert np.all(s.mul_idx(0, ar) == ar)
    assert np.all(s.mul_idx(ar, 0) == ar)


def test_s_group_associative_exhaustive():
    for f in (ff_make(2, 2), ff_make(3, 2)):
        s = s_group(1, f)
        n = len(s)
        for a in range(n):
            ab = s.mul_idx(np.full(n, a), np.arange(n))
            for b in range(n):
                lhs = s.mul_idx(int(ab[b]), np.arange(n))
                rhs = s.mul_idx(a, s.mul_idx(np.full(n, b), np.arange(n)))
                assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize(
    "fn,args,expected",
    [
        (model_psl_p, (3, 2), 8),
        (model_psl_p, (2, 3), 3),
        (model_psl_p, (2, 4), 4),
        (model_psl_l, (2, 4, 3), 3),
        (model_psl_l, (2, 7, 3), 3),
        (model_psl_l, (3, 4, 3), 9),
        (model_sl_l, (2, 4, 3), 3),
        (model_sl_l, (1, 7, 3), 1),
        (model_sl_l, (3, 4, 3), 27),
        (model_gl_l, (2, 4, 3), 9),
        (model_gl_l, (4, 2, 5), 5),
        (model_gl_l, (3, 2, 7), 7),
        (model_psp_p, (2, 3), 81),
        (model_psp_p, (1, 3), 3),
        (model_psp_p, (2, 2), 16),
        (model_psp_2, (1, 3), 4),
        (model_psp_2, (2, 3), 64),
        (model_pomega_even_p, (2, 3), 9),
        (model_omega_even_2, (2, 2), 4),
        (model_omega_even_2, (2, 4), 16),
        (model_omega_odd_p, (1, 3), 3),
        (model_omega_odd_p, (2, 3), 81),
        (model_omega_odd_p, (1, 5), 5),
        (model_u_even_p, (1, 2, 1), 2),
        (model_u_even_p, (2, 2, 1), 64),
        (model_u_even_p, (1, 3, 1), 3),
        (model_u_odd_p, (1, 2, 1), 8),
        (model_u_odd_p, (1, 3, 1), 27),
    ],
)
def test_model_orders(fn, args, expected):
    assert len(fn(*args)) == expected


def test_model_order_identities():
    for n, q in [(1, 3), (2, 2), (2, 3)]:
        assert len(model_psp_p(n, q)) == q ** (n * n)
    for m, q in [(1, 3), (2, 3)]:
        assert len(model_pomega_even_p(m, q)) == q ** (m * (m - 1))
        assert len(model_omega_odd_p(m, q)) == q ** (m * m)
    for m, q in [(1, 2), (2, 2)]:
        assert len(model_omega_even_2(m, q)) == q ** (m * (m - 1))
    for m, p, r in [(1, 2, 1), (2, 2, 1), (1, 3, 1)]:
        q = p**r
        assert len(model_u_even_p(m, p, r)) == q ** (m * (2 * m - 1))
    for m, p, r in [(1, 2, 1), (1, 3, 1), (2, 2, 1)]:
        q = p**r
        assert len(model_u_odd_p(m, p, r)) == q ** (m * (2 * m + 1))


def test_gl_model_order_formula():
    from sylowkit.ff import arith_params
    from sylowkit.groups import legendre_exponent

    for n, q, l in [(2, 4, 3), (4, 2, 5), (3, 2, 7), (2, 16, 5), (4, 3, 2), (6, 2, 3)]:
        ap = arith_params(l, q, n)
        g = model_gl_l(n, q, l)
        assert len(g) == l ** (ap.s * ap.n0 + legendre_exponent(l, ap.n0))


def test_gl_model_matches_l_part_of_gl_order():
    # the heart of Sylow-ness, checkable by pure arithmetic
    from sylowkit.sylow import p_part

    for n, q, l in [(2, 4, 3), (3, 2, 7), (4, 2, 5), (2, 16, 5), (2, 5, 2)]:
        order = 1
        for i in range(n):
            order *= q**n - q**i
        assert len(model_gl_l(n, q, l)) == p_part(order, l)


def test_gl_model_trivial_when_d_exceeds_n():
    assert len(model_gl_l(2, 2, 7)) == 1  # ord_7(2) = 3 > 2
    assert len(model_gl_l(4, 2, 31)) == 1


def test_psl_vs_sl_model_order_ratio():
    for n, q, l in [(2, 4, 3), (3, 4, 3), (2, 7, 3), (2, 16, 5)]:
        s = v_l(l, q - 1)
        ratio = len(model_sl_l(n, q, l)) // len(model_psl_l(n, q, l))
        assert ratio == l ** min(s, v_l(l, n))


def test_l2_linear_models_need_override():
    with pytest.raises(Inapplicable):
        model_sl_l(2, 3, 2)
    with pytest.raises(Inapplicable):
        model_psl_l(2, 5, 2)
    assert len(model_sl_l(2, 3, 2, allow_l2=True)) == 4
    assert len(model_psl_l(2, 3, 2, allow_l2=True)) == 2


def test_psl_l_inapplicable_without_roots():
    with pytest.raises(Inapplicable):
        model_sl_l(2, 4, 5)  # 5 does not divide q - 1 = 3


def test_psp2_quotient_structure():
    # (Q_{2^s})^n mod the diagonal involution has order 2^(sn-1)
    for n, q in [(1, 3), (2, 3), (1, 5), (2, 5)]:
        s = v_l(2, q * q - 1)
        g = model_psp_2(n, q)
        from sylowkit.groups import legendre_exponent

        assert len(g) == 2 ** (s * n - 1 + legendre_exponent(2, n))


def test_psp2_small_cases():
    g = model_psp_2(1, 3)
    assert dict(fingerprint(g).order_hist) == {1: 1, 2: 3}  # Klein four
    assert is_isomorphic(model_o_even_2(1, 5, "+"), dihedral(8)).isomorphic
    assert is_isomorphic(model_o_even_2(1, 3, "-"), dihedral(8)).isomorphic
    v4 = model_o_even_2(1, 3, "+")
    assert dict(fingerprint(v4).order_hist) == {1: 1, 2: 3}


def test_o_odd_2_orders():
    assert len(model_o_odd_2(1, 5)) == 16
    assert len(model_o_odd_2(1, 3)) == 16
    with pytest.raises(Inapplicable):
        model_o_odd_2(1, 4)


def test_reduce_dispatch():
    assert str(reduce_psp_l(2, 5, 3)) == "GL(4,5)"
    assert str(reduce_psp_l(2, 4, 3)) == "GL(2,4)"
    with pytest.raises(Inapplicable):
        reduce_psp_l(2, 5, 2)
    assert str(reduce_pomega_l(4, 3, 5, "-")) == "GL(4,3)"
    assert str(reduce_pomega_l(5, 3, 13)) == "GL(2,3)"
    assert str(reduce_pomega_l(4, 4, 3, "+")) == "GL(2,4)"
    assert str(reduce_pomega_l(4, 5, 3, "+")) == "GL(4,5)"
    assert str(reduce_pomega_l(4, 5, 3, "-")) == "GL(2,5)"
    assert str(reduce_pomega_l(5, 2, 3)) == "GL(4,2)"
    assert str(reduce_psu_l(2, 2, 3)) == "SL(2,4)"
    assert str(reduce_psu_l(3, 2, 3)) == "PSL(3,4)"
    assert str(reduce_psu_l(2, 2, 5)) == "U(2,4)"
    assert str(reduce_u_l(4, 2, 5)) == "GL(2,4)"
    assert str(reduce_u_l(2, 2, 3)) == "GL(2,4)"
    with pytest.raises(Inapplicable):
        reduce_u_l(3, 2, 2)


def test_reduce_pomega_table_rows():
    # all six condition rows of the reduction table
    # n = 2m+1, d odd -> GL_m;  n = 2m+1, d even -> GL_2m
    assert reduce_pomega_l(5, 3, 11).dim == 2  # ord_11(3) = 5, odd
    assert reduce_pomega_l(5, 3, 5).dim == 4  # ord_5(3) = 4, even
    # n = 2m, d odd: eps decides m vs m-1
    assert reduce_pomega_l(4, 4, 3, "+").dim == 2
    assert reduce_pomega_l(4, 4, 3, "-").dim == 1
    # n = 2m, d even: parity of n0 and eps
    assert reduce_pomega_l(4, 3, 5, "-").dim == 4  # n0 = 1 odd, eps = -
    assert reduce_pomega_l(8, 3, 5, "+").dim == 8  # n0 = 2 even, eps = +
    assert reduce_pomega_l(4, 3, 5, "+").dim == 2  # n0 = 1 odd, eps = + -> 2m-2
    assert reduce_pomega_l(8, 3, 5, "-").dim == 6  # n0 = 2 even, eps = - -> 2m-2


def test_catalog_listing():
    rows = list_catalog()
    assert len(rows) == len(CATALOG) == 17
    ids = [r["id"] for r in rows]
    assert ids == list(CATALOG)
    for expected in ("PSL-p", "PSL-l", "SL-l", "GL-l", "PSp-p", "PSp-l-reduce",
                     "PSp-2", "Omega-even-p", "Omega-even-2", "Omega-odd-p",
                     "Omega-l-reduce", "O-even-2", "O-odd-2", "U-even-p",
                     "U-odd-p", "PSU-l-reduce", "U-l-reduce"):
        assert expected in ids
    with pytest.raises(Inapplicable):
        get_entry("nope")


def test_entry_applicability():
    e = get_entry("PSL-l")
    ok, _ = e.applicable({"n": 2, "q": 4}, 3)
    assert ok
    ok, why = e.applicable({"n": 2, "q": 4}, 5)
    assert not ok and "q - 1" in why
    assert e.provisional({"n": 2, "q": 3}, 2)
    assert not e.provisional({"n": 2, "q": 4}, 3)
    e = get_entry("PSp-2")
    ok, _ = e.applicable({"n": 1, "q": 4}, 2)
    assert not ok
