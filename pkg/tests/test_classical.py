"""Classical group construction: enumerated orders against the closed
formulas, form preservation, omega subgroups, exceptional isomorphisms."""

import itertools

import numpy as np
import pytest

from sylowkit.classical import (
    ClassicalSpec,
    build,
    form_check,
    omega_subgroup,
    order_formula,
    standard_forms,
)
from sylowkit.errors import BudgetExceeded, Inapplicable
from sylowkit.ff import ff_make
from sylowkit.groups import fingerprint
from sylowkit.verify import is_isomorphic


def test_spec_validation():
    with pytest.raises(Inapplicable):
        ClassicalSpec("Sp", 3, 3)
    with pytest.raises(Inapplicable):
        ClassicalSpec("O", 4, 3)  # missing sign
    with pytest.raises(Inapplicable):
        ClassicalSpec("O", 3, 3, "+")  # sign on odd dimension
    with pytest.raises(Inapplicable):
        ClassicalSpec("U", 2, 8)  # odd extension degree
    with pytest.raises(Inapplicable):
        ClassicalSpec("Omega", 3, 4)  # odd-dim Omega needs odd q
    with pytest.raises(Inapplicable):
        ClassicalSpec("Frobenius", 2, 3)
    with pytest.raises(ValueError):
        ClassicalSpec("GL", 2, 12)


def test_gl2_3_order_by_exhaustive_filter():
    count = sum(
        1
        for a, b, c, d in itertools.product(range(3), repeat=4)
        if (a * d - b * c) % 3 != 0
    )
    g = build(ClassicalSpec("GL", 2, 3))
    assert len(g) == count == 48 == order_formula(ClassicalSpec("GL", 2, 3))


def test_order_formula_examples():
    assert order_formula(ClassicalSpec("GL", 2, 4)) == (16 - 1) * (16 - 4) == 180
    assert order_formula(ClassicalSpec("GL", 1, 7)) == 6
    assert order_formula(ClassicalSpec("PSL", 2, 4)) == 60
    assert order_formula(ClassicalSpec("Sp", 4, 3)) == 51840
    assert order_formula(ClassicalSpec("U", 3, 4)) == 648
    assert order_formula(ClassicalSpec("O", 2, 3, "-")) == 8


def test_gu3_2_order_by_exhaustive_hermitian_filter():
    # oracle: scan all 4^9 matrices over F_4 for g H conj(g)^T = H, using
    # only the field tables (no group machinery)
    f = ff_make(2, 2)
    H = np.zeros((3, 3), dtype=np.int8)
    H[0, 1] = H[1, 0] = H[2, 2] = 1
    total = 4**9
    ar = np.arange(total, dtype=np.int64)
    W = ((ar[:, None] // (4 ** np.arange(9, dtype=np.int64))[None, :]) % 4).astype(np.int8)
    g = W.reshape(-1, 3, 3)
    acc = np.zeros((total, 3, 3), dtype=np.int8)
    gH = np.zeros_like(acc)
    for k in range(3):
        gH = f.add_t[gH, f.mul_t[g[:, :, k][:, :, None], H[k, :][None, None, :]]]
    gc = f.conj_t[g].swapaxes(1, 2)
    for k in range(3):
        acc = f.add_t[acc, f.mul_t[gH[:, :, k][:, :, None], gc[:, k, :][:, None, :]]]
    count = int(np.sum(np.all(acc == H[None], axis=(1, 2))))
    spec = ClassicalSpec("U", 3, 4)
    assert count == order_formula(spec) == 648
    assert len(build(spec)) == count


@pytest.mark.parametrize(
    "fam,dim,q,sign",
    [
        ("SL", 2, 5, ""), ("PSL", 2, 4, ""), ("PSL", 3, 2, ""), ("Sp", 4, 2, ""),
        ("Sp", 4, 3, ""), ("PSp", 4, 3, ""), ("U", 2, 4, ""), ("U", 2, 9, ""),
        ("SU", 3, 4, ""), ("PSU", 3, 4, ""), ("O", 2, 5, "+"), ("O", 2, 3, "-"),
        ("O", 3, 3, ""), ("O", 4, 2, "+"), ("O", 4, 2, "-"), ("O", 4, 3, "+"),
        ("O", 4, 3, "-"), ("SO", 3, 5, ""), ("Omega", 3, 3, ""), ("Omega", 4, 2, "+"),
        ("Omega", 4, 2, "-"), ("POmega", 4, 3, "+"), ("POmega", 4, 3, "-"),
        ("GL", 4, 2, ""), ("SL", 3, 4, ""),
    ],
)
def test_build_matches_formula_and_form(fam, dim, q, sign):
    spec = ClassicalSpec(fam, dim, q, sign)
    g = build(spec)
    assert len(g) == order_formula(spec)
    assert form_check(g)


def test_psl2_4_is_simple_of_order_60():
    g = build(ClassicalSpec("PSL", 2, 4))
    assert len(g) == 60
    from sylowkit.groups import derived_subgroup

    assert len(derived_subgroup(g)) == 60  # perfect


def test_symplectic_form_matrix():
    J = standard_forms(ClassicalSpec("Sp", 2, 3))["matrix"]
    f = ff_make(3, 1)
    assert J[0, 1] == 1 and J[1, 0] == int(f.neg_t[1]) and J[0, 0] == J[1, 1] == 0


def test_hermitian_form_matrix():
    H = standard_forms(ClassicalSpec("U", 2, 4))["matrix"]
    assert H[0, 1] == H[1, 0] == 1 and H[0, 0] == H[1, 1] == 0


def test_minus_type_binary_form_is_anisotropic():
    spec = ClassicalSpec("O", 2, 3, "-")
    U = standard_forms(spec)["matrix"]
    f = ff_make(3, 1)
    nonzero = 0
    for x in range(3):
        for y in range(3):
            qv = (U[0, 0] * x * x + U[0, 1] * x * y + U[1, 1] * y * y) % 3
            if (x, y) != (0, 0):
                assert qv != 0
                nonzero += 1
    assert nonzero == 8
    assert len(build(spec)) == 8


def test_omega_examples():
    om, idx = omega_subgroup(build(ClassicalSpec("O", 2, 5, "+")))
    assert len(om) == 2 and idx == 4
    om, idx = omega_subgroup(build(ClassicalSpec("O", 3, 3)))
    assert len(om) == 12 and idx == 4
    # Omega(3,3) ~ A_4, built independently as the derived subgroup of S_4
    from sylowkit.groups import derived_subgroup, symmetric

    a4 = derived_subgroup(symmetric(4))
    assert is_isomorphic(om, a4).isomorphic
    om, idx = omega_subgroup(build(ClassicalSpec("O", 4, 2, "-")))
    assert len(om) == 60 and idx == 2


def test_omega_plus_4_2_dickson_not_derived():
    # the exceptional case: the derived subgroup has index 4, the Dickson
    # kernel index 2
    o = build(ClassicalSpec("O", 4, 2, "+"))
    from sylowkit.groups import derived_subgroup

    assert len(derived_subgroup(o)) == 18
    om, idx = omega_subgroup(o)
    assert len(om) == 36 and idx == 2


def test_psp2q_isomorphic_psl2q():
    for q in (3, 4, 5):
        a = build(ClassicalSpec("PSp", 2, q))
        b = build(ClassicalSpec("PSL", 2, q))
        assert is_isomorphic(a, b).isomorphic, q


def test_odd_char2_orthogonal_matches_symplectic():
    for m, r in [(1, 1), (1, 2), (2, 1)]:
        o = build(ClassicalSpec("O", 2 * m + 1, 2**r))
        sp = build(ClassicalSpec("Sp", 2 * m, 2**r))
        assert len(o) == len(sp)
        res = is_isomorphic(o, sp)
        assert res.isomorphic


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        build(ClassicalSpec("GL", 4, 5), budget=10**6)


def test_build_is_cached():
    assert build(ClassicalSpec("PSL", 2, 5)) is build(ClassicalSpec("PSL", 2, 5))
