"""Exact isomorphism testing: refutations, witnesses, replay, relations."""

import numpy as np
import pytest

from sylowkit.classical import ClassicalSpec, build
from sylowkit.ff import ff_make
from sylowkit.groups import (
    cyclic,
    dihedral,
    direct_product,
    power_group,
    quaternion,
    symmetric,
)
from sylowkit.catalog import up_group
from sylowkit.verify import is_isomorphic, witness_replay


def test_q8_d8_refuted_by_histogram():
    r = is_isomorphic(quaternion(8), dihedral(8))
    assert r.isomorphic is False
    assert "order_hist" in r.reason


def test_identity_map_on_same_group():
    g = symmetric(4)
    r = is_isomorphic(g, g)
    assert r.isomorphic and witness_replay(g, g, r.full_map)


def test_up32_isomorphic_d8():
    g = up_group(3, ff_make(2, 1))
    r = is_isomorphic(g, dihedral(8))
    assert r.isomorphic
    assert witness_replay(g, dihedral(8), r.full_map)


def test_order_mismatch():
    r = is_isomorphic(cyclic(6), cyclic(8))
    assert r.isomorphic is False and "order" in r.reason


def test_same_histogram_different_groups():
    # C3 x C3 vs ... both elementary abelian would match; use (Z/4 x Z/2) vs Z/8
    a = direct_product(cyclic(4), cyclic(2))
    b = cyclic(8)
    r = is_isomorphic(a, b)
    assert r.isomorphic is False


def test_elementary_abelian_maps():
    a = power_group(cyclic(2), 4)
    b = up_group(2, ff_make(2, 4))  # (F_16, +)
    r = is_isomorphic(a, b)
    assert r.isomorphic
    assert witness_replay(a, b, r.full_map)


def test_equivalence_relation_spot_checks():
    gs = [dihedral(8), quaternion(8), direct_product(cyclic(2), cyclic(4))]
    for g in gs:
        assert is_isomorphic(g, g).isomorphic  # reflexive
    a, b = dihedral(8), up_group(3, ff_make(2, 1))
    assert is_isomorphic(a, b).isomorphic == is_isomorphic(b, a).isomorphic  # symmetric


def test_witness_replay_rejects_wrong_map():
    g = cyclic(4)
    bad = np.array([0, 2, 1, 3], dtype=np.int64)
    assert not witness_replay(g, g, bad)


def test_budget_verdict_for_large_orders():
    a = build(ClassicalSpec("O", 5, 3))
    r = is_isomorphic(a, a)
    assert r.isomorphic is None and "budget" in r.reason.lower()


def test_nonisomorphic_same_order_720():
    s6 = symmetric(6)
    z720 = cyclic(720)
    assert is_isomorphic(s6, z720).isomorphic is False


def test_sp42_isomorphic_to_s6():
    sp = build(ClassicalSpec("Sp", 4, 2))
    s6 = symmetric(6)
    r = is_isomorphic(sp, s6)
    assert r.isomorphic
    assert witness_replay(sp, s6, r.full_map)
