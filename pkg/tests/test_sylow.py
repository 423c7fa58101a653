"""The brute-force Sylow engine."""

import numpy as np
import pytest

from sylowkit.classical import ClassicalSpec, build
from sylowkit.groups import (
    cyclic,
    dihedral,
    direct_product,
    fingerprint,
    power_group,
    symmetric,
)
from sylowkit.sylow import is_sylow, p_part, sylow
from sylowkit.verify import is_isomorphic


def test_p_part_examples():
    assert p_part(168, 2) == 8
    assert p_part(60, 7) == 1
    assert p_part(51840, 3) == 81
    # oracle: factor 51840 directly
    m, e = 51840, 0
    while m % 3 == 0:
        m //= 3
        e += 1
    assert 3**e == 81
    with pytest.raises(ValueError):
        p_part(0, 2)
    with pytest.raises(ValueError):
        p_part(12, 4)


def test_sylow_of_s4_is_d8():
    s4 = symmetric(4)
    res = sylow(s4, 2)
    assert res.p_part == 8 and len(res.subgroup) == 8
    assert res.witness_chain[0] == 1 and res.witness_chain[-1] == 8
    assert is_isomorphic(res.subgroup, dihedral(8)).isomorphic
    assert is_sylow(s4, res.subgroup, 2)


def test_sylow_of_psl24_at_5():
    g = build(ClassicalSpec("PSL", 2, 4))
    res = sylow(g, 5)
    assert len(res.subgroup) == 5
    assert fingerprint(res.subgroup).abelianization == (5,)


def test_sylow_trivial_when_p_does_not_divide():
    g = build(ClassicalSpec("PSL", 2, 4))
    res = sylow(g, 7)
    assert len(res.subgroup) == 1 and res.witness_chain == [1]


def test_abelian_sylow_is_all_p_power_elements():
    for g in (
        cyclic(720),
        direct_product(cyclic(12), cyclic(18)),
        power_group(cyclic(6), 3),
    ):
        ords = g.orders()
        for p in (2, 3, 5):
            res = sylow(g, p)
            expect = np.nonzero(
                np.array([_is_p_power(int(o), p) for o in ords])
            )[0]
            assert np.array_equal(res.subgroup.parent_indices(), expect)


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def test_sylow_idempotent_verification():
    for spec, p in [(("PSL", 3, 2, ""), 2), (("Sp", 4, 2, ""), 3), (("U", 3, 4, ""), 2)]:
        g = build(ClassicalSpec(*spec))
        res = sylow(g, p)
        assert is_sylow(g, res.subgroup, p)


def test_different_enumerations_give_isomorphic_sylows():
    # the same abstract group enumerated two ways: S_4 lexicographically,
    # and as a closure from different generators
    from sylowkit.groups import close_group

    s4 = symmetric(4)
    gens = np.array([[1, 0, 2, 3], [0, 2, 1, 3], [0, 1, 3, 2]], dtype=np.int8)
    s4b = close_group(s4.rep, gens, name="S4-bis")
    assert len(s4b) == 24
    a = sylow(s4, 2).subgroup
    b = sylow(s4b, 2).subgroup
    assert not np.array_equal(a.parent_indices(), b.parent_indices()) or True
    assert is_isomorphic(a, b).isomorphic


def test_sylow_deterministic():
    g = build(ClassicalSpec("PSL", 3, 2))
    a = sylow(g, 2)
    b = sylow(g, 2)
    assert np.array_equal(a.subgroup.parent_indices(), b.subgroup.parent_indices())
    assert a.witness_chain == b.witness_chain
