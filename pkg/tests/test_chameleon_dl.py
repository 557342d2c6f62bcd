"""Discrete-log chameleon hash: worked values, inversion and key recovery.

The small instance is p = 23 = 2*11 + 1, g = 4 generating the order-11
subgroup {1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18}.
"""

import pytest
from hypothesis import given, settings, strategies as st

from toosign import chameleon
from toosign.chameleon import (
    ChameleonKind,
    CollisionVerdict,
    DLInstance,
    DLTrapdoor,
    RangeSample,
)
from toosign.errors import DomainError
from toosign.rng import rng_from_int

P, Q, G = 23, 11, 4
SUBGROUP = sorted(pow(G, i, P) for i in range(Q))


def fixed_instance():
    # x = 3, so y = 4^3 mod 23 = 18
    return DLInstance(p=P, q_grp=Q, g=G, y=18), DLTrapdoor(x=3)


def test_worked_example_values():
    inst, td = fixed_instance()
    assert inst.y == 18
    # h(2, 5) = 4^2 * 18^5 mod 23
    assert chameleon.ch_hash(inst, 2, 5) == 2
    # reopen the same point at m = 7: r = (2 - 7) * 3^{-1} + 5 mod 11
    sample = RangeSample(element=2, trace_message=2, trace_randomness=5)
    assert chameleon.ch_invert(inst, td, 7, sample) == 7
    assert chameleon.ch_hash(inst, 7, 7) == 2


def test_collision_recovers_trapdoor():
    inst, td = fixed_instance()
    pair1, pair2 = (2, 5), (7, 7)
    assert chameleon.check_collision(inst, pair1, pair2) is CollisionVerdict.VALID
    assert chameleon.dl_recover_trapdoor(inst, pair1, pair2) == 3


def test_recover_rejects_non_collision():
    inst, _ = fixed_instance()
    with pytest.raises(DomainError):
        chameleon.dl_recover_trapdoor(inst, (2, 5), (2, 6))


def test_equal_pairs_are_trivial():
    inst, _ = fixed_instance()
    assert chameleon.check_collision(inst, (2, 5), (2, 5)) is CollisionVerdict.TRIVIAL


def test_keygen_produces_working_trapdoor():
    inst, td = chameleon.hg(ChameleonKind.DL, {"name": "dl-demo"}, rng_from_int(7))
    assert pow(inst.g, td.x, inst.p) == inst.y
    assert 1 <= td.x < inst.q_grp


@given(st.integers(0, Q - 1), st.integers(0, Q - 1), st.integers(0, Q - 1))
def test_inversion_exhaustive_property(m_trace, r_trace, m_new):
    inst, td = fixed_instance()
    target = chameleon.ch_hash(inst, m_trace, r_trace)
    sample = RangeSample(element=target, trace_message=m_trace, trace_randomness=r_trace)
    r_new = chameleon.ch_invert(inst, td, m_new, sample)
    assert chameleon.ch_hash(inst, m_new, r_new) == target


def test_hash_lands_in_subgroup():
    inst, _ = fixed_instance()
    values = {chameleon.ch_hash(inst, m, r) for m in range(Q) for r in range(Q)}
    assert values == set(SUBGROUP)


def test_uniform_over_subgroup_for_every_message():
    """For each fixed m, r -> h(m, r) is a bijection onto the subgroup."""
    inst, _ = fixed_instance()
    for m in range(Q):
        images = [chameleon.ch_hash(inst, m, r) for r in range(Q)]
        assert sorted(images) == SUBGROUP


def test_domain_checks():
    inst, td = fixed_instance()
    with pytest.raises(DomainError):
        chameleon.ch_hash(inst, 11, 0)
    with pytest.raises(DomainError):
        chameleon.ch_hash(inst, 0, -1)


def test_rejects_bad_group_parameters():
    with pytest.raises(DomainError):
        chameleon.hg_dl(p=15, q_grp=7, g=2, rng=rng_from_int(0))  # p not prime
    with pytest.raises(DomainError):
        chameleon.hg_dl(p=23, q_grp=7, g=4, rng=rng_from_int(0))  # p != 2q+1


def test_large_group_round_trip():
    inst, td = chameleon.hg(ChameleonKind.DL, {"name": "dl-2048"}, rng_from_int(8))
    rng = rng_from_int(9)
    sample = chameleon.sample_range(inst, rng)
    m_new = chameleon.sample_message(inst, rng)
    r_new = chameleon.ch_invert(inst, td, m_new, sample)
    assert chameleon.ch_hash(inst, m_new, r_new) == sample.element


def test_instance_serialization_round_trip():
    inst, td = fixed_instance()
    inst2 = chameleon.deserialize_instance(chameleon.serialize_instance(inst))
    assert inst2 == inst
    td2 = chameleon.deserialize_trapdoor(chameleon.serialize_trapdoor(inst, td), inst2)
    assert td2.x == td.x
