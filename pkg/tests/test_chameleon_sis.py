"""Lattice chameleon hash: gadget trapdoor, preimage sampling, collisions."""

import numpy as np
import pytest

from toosign import chameleon
from toosign.chameleon import ChameleonKind, CollisionVerdict, RangeSample
from toosign.errors import DimensionError, SamplerError, TrivialCollisionError
from toosign.gaussian import DiscreteGaussian
from toosign.rng import rng_from_int
from toosign.sis import (
    derive_params,
    gadget_decompose,
    gadget_matrix,
    sample_trapdoor,
    trapdoor_relation_holds,
)

DESK = {"n": 4, "q": 257, "m": 12, "k": 8}
TINY = {"n": 2, "q": 7, "m": 8, "k": 2}


def make_instance(params=DESK, seed=0):
    return chameleon.hg(ChameleonKind.SIS, params, rng_from_int(seed))


def test_derive_params_desk():
    p = derive_params(**DESK)
    # 8 gadget columns split into t = 2 base-17 digits per coordinate
    assert (p.t, p.b, p.w, p.m_bar) == (2, 17, 8, 4)
    assert p.b**p.t >= p.q


def test_derive_params_tiny():
    p = derive_params(**TINY)
    assert (p.t, p.b) == (3, 2)


def test_too_small_m_rejected():
    with pytest.raises(DimensionError):
        derive_params(n=4, q=257, m=7, k=8)


def test_gadget_decompose_reconstructs():
    p = derive_params(**DESK)
    G = gadget_matrix(p)
    rng = rng_from_int(1)
    for _ in range(50):
        v = np.array([rng.randbelow(p.q) for _ in range(p.n)], dtype=np.int64)
        z = gadget_decompose(p, v)
        assert np.all(z >= 0) and np.all(z < p.b)
        assert np.array_equal((G @ z) % p.q, v % p.q)


def test_trapdoor_relation():
    p = derive_params(**DESK)
    B, R = sample_trapdoor(p, rng_from_int(2))
    assert trapdoor_relation_holds(p, B, R)
    assert set(np.unique(R)) <= {-1, 1}


def test_hash_inversion_round_trip():
    inst, td = make_instance()
    rng = rng_from_int(3)
    for _ in range(25):
        sample = chameleon.sample_range(inst, rng)
        m_new = chameleon.sample_message(inst, rng)
        r_new = chameleon.ch_invert(inst, td, m_new, sample, rng)
        assert np.array_equal(chameleon.ch_hash(inst, m_new, r_new), sample.element)
        assert float(np.linalg.norm(r_new)) <= inst.params.norm_bound


def test_inversion_needs_rng():
    inst, td = make_instance()
    sample = chameleon.sample_range(inst, rng_from_int(4))
    m_new = chameleon.sample_message(inst, rng_from_int(5))
    with pytest.raises(SamplerError):
        chameleon.ch_invert(inst, td, m_new, sample)


def test_collision_yields_short_kernel_vector():
    inst, td = make_instance()
    p = inst.params
    rng = rng_from_int(6)
    sample = chameleon.sample_range(inst, rng)
    m2 = chameleon.sample_message(inst, rng)
    r2 = chameleon.ch_invert(inst, td, m2, sample, rng)
    pair1 = (sample.trace_message, sample.trace_randomness)
    pair2 = (m2, r2)
    assert chameleon.check_collision(inst, pair1, pair2) is CollisionVerdict.VALID
    z = chameleon.sis_collision_to_short_vector(inst, pair1, pair2)
    assert np.any(z != 0)
    AB = np.concatenate([inst.A, inst.B], axis=1)
    assert np.all((AB @ z) % p.q == 0)
    assert float(np.linalg.norm(z)) <= np.sqrt(p.k) + 2 * p.s * np.sqrt(p.m)


def test_trivial_collision_rejected():
    inst, _ = make_instance()
    rng = rng_from_int(7)
    m = chameleon.sample_message(inst, rng)
    r = chameleon.sample_randomness(inst, rng)
    with pytest.raises(TrivialCollisionError):
        chameleon.sis_collision_to_short_vector(inst, (m, r), (m, r))


def test_serialization_round_trips():
    inst, td = make_instance(seed=8)
    inst2 = chameleon.deserialize_instance(chameleon.serialize_instance(inst))
    assert np.array_equal(inst2.A, inst.A) and np.array_equal(inst2.B, inst.B)
    td2 = chameleon.deserialize_trapdoor(chameleon.serialize_trapdoor(inst, td), inst2)
    assert np.array_equal(td2.R, td.R)
    rng = rng_from_int(9)
    r = chameleon.sample_randomness(inst, rng)
    r2 = chameleon.deserialize_randomness(inst, chameleon.serialize_randomness(inst, r))
    assert np.array_equal(r2, r)


def test_gaussian_moments():
    g = DiscreteGaussian(8.0)
    xs = g.sample_vector(rng_from_int(10), 20000).astype(float)
    # D_{Z,s} with rho(x) = exp(-pi x^2 / s^2) has variance close to s^2/(2 pi)
    assert abs(xs.mean()) < 0.2
    assert abs(xs.std() - 8.0 / np.sqrt(2 * np.pi)) < 0.15


def test_gaussian_symmetry():
    g = DiscreteGaussian(4.0)
    xs = g.sample_vector(rng_from_int(11), 20000)
    pos, neg = int((xs > 0).sum()), int((xs < 0).sum())
    assert abs(pos - neg) < 600
