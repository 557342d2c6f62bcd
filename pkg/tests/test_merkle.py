"""The stateful hash-based one-time-signature tree."""

import hashlib

import pytest

from toosign.errors import CapacityError
from toosign.merkle import merkle_descriptor
from toosign.registry import scheme_keygen, scheme_sign, scheme_verify
from toosign.rng import rng_from_int


def _digest(msg: bytes) -> bytes:
    return hashlib.sha256(msg).digest()


def test_sign_verify_round_trip():
    kp = scheme_keygen(merkle_descriptor(3), rng_from_int(0))
    sig, state = scheme_sign(kp, _digest(b"hello"), rng_from_int(1))
    assert scheme_verify(kp.public_key, _digest(b"hello"), sig)
    assert not scheme_verify(kp.public_key, _digest(b"other"), sig)


def test_signing_is_deterministic_per_leaf():
    kp = scheme_keygen(merkle_descriptor(2), rng_from_int(2))
    s1, _ = scheme_sign(kp, _digest(b"m"), rng_from_int(10))
    s2, _ = scheme_sign(kp, _digest(b"m"), rng_from_int(99))
    assert s1.bytes == s2.bytes


def test_state_advances_and_leaves_differ():
    kp = scheme_keygen(merkle_descriptor(2), rng_from_int(3))
    sigs = []
    for i in range(4):
        sig, state = scheme_sign(kp, _digest(b"m"), rng_from_int(i))
        kp = kp.with_state(state)
        sigs.append(sig)
        assert scheme_verify(kp.public_key, _digest(b"m"), sig)
    assert len({s.bytes for s in sigs}) == 4


def test_capacity_exhaustion_raises():
    kp = scheme_keygen(merkle_descriptor(1), rng_from_int(4))
    for i in range(2):
        _, state = scheme_sign(kp, _digest(b"m"), rng_from_int(i))
        kp = kp.with_state(state)
    with pytest.raises(CapacityError):
        scheme_sign(kp, _digest(b"m"), rng_from_int(9))


def test_tampered_signature_rejected():
    kp = scheme_keygen(merkle_descriptor(2), rng_from_int(5))
    sig, _ = scheme_sign(kp, _digest(b"m"), rng_from_int(0))
    bad = bytearray(sig.bytes)
    bad[-1] ^= 1
    from toosign.registry import Signature

    assert not scheme_verify(
        kp.public_key, _digest(b"m"), Signature(bytes=bytes(bad), descriptor=sig.descriptor)
    )


def test_garbage_signature_rejected_not_raised():
    kp = scheme_keygen(merkle_descriptor(2), rng_from_int(6))
    from toosign.registry import Signature

    sig = Signature(bytes=b"not a signature", descriptor=kp.descriptor)
    assert scheme_verify(kp.public_key, _digest(b"m"), sig) is False
