"""The strong-unforgeability transform.

Key generation composes a base scheme key with a chameleon hash; signing
commits to a random range value C, signs C with the base scheme, hashes the
(message, base-signature) pair through the oracle, and uses the trapdoor to
open the chameleon hash at that point back to C.  Verification recomputes C
and defers to the base verifier.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from typing import Optional

from . import chameleon, encoding
from .chameleon import (
    ChameleonInstance,
    ChameleonKind,
    ChameleonTrapdoor,
    RangeSample,
)
from .errors import FormatError, ToosignError
from .oracle import OracleContext, frame
from .registry import (
    KeyPair,
    MessageSpaceKind,
    SchemeDescriptor,
    Signature,
    scheme_keygen,
    scheme_sign,
    scheme_verify,
)
from .rng import Rng


@dataclass(frozen=True)
class TransformedKeyPair:
    base: KeyPair
    ch_inst: ChameleonInstance
    ch_td: ChameleonTrapdoor

    def public_bytes(self) -> bytes:
        return encoding.encode_record(
            encoding.TAG_TRANSFORMED_PK,
            [
                self.base.descriptor.serialize(),
                self.base.public_key,
                chameleon.serialize_instance(self.ch_inst),
            ],
        )

    def secret_bytes(self) -> bytes:
        return encoding.encode_record(
            encoding.TAG_TRANSFORMED_SK,
            [
                self.base.descriptor.serialize(),
                self.base.secret_key,
                chameleon.serialize_trapdoor(self.ch_inst, self.ch_td),
                self.base.state or b"",
            ],
        )


@dataclass(frozen=True)
class TransformedPublicKey:
    base_descriptor: SchemeDescriptor
    base_pk: bytes
    ch_inst: ChameleonInstance

    @staticmethod
    def deserialize(blob: bytes) -> "TransformedPublicKey":
        _, fields = encoding.decode_record(blob, encoding.TAG_TRANSFORMED_PK)
        return TransformedPublicKey(
            base_descriptor=SchemeDescriptor.deserialize(fields[0]),
            base_pk=fields[1],
            ch_inst=chameleon.deserialize_instance(fields[2]),
        )


def keypair_from_secret(blob: bytes, public_blob: bytes) -> TransformedKeyPair:
    pub = TransformedPublicKey.deserialize(public_blob)
    _, fields = encoding.decode_record(blob, encoding.TAG_TRANSFORMED_SK)
    descriptor = SchemeDescriptor.deserialize(fields[0])
    td = chameleon.deserialize_trapdoor(fields[2], pub.ch_inst)
    base = KeyPair(
        public_key=pub.base_pk,
        secret_key=fields[1],
        descriptor=descriptor,
        state=fields[3] or None,
    )
    return TransformedKeyPair(base=base, ch_inst=pub.ch_inst, ch_td=td)


@dataclass(frozen=True)
class TransformedSignature:
    base_sig: Signature
    randomness: object

    def serialize(self, inst: ChameleonInstance) -> bytes:
        return encoding.encode_record(
            encoding.TAG_TRANSFORMED_SIG,
            [
                self.base_sig.bytes,
                chameleon.serialize_randomness(inst, self.randomness),
            ],
        )


def deserialize_signature(
    blob: bytes, inst: ChameleonInstance, base_descriptor: SchemeDescriptor
) -> TransformedSignature:
    _, fields = encoding.decode_record(blob, encoding.TAG_TRANSFORMED_SIG)
    if len(fields) != 2:
        raise FormatError("transformed signature needs exactly two fields")
    return TransformedSignature(
        base_sig=Signature(bytes=fields[0], descriptor=base_descriptor),
        randomness=chameleon.deserialize_randomness(inst, fields[1]),
    )


def encode_range_value(
    inst: ChameleonInstance, elem, base_descriptor: SchemeDescriptor
) -> bytes:
    """Range value C as a base-scheme message (digested for fixed-width schemes)."""
    canonical = chameleon.serialize_range_element(inst, elem)
    if base_descriptor.message_space_kind is MessageSpaceKind.FIXED_WIDTH_DIGEST:
        return hashlib.sha256(canonical).digest()
    return canonical


def g_prime(
    base_descriptor: SchemeDescriptor,
    ch_kind: ChameleonKind,
    ch_params: dict,
    rng: Rng,
) -> TransformedKeyPair:
    base = scheme_keygen(base_descriptor, rng.fork(b"base-keygen"))
    inst, td = chameleon.hg(ch_kind, ch_params, rng.fork(b"chameleon-hg"))
    return TransformedKeyPair(base=base, ch_inst=inst, ch_td=td)


def s_prime(
    kp: TransformedKeyPair, message: bytes, oracle: OracleContext, rng: Rng
) -> tuple[TransformedSignature, TransformedKeyPair]:
    """Sign, returning the signature and the key pair with advanced state.

    Atomic: on any failure the base-scheme state is not advanced.
    """
    c_sample = chameleon.sample_range(kp.ch_inst, rng)
    base_msg = encode_range_value(kp.ch_inst, c_sample.element, kp.base.descriptor)
    base_sig, new_state = scheme_sign(kp.base, base_msg, rng)
    m = oracle.eval(frame(message, base_sig.bytes))
    r = chameleon.ch_invert(kp.ch_inst, kp.ch_td, m, c_sample, rng)
    sig = TransformedSignature(base_sig=base_sig, randomness=r)
    return sig, replace(kp, base=kp.base.with_state(new_state))


def v_prime(
    pk: TransformedPublicKey,
    message: bytes,
    sig: TransformedSignature,
    oracle: OracleContext,
) -> bool:
    """Total on arbitrary input: malformed signatures reject, never raise."""
    try:
        m = oracle.eval(frame(message, sig.base_sig.bytes))
        c = chameleon.ch_hash(pk.ch_inst, m, sig.randomness)
        base_msg = encode_range_value(pk.ch_inst, c, pk.base_descriptor)
        return scheme_verify(pk.base_pk, base_msg, sig.base_sig)
    except ToosignError:
        return False


def public_key_of(kp: TransformedKeyPair) -> TransformedPublicKey:
    return TransformedPublicKey(
        base_descriptor=kp.base.descriptor,
        base_pk=kp.base.public_key,
        ch_inst=kp.ch_inst,
    )
