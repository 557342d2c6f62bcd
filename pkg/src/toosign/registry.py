"""Scheme-agnostic signature abstraction and registry.

A base scheme is a (keygen, sign, verify) triple registered under a small
integer id.  Keys, signatures and per-key state are opaque byte strings at
this layer; each scheme module imposes its own structure.  Stateful schemes
carry explicit state in the KeyPair and signing returns the updated state;
the caller persists it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional

from . import encoding
from .errors import RegistryError
from .rng import Rng


class MessageSpaceKind(Enum):
    ARBITRARY_BYTES = "arbitrary-bytes"
    FIXED_WIDTH_DIGEST = "fixed-width-digest"


@dataclass(frozen=True)
class SchemeDescriptor:
    scheme_id: int
    param_blob: bytes
    message_space_kind: MessageSpaceKind

    def serialize(self) -> bytes:
        return encoding.encode_record(
            encoding.TAG_DESCRIPTOR,
            [
                bytes([self.scheme_id]),
                self.param_blob,
                self.message_space_kind.value.encode(),
            ],
        )

    @staticmethod
    def deserialize(blob: bytes) -> "SchemeDescriptor":
        _, fields = encoding.decode_record(blob, encoding.TAG_DESCRIPTOR)
        return SchemeDescriptor(
            scheme_id=fields[0][0],
            param_blob=fields[1],
            message_space_kind=MessageSpaceKind(fields[2].decode()),
        )


@dataclass(frozen=True)
class KeyPair:
    public_key: bytes
    secret_key: bytes
    descriptor: SchemeDescriptor
    state: Optional[bytes] = None

    def with_state(self, state: Optional[bytes]) -> "KeyPair":
        return replace(self, state=state)


@dataclass(frozen=True)
class Signature:
    bytes: bytes  # noqa: A003 - field name fixed by the wire contract
    descriptor: SchemeDescriptor


@dataclass(frozen=True)
class SchemeImpl:
    """Registered implementation of one base signature scheme."""

    scheme_id: int
    name: str
    keygen: Callable[[SchemeDescriptor, Rng], KeyPair]
    sign: Callable[[KeyPair, bytes, Rng], tuple[Signature, Optional[bytes]]]
    verify: Callable[[bytes, bytes, Signature], bool]


_REGISTRY: dict[int, SchemeImpl] = {}


def register_scheme(impl: SchemeImpl) -> None:
    if impl.scheme_id in _REGISTRY:
        raise RegistryError(f"scheme id {impl.scheme_id} already registered")
    _REGISTRY[impl.scheme_id] = impl


def get_scheme(scheme_id: int) -> SchemeImpl:
    try:
        return _REGISTRY[scheme_id]
    except KeyError:
        raise RegistryError(f"unknown scheme id {scheme_id}") from None


def scheme_keygen(descriptor: SchemeDescriptor, rng: Rng) -> KeyPair:
    return get_scheme(descriptor.scheme_id).keygen(descriptor, rng)


def scheme_sign(kp: KeyPair, message: bytes, rng: Rng) -> tuple[Signature, Optional[bytes]]:
    """Sign, returning the signature and the advanced state (or None)."""
    return get_scheme(kp.descriptor.scheme_id).sign(kp, message, rng)


def scheme_verify(pk: bytes, message: bytes, sig: Signature) -> bool:
    """Total on arbitrary byte strings: malformed input rejects, never raises."""
    try:
        impl = get_scheme(sig.descriptor.scheme_id)
    except RegistryError:
        return False
    try:
        return impl.verify(pk, message, sig)
    except Exception:
        return False
