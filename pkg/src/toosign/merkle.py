"""Stateful Lamport one-time signatures lifted by a Merkle tree.

This is the reference existentially-unforgeable base scheme fed to the
transform.  Messages are 256-bit digests; each leaf is a full-reveal Lamport
key (two 32-byte preimages per message bit) and the tree root is the public
key.  The secret key caches every tree node so signing only re-derives one
leaf's preimages plus an authentication path.
"""

from __future__ import annotations

import hashlib

from . import encoding
from .errors import CapacityError, DomainError, FormatError
from .registry import (
    KeyPair,
    MessageSpaceKind,
    SchemeDescriptor,
    SchemeImpl,
    Signature,
    register_scheme,
)
from .rng import Rng

SCHEME_ID_MERKLE = 1

DIGEST_BITS = 256
HASH = hashlib.sha256


def merkle_descriptor(height: int) -> SchemeDescriptor:
    if not 1 <= height <= 20:
        raise DomainError("tree height must be in [1, 20]")
    return SchemeDescriptor(
        scheme_id=SCHEME_ID_MERKLE,
        param_blob=bytes([height]),
        message_space_kind=MessageSpaceKind.FIXED_WIDTH_DIGEST,
    )


def _leaf_preimages(seed: bytes, leaf: int) -> bytes:
    """512 preimages of 32 bytes each, as one XOF output."""
    xof = hashlib.shake_256(seed + b"/leaf/" + leaf.to_bytes(4, "big"))
    return xof.digest(2 * DIGEST_BITS * 32)


def _leaf_public(preimages: bytes) -> tuple[bytes, bytes]:
    """(leaf public key hash, concatenated per-preimage hashes)."""
    hashes = b"".join(
        HASH(preimages[i * 32 : (i + 1) * 32]).digest() for i in range(2 * DIGEST_BITS)
    )
    return HASH(hashes).digest(), hashes


def _build_tree(leaf_pubs: list[bytes]) -> list[list[bytes]]:
    """Levels bottom-up; level 0 is the leaves, last level is [root]."""
    levels = [leaf_pubs]
    while len(levels[-1]) > 1:
        prev = levels[-1]
        levels.append(
            [HASH(prev[i] + prev[i + 1]).digest() for i in range(0, len(prev), 2)]
        )
    return levels


def _digest_bits(digest: bytes) -> list[int]:
    return [(digest[j // 8] >> (7 - j % 8)) & 1 for j in range(DIGEST_BITS)]


def merkle_keygen(descriptor: SchemeDescriptor, rng: Rng) -> KeyPair:
    height = descriptor.param_blob[0]
    seed = rng.random_bytes(32)
    leaf_pubs = []
    for leaf in range(1 << height):
        pub, _ = _leaf_public(_leaf_preimages(seed, leaf))
        leaf_pubs.append(pub)
    levels = _build_tree(leaf_pubs)
    root = levels[-1][0]
    nodes = b"".join(b"".join(level) for level in levels)
    public_key = encoding.encode_record(encoding.TAG_MERKLE_PK, [bytes([height]), root])
    secret_key = encoding.encode_record(
        encoding.TAG_MERKLE_SK, [bytes([height]), seed, nodes]
    )
    return KeyPair(
        public_key=public_key,
        secret_key=secret_key,
        descriptor=descriptor,
        state=(0).to_bytes(8, "big"),
    )


def _parse_secret(secret_key: bytes) -> tuple[int, bytes, list[list[bytes]]]:
    _, fields = encoding.decode_record(secret_key, encoding.TAG_MERKLE_SK)
    height = fields[0][0]
    seed = fields[1]
    nodes = fields[2]
    levels = []
    pos = 0
    width = 1 << height
    while width >= 1:
        levels.append([nodes[pos + 32 * i : pos + 32 * (i + 1)] for i in range(width)])
        pos += 32 * width
        width //= 2
    return height, seed, levels


def merkle_sign(kp: KeyPair, digest: bytes, rng: Rng) -> tuple[Signature, bytes]:
    if len(digest) != 32:
        raise DomainError("merkle scheme signs 32-byte digests")
    height, seed, levels = _parse_secret(kp.secret_key)
    next_leaf = int.from_bytes(kp.state or b"\x00" * 8, "big")
    if next_leaf >= (1 << height):
        raise CapacityError(f"all {1 << height} leaves consumed")
    preimages = _leaf_preimages(seed, next_leaf)
    _, hashes = _leaf_public(preimages)
    revealed = bytearray()
    complement = bytearray()
    for j, bit in enumerate(_digest_bits(digest)):
        revealed += preimages[(2 * j + bit) * 32 : (2 * j + bit + 1) * 32]
        complement += hashes[(2 * j + 1 - bit) * 32 : (2 * j + 2 - bit) * 32]
    path = bytearray()
    idx = next_leaf
    for level in range(height):
        path += levels[level][idx ^ 1]
        idx //= 2
    sig_bytes = encoding.encode_record(
        encoding.TAG_MERKLE_SIG,
        [next_leaf.to_bytes(4, "big"), bytes(revealed), bytes(complement), bytes(path)],
    )
    new_state = (next_leaf + 1).to_bytes(8, "big")
    return Signature(bytes=sig_bytes, descriptor=kp.descriptor), new_state


def merkle_verify(pk: bytes, digest: bytes, sig: Signature) -> bool:
    try:
        _, pk_fields = encoding.decode_record(pk, encoding.TAG_MERKLE_PK)
        height = pk_fields[0][0]
        root = pk_fields[1]
        _, fields = encoding.decode_record(sig.bytes, encoding.TAG_MERKLE_SIG)
        leaf_index_b, revealed, complement, path = fields
    except (FormatError, ValueError):
        return False
    if len(digest) != 32 or len(root) != 32 or len(leaf_index_b) != 4:
        return False
    if len(revealed) != DIGEST_BITS * 32 or len(complement) != DIGEST_BITS * 32:
        return False
    if len(path) != height * 32:
        return False
    leaf_index = int.from_bytes(leaf_index_b, "big")
    if leaf_index >= (1 << height):
        return False
    hashes = bytearray()
    for j, bit in enumerate(_digest_bits(digest)):
        y_revealed = HASH(revealed[j * 32 : (j + 1) * 32]).digest()
        y_other = complement[j * 32 : (j + 1) * 32]
        if bit == 0:
            hashes += y_revealed + y_other
        else:
            hashes += y_other + y_revealed
    node = HASH(bytes(hashes)).digest()
    idx = leaf_index
    for level in range(height):
        sibling = path[level * 32 : (level + 1) * 32]
        if idx % 2 == 0:
            node = HASH(node + sibling).digest()
        else:
            node = HASH(sibling + node).digest()
        idx //= 2
    return node == root


register_scheme(
    SchemeImpl(
        scheme_id=SCHEME_ID_MERKLE,
        name="lamport-merkle",
        keygen=merkle_keygen,
        sign=merkle_sign,
        verify=merkle_verify,
    )
)
