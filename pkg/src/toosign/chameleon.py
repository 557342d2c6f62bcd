"""Chameleon hash functions with two instantiations.

A chameleon hash h: M x R -> Y is collision resistant without its trapdoor,
but the trapdoor holder can sample, for any message and any target value,
randomness mapping the message to that target.  Two instantiations:

* discrete log: h(m, r) = g^m y^r over a prime-order subgroup of Z_p*;
* lattice (SIS): h(m, r) = A m + B r mod q with a gadget trapdoor for B.

Range values are sampled as hash-of-random-preimage with the trace
(message, randomness) retained, so DL inversion never needs a discrete log.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from . import encoding
from .errors import (
    DegenerateTrapdoorError,
    DomainError,
    FormatError,
    SamplerError,
    TrivialCollisionError,
)
from .gaussian import DiscreteGaussian
from .rng import Rng
from .sis import (
    SISParams,
    derive_params,
    sample_preimage,
    sample_trapdoor,
    trapdoor_relation_holds,
)


class ChameleonKind(Enum):
    DL = "dl"
    SIS = "sis"


class CollisionVerdict(Enum):
    VALID = "valid"
    TRIVIAL = "trivial"
    NOT_COLLISION = "not-collision"


# ---------------------------------------------------------------------------
# instances and trapdoors


@dataclass(frozen=True)
class DLInstance:
    p: int
    q_grp: int
    g: int
    y: int

    kind = ChameleonKind.DL


@dataclass(frozen=True)
class DLTrapdoor:
    x: int


@dataclass(frozen=True)
class SISInstance:
    params: SISParams
    A: np.ndarray  # n x k
    B: np.ndarray  # n x m

    kind = ChameleonKind.SIS


@dataclass(frozen=True)
class SISTrapdoor:
    R: np.ndarray  # m_bar x w


ChameleonInstance = DLInstance | SISInstance
ChameleonTrapdoor = DLTrapdoor | SISTrapdoor


@dataclass(frozen=True)
class RangeSample:
    """A range value together with the (message, randomness) trace producing it."""

    element: object
    trace_message: object
    trace_randomness: object


# ---------------------------------------------------------------------------
# DL parameter sets

# 2048-bit safe prime from the well-known MODP group 14; p = 2q+1 with q prime
# and 2 a quadratic residue (p = 7 mod 8), so g = 2 generates the order-q
# subgroup.
_MODP_2048_P = int(
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF",
    16,
)

DL_PARAM_SETS: dict[str, tuple[int, int, int]] = {
    # name -> (p, q_grp, g); dl-demo is for exhaustive tests, never a default
    "dl-demo": (23, 11, 4),
    "dl-2048": (_MODP_2048_P, (_MODP_2048_P - 1) // 2, 2),
}


def _miller_rabin(n: int, rounds: int = 16) -> bool:
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n == small:
            return True
        if n % small == 0:
            return False
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    # deterministic pseudo-random bases derived from n itself
    base_rng = Rng(hashlib.sha256(b"mr:" + encoding.encode_int(n)).digest())
    for _ in range(rounds):
        a = 2 + base_rng.randbelow(n - 3)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# key generation


def hg_dl(p: int, q_grp: int, g: int, rng: Rng) -> tuple[DLInstance, DLTrapdoor]:
    if not _miller_rabin(p) or not _miller_rabin(q_grp):
        raise DomainError("p and the subgroup order must both be prime")
    if p != 2 * q_grp + 1:
        raise DomainError("need a safe prime: p = 2*q + 1")
    if g <= 1 or g >= p or pow(g, q_grp, p) != 1:
        raise DomainError("g must generate the order-q subgroup")
    x = 1 + rng.randbelow(q_grp - 1)
    return DLInstance(p=p, q_grp=q_grp, g=g, y=pow(g, x, p)), DLTrapdoor(x=x)


def hg_sis(
    n: int, q: int, m: int, k: int, rng: Rng, s: float | None = None
) -> tuple[SISInstance, SISTrapdoor]:
    params = derive_params(n, q, m, k, s)
    A = np.array(
        [[rng.randbelow(q) for _ in range(k)] for _ in range(n)], dtype=np.int64
    )
    B, R = sample_trapdoor(params, rng)
    inst = SISInstance(params=params, A=A, B=B)
    assert trapdoor_relation_holds(params, B, R)
    return inst, SISTrapdoor(R=R)


def hg(
    kind: ChameleonKind, params: dict, rng: Rng
) -> tuple[ChameleonInstance, ChameleonTrapdoor]:
    if kind is ChameleonKind.DL:
        if "name" in params:
            p, q_grp, g = DL_PARAM_SETS[params["name"]]
        else:
            p, q_grp, g = params["p"], params["q_grp"], params["g"]
        return hg_dl(p, q_grp, g, rng)
    return hg_sis(
        params["n"], params["q"], params["m"], params["k"], rng, params.get("s")
    )


# ---------------------------------------------------------------------------
# hashing, sampling, inversion


@lru_cache(maxsize=32)
def _gaussian(s: float) -> DiscreteGaussian:
    return DiscreteGaussian(s)


def _check_dl_scalar(inst: DLInstance, v, what: str) -> int:
    if not isinstance(v, (int, np.integer)) or not 0 <= v < inst.q_grp:
        raise DomainError(f"{what} must be an integer in [0, {inst.q_grp})")
    return int(v)


def _as_bits(inst: SISInstance, m) -> np.ndarray:
    arr = np.asarray(m, dtype=np.int64)
    if arr.shape != (inst.params.k,) or not np.all((arr == 0) | (arr == 1)):
        raise DomainError(f"message must be a 0/1 vector of length {inst.params.k}")
    return arr


def _as_randomness(inst: SISInstance, r) -> np.ndarray:
    arr = np.asarray(r, dtype=np.int64)
    if arr.shape != (inst.params.m,):
        raise DomainError(
            f"randomness must be an integer vector of length {inst.params.m}"
        )
    return arr


def ch_hash(inst: ChameleonInstance, m, r):
    if isinstance(inst, DLInstance):
        mi = _check_dl_scalar(inst, m, "message")
        ri = _check_dl_scalar(inst, r, "randomness")
        return pow(inst.g, mi, inst.p) * pow(inst.y, ri, inst.p) % inst.p
    marr = _as_bits(inst, m)
    rarr = _as_randomness(inst, r)
    return (inst.A @ marr + inst.B @ rarr) % inst.params.q


def sample_message(inst: ChameleonInstance, rng: Rng):
    if isinstance(inst, DLInstance):
        return rng.randbelow(inst.q_grp)
    return np.array(rng.random_bits(inst.params.k), dtype=np.int64)


def sample_randomness(inst: ChameleonInstance, rng: Rng):
    if isinstance(inst, DLInstance):
        return rng.randbelow(inst.q_grp)
    params = inst.params
    gauss = _gaussian(params.s)
    for _ in range(100):
        r = gauss.sample_vector(rng, params.m)
        if float(np.linalg.norm(r)) <= params.norm_bound:
            return r
    raise SamplerError("randomness sampler exceeded retry budget")


def sample_range(inst: ChameleonInstance, rng: Rng) -> RangeSample:
    m = sample_message(inst, rng)
    r = sample_randomness(inst, rng)
    return RangeSample(element=ch_hash(inst, m, r), trace_message=m, trace_randomness=r)


def ch_invert(
    inst: ChameleonInstance,
    td: ChameleonTrapdoor,
    m,
    target: RangeSample,
    rng: Rng | None = None,
):
    """Randomness r with ch_hash(inst, m, r) == target.element.

    DL inversion is exact algebra on the retained trace and consumes no
    randomness.  SIS inversion is gadget preimage sampling and requires rng.
    """
    if isinstance(inst, DLInstance):
        mi = _check_dl_scalar(inst, m, "message")
        if td.x % inst.q_grp == 0:
            raise DegenerateTrapdoorError("trapdoor exponent is zero")
        m_t = _check_dl_scalar(inst, target.trace_message, "trace message")
        r_t = _check_dl_scalar(inst, target.trace_randomness, "trace randomness")
        x_inv = pow(td.x, -1, inst.q_grp)
        return ((m_t - mi) * x_inv + r_t) % inst.q_grp
    if rng is None:
        raise SamplerError("SIS inversion needs an rng")
    marr = _as_bits(inst, m)
    params = inst.params
    target_vec = np.asarray(target.element, dtype=np.int64)
    syndrome = (target_vec - inst.A @ marr) % params.q
    return sample_preimage(
        params, inst.B, td.R, syndrome, rng, _gaussian(params.s / 2)
    )


# ---------------------------------------------------------------------------
# collisions


def _pairs_equal(inst: ChameleonInstance, pair1, pair2) -> bool:
    if isinstance(inst, DLInstance):
        return pair1[0] == pair2[0] and pair1[1] == pair2[1]
    return np.array_equal(
        np.asarray(pair1[0]), np.asarray(pair2[0])
    ) and np.array_equal(np.asarray(pair1[1]), np.asarray(pair2[1]))


def elements_equal(inst: ChameleonInstance, a, b) -> bool:
    if isinstance(inst, DLInstance):
        return int(a) == int(b)
    return np.array_equal(np.asarray(a), np.asarray(b))


def check_collision(inst: ChameleonInstance, pair1, pair2) -> CollisionVerdict:
    if _pairs_equal(inst, pair1, pair2):
        return CollisionVerdict.TRIVIAL
    h1 = ch_hash(inst, pair1[0], pair1[1])
    h2 = ch_hash(inst, pair2[0], pair2[1])
    if elements_equal(inst, h1, h2):
        return CollisionVerdict.VALID
    return CollisionVerdict.NOT_COLLISION


def dl_recover_trapdoor(inst: DLInstance, pair1, pair2) -> int:
    """A valid DL collision reveals the trapdoor exponent."""
    if check_collision(inst, pair1, pair2) is not CollisionVerdict.VALID:
        raise DomainError("not a valid collision")
    (m1, r1), (m2, r2) = pair1, pair2
    if r1 == r2:
        raise DegenerateTrapdoorError("collision with equal randomness")
    x = (m1 - m2) * pow(r2 - r1, -1, inst.q_grp) % inst.q_grp
    assert pow(inst.g, x, inst.p) == inst.y
    return x


def sis_collision_to_short_vector(inst: SISInstance, pair1, pair2) -> np.ndarray:
    """Maps a valid SIS collision to a short nonzero z with [A|B] z = 0 mod q."""
    if _pairs_equal(inst, pair1, pair2):
        raise TrivialCollisionError("equal pairs carry no short vector")
    if check_collision(inst, pair1, pair2) is not CollisionVerdict.VALID:
        raise DomainError("not a valid collision")
    dm = np.asarray(pair1[0], dtype=np.int64) - np.asarray(pair2[0], dtype=np.int64)
    dr = np.asarray(pair1[1], dtype=np.int64) - np.asarray(pair2[1], dtype=np.int64)
    z = np.concatenate([dm, dr])
    AB = np.concatenate([inst.A, inst.B], axis=1)
    assert np.all((AB @ z) % inst.params.q == 0)
    return z


# ---------------------------------------------------------------------------
# serialization

# matrices are row-major; entries use the minimal whole-byte width covering
# [0, q)


def _entry_width(q: int) -> int:
    return ((q - 1).bit_length() + 7) // 8 or 1


def pack_matrix(M: np.ndarray, q: int) -> bytes:
    w = _entry_width(q)
    out = bytearray()
    for v in np.asarray(M, dtype=np.int64).reshape(-1) % q:
        out += int(v).to_bytes(w, "big")
    return bytes(out)


def unpack_matrix(blob: bytes, rows: int, cols: int, q: int) -> np.ndarray:
    w = _entry_width(q)
    if len(blob) != rows * cols * w:
        raise FormatError("matrix blob has wrong length")
    flat = [
        int.from_bytes(blob[i * w : (i + 1) * w], "big") for i in range(rows * cols)
    ]
    return np.array(flat, dtype=np.int64).reshape(rows, cols)


def _randomness_width(params: SISParams) -> int:
    bound = int(params.norm_bound) + 1
    return (bound.bit_length() + 1 + 7) // 8


def serialize_instance(inst: ChameleonInstance) -> bytes:
    if isinstance(inst, DLInstance):
        return encoding.encode_record(
            encoding.TAG_DL_INSTANCE,
            [encoding.encode_int(v) for v in (inst.p, inst.q_grp, inst.g, inst.y)],
        )
    p = inst.params
    header = [encoding.encode_int(v) for v in (p.n, p.q, p.m, p.k)]
    return encoding.encode_record(
        encoding.TAG_SIS_INSTANCE,
        header
        + [repr(p.s).encode(), pack_matrix(inst.A, p.q), pack_matrix(inst.B, p.q)],
    )


def deserialize_instance(blob: bytes) -> ChameleonInstance:
    tag, fields = encoding.decode_record(blob)
    if tag == encoding.TAG_DL_INSTANCE:
        p, q_grp, g, y = (encoding.decode_int(f) for f in fields)
        return DLInstance(p=p, q_grp=q_grp, g=g, y=y)
    if tag == encoding.TAG_SIS_INSTANCE:
        n, q, m, k = (encoding.decode_int(f) for f in fields[:4])
        s = float(fields[4].decode())
        params = derive_params(n, q, m, k, s)
        A = unpack_matrix(fields[5], n, k, q)
        B = unpack_matrix(fields[6], n, m, q)
        return SISInstance(params=params, A=A, B=B)
    raise FormatError(f"not a chameleon instance record (tag {tag})")


def serialize_trapdoor(inst: ChameleonInstance, td: ChameleonTrapdoor) -> bytes:
    if isinstance(inst, DLInstance):
        return encoding.encode_record(
            encoding.TAG_DL_TRAPDOOR, [encoding.encode_int(td.x)]
        )
    # stored as the full m x m unimodular matrix [[I, R], [0, I]]; this is the
    # lattice-basis form of the trapdoor and fixes the secret-key overhead at
    # m^2 ring elements
    p = inst.params
    T = np.eye(p.m, dtype=np.int64)
    T[: p.m_bar, p.m_bar :] = td.R
    return encoding.encode_record(encoding.TAG_SIS_TRAPDOOR, [pack_matrix(T, p.q)])


def deserialize_trapdoor(blob: bytes, inst: ChameleonInstance) -> ChameleonTrapdoor:
    tag, fields = encoding.decode_record(blob)
    if tag == encoding.TAG_DL_TRAPDOOR:
        return DLTrapdoor(x=encoding.decode_int(fields[0]))
    if tag == encoding.TAG_SIS_TRAPDOOR:
        p = inst.params
        T = unpack_matrix(fields[0], p.m, p.m, p.q)
        R = T[: p.m_bar, p.m_bar :]
        # entries were reduced into [0, q); map back to signed +-1
        R = np.where(R > p.q // 2, R - p.q, R)
        return SISTrapdoor(R=R)
    raise FormatError(f"not a chameleon trapdoor record (tag {tag})")


def serialize_range_element(inst: ChameleonInstance, elem) -> bytes:
    if isinstance(inst, DLInstance):
        return encoding.encode_record(
            encoding.TAG_RANGE_ELEMENT, [encoding.encode_int(int(elem))]
        )
    return encoding.encode_record(
        encoding.TAG_RANGE_ELEMENT, [pack_matrix(np.asarray(elem), inst.params.q)]
    )


def serialize_message(inst: ChameleonInstance, m) -> bytes:
    if isinstance(inst, DLInstance):
        return encoding.encode_int(int(m))
    return bytes(int(b) for b in np.asarray(m, dtype=np.int64))


def serialize_randomness(inst: ChameleonInstance, r) -> bytes:
    if isinstance(inst, DLInstance):
        return encoding.encode_record(
            encoding.TAG_RANDOMNESS, [encoding.encode_int(int(r))]
        )
    p = inst.params
    w = _randomness_width(p)
    body = b"".join(
        int(v).to_bytes(w, "big", signed=True) for v in np.asarray(r, dtype=np.int64)
    )
    return encoding.encode_record(encoding.TAG_RANDOMNESS, [body])


def deserialize_randomness(inst: ChameleonInstance, blob: bytes):
    _, fields = encoding.decode_record(blob, encoding.TAG_RANDOMNESS)
    if isinstance(inst, DLInstance):
        r = encoding.decode_int(fields[0])
        if r >= inst.q_grp:
            raise FormatError("randomness outside Z_q")
        return r
    p = inst.params
    w = _randomness_width(p)
    body = fields[0]
    if len(body) != p.m * w:
        raise FormatError("randomness vector has wrong length")
    return np.array(
        [int.from_bytes(body[i * w : (i + 1) * w], "big", signed=True) for i in range(p.m)],
        dtype=np.int64,
    )


def randomness_element_count(inst: ChameleonInstance) -> int:
    return 1 if isinstance(inst, DLInstance) else inst.params.m


def instance_element_count(inst: ChameleonInstance) -> int:
    if isinstance(inst, DLInstance):
        return 2  # g and y; p, q are shared parameters
    return inst.A.size + inst.B.size


def trapdoor_element_count(inst: ChameleonInstance) -> int:
    return 1 if isinstance(inst, DLInstance) else inst.params.m**2
