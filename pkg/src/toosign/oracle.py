"""The hash-oracle layer.

Production mode is a domain-separated SHAKE-256 evaluated into the chameleon
message space.  The programmable mode is a test double: a lazy table filled
from a seed-derived stream, an append-only query log, and point
reprogramming.  Production signing never reprograms; only the reduction
harness does.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .chameleon import ChameleonInstance, DLInstance
from .errors import FormatError, UnsupportedOperationError
from .rng import Rng

DEFAULT_DOMAIN_TAG = b"TOO-RO-v1"


class OracleMode(Enum):
    PRODUCTION = "production"
    PROGRAMMABLE = "programmable"


def frame(message: bytes, sig: bytes) -> bytes:
    """Injective encoding of a (message, signature) pair for oracle input."""
    if len(message) >= 1 << 32:
        raise FormatError("message too long for 32-bit framing")
    return len(message).to_bytes(4, "big") + message + sig


@dataclass
class OracleContext:
    mode: OracleMode
    range_instance: ChameleonInstance  # output space = this chameleon's message space
    domain_tag: bytes = DEFAULT_DOMAIN_TAG
    seed: bytes | None = None  # programmable only
    _table: dict = field(default_factory=dict)
    _query_log: list = field(default_factory=list)
    _events: list = field(default_factory=list)
    _stream: Rng | None = None

    def __post_init__(self):
        if self.mode is OracleMode.PROGRAMMABLE:
            if self.seed is None:
                raise ValueError("programmable oracle needs a seed")
            self._stream = Rng(self.seed)

    # -- value construction ------------------------------------------------

    def _production_value(self, data: bytes):
        inst = self.range_instance
        if isinstance(inst, DLInstance):
            nbits = inst.q_grp.bit_length() + 128
            digest = hashlib.shake_256(self.domain_tag + data).digest((nbits + 7) // 8)
            return int.from_bytes(digest, "big") % inst.q_grp
        k = inst.params.k
        digest = hashlib.shake_256(self.domain_tag + data).digest((k + 7) // 8)
        return np.array(
            [(digest[j // 8] >> (7 - j % 8)) & 1 for j in range(k)], dtype=np.int64
        )

    def fresh_value(self):
        """Next uniform message-space element from the seed-derived stream."""
        if self.mode is not OracleMode.PROGRAMMABLE:
            raise UnsupportedOperationError("fresh_value needs the programmable oracle")
        inst = self.range_instance
        if isinstance(inst, DLInstance):
            return self._stream.randbelow(inst.q_grp)
        return np.array(self._stream.random_bits(inst.params.k), dtype=np.int64)

    # -- the oracle interface ----------------------------------------------

    def eval(self, data: bytes):
        if self.mode is OracleMode.PRODUCTION:
            return self._production_value(data)
        self._query_log.append(data)
        self._events.append(("eval", data))
        if data not in self._table:
            self._table[data] = self.fresh_value()
        return self._table[data]

    def program(self, data: bytes, value) -> None:
        if self.mode is not OracleMode.PROGRAMMABLE:
            raise UnsupportedOperationError("cannot reprogram the production oracle")
        self._table[data] = value
        self._events.append(("program", data))

    def log_contains(self, data: bytes) -> bool:
        """True iff the point was queried (programming alone does not count)."""
        if self.mode is not OracleMode.PROGRAMMABLE:
            raise UnsupportedOperationError("no query log on the production oracle")
        return data in self._query_log

    def query_log(self) -> list[bytes]:
        if self.mode is not OracleMode.PROGRAMMABLE:
            raise UnsupportedOperationError("no query log on the production oracle")
        return list(self._query_log)

    def events(self) -> list[tuple[str, bytes]]:
        if self.mode is not OracleMode.PROGRAMMABLE:
            raise UnsupportedOperationError("no event log on the production oracle")
        return list(self._events)


def production_oracle(
    range_instance: ChameleonInstance, domain_tag: bytes = DEFAULT_DOMAIN_TAG
) -> OracleContext:
    return OracleContext(
        mode=OracleMode.PRODUCTION, range_instance=range_instance, domain_tag=domain_tag
    )


def programmable_oracle(range_instance: ChameleonInstance, seed: bytes) -> OracleContext:
    return OracleContext(
        mode=OracleMode.PROGRAMMABLE, range_instance=range_instance, seed=seed
    )
