"""Instances of the inversion problems and their stable byte encodings."""

from __future__ import annotations

import enum
import hashlib
import struct
from dataclasses import dataclass
from typing import Optional, Tuple

from .core import GroupAction, MembershipError


class Problem(str, enum.Enum):
    GAIP = "gaip"
    MGAIP = "mgaip"
    PGAIP = "pgaip"
    DGAIP = "dgaip"


class EmptyInstanceError(ValueError):
    """A multi-pair instance was given zero pairs."""


@dataclass(frozen=True)
class GaipInstance:
    """Find ``g`` with ``x = g * y``."""

    x: object
    y: object

    @property
    def pairs(self) -> Tuple[tuple, ...]:
        return ((self.x, self.y),)


@dataclass(frozen=True)
class MGaipInstance:
    """Find one ``g`` with ``x_i = g * y_i`` for every pair."""

    pairs: Tuple[tuple, ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        if not self.pairs:
            raise EmptyInstanceError("instance needs at least one pair")

    @property
    def q(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class PGaipInstance:
    """Decide whether all pairs share one ``g``.

    ``promise_tag`` ("structured" / "uniform") is bookkeeping for tests and
    is never read by any computation.
    """

    pairs: Tuple[tuple, ...]
    promise_tag: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        if not self.pairs:
            raise EmptyInstanceError("instance needs at least one pair")

    @property
    def q(self) -> int:
        return len(self.pairs)


Instance = GaipInstance | MGaipInstance | PGaipInstance


def check_instance(a: GroupAction, inst) -> None:
    for x, y in inst.pairs:
        for z in (x, y):
            if not a.is_set_element(z):
                raise MembershipError(f"{z!r} is not an element of the set of {a.action_id}")


def encode_instance(a: GroupAction, inst) -> bytes:
    """Pair count then, per pair, length-prefixed encodings of ``x`` and ``y``."""
    out = [struct.pack(">I", len(inst.pairs))]
    for x, y in inst.pairs:
        for z in (x, y):
            b = a.encode_set(z)
            out.append(struct.pack(">I", len(b)) + b)
    return b"".join(out)


def instance_hash(a: GroupAction, inst) -> str:
    return hashlib.sha256(encode_instance(a, inst)).hexdigest()[:16]


def same_kind(inst, pairs) -> Instance:
    """An instance of the same type as ``inst`` holding ``pairs``."""
    if isinstance(inst, GaipInstance):
        (x, y), = pairs
        return GaipInstance(x, y)
    if isinstance(inst, MGaipInstance):
        return MGaipInstance(tuple(pairs))
    return PGaipInstance(tuple(pairs), inst.promise_tag)
