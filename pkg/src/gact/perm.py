"""Permutations of ``{0, ..., n-1}`` as tuples ``p`` with ``p[v]`` the image of ``v``.

Composition is right-to-left: ``compose(p, q)[v] == p[q[v]]``.
"""

from __future__ import annotations

import itertools
import math
import struct
from typing import Iterator, Sequence, Tuple

from .tape import RandomTape

Perm = Tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def is_perm(p, n: int) -> bool:
    if not isinstance(p, tuple) or len(p) != n:
        return False
    seen = [False] * n
    for v in p:
        if not isinstance(v, int) or not 0 <= v < n or seen[v]:
            return False
        seen[v] = True
    return True


def compose(p: Perm, q: Perm) -> Perm:
    return tuple(p[v] for v in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def from_cycles(n: int, *cycles: Sequence[int]) -> Perm:
    """Build from 0-based cycles, e.g. ``from_cycles(3, (0, 1))``."""
    p = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            p[a] = b
    return tuple(p)


def all_perms(n: int) -> Iterator[Perm]:
    return itertools.permutations(range(n))


def sample_bits(n: int) -> int:
    """Tape bits one Fisher-Yates draw consumes when nothing is rejected."""
    return sum((n - i - 1).bit_length() for i in range(n))


def sample(n: int, tape: RandomTape) -> Perm:
    """Forward Fisher-Yates: position ``i`` swaps with ``i + uniform(n - i)``.

    Drawing 0 at every step leaves the identity.
    """
    p = list(range(n))
    for i in range(n - 1):
        j = i + tape.uniform(n - i)
        p[i], p[j] = p[j], p[i]
    return tuple(p)


def order(n: int) -> int:
    return math.factorial(n)


def encode(p: Perm) -> bytes:
    return struct.pack("B", len(p)) + bytes(p)


def decode(data: bytes, offset: int = 0) -> Tuple[Perm, int]:
    n = data[offset]
    end = offset + 1 + n
    if end > len(data):
        raise ValueError("truncated permutation encoding")
    return tuple(data[offset + 1:end]), end
