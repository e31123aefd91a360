"""Random tapes: the reduction/verifier randomness as a readable bit stream.

Two modes share one interface:

* explicit tapes hold a finite bit string and raise :class:`TapeExhausted`
  when read past the end; these are what exhaustive tests enumerate;
* seeded tapes expand a seed with SHA-256 in counter mode, so bit ``p`` is a
  pure function of ``(seed, p)``.
"""

from __future__ import annotations

import hashlib
from typing import Iterator, Optional

_BLOCK_BITS = 256


class TapeExhausted(Exception):
    """An explicit tape ran out of bits mid-read."""


def _derive(seed: bytes, label: bytes, index: int) -> bytes:
    return hashlib.sha256(seed + label + index.to_bytes(8, "big")).digest()


class RandomTape:
    """A cursor over a bit string (explicit) or a seed expansion (seeded).

    Reads are MSB-first. ``segment(i)`` returns a fresh tape for round ``i``
    (1-based) and never moves this tape's cursor.
    """

    def __init__(self, *, bits: Optional[str] = None, seed: Optional[bytes] = None,
                 segment_bits: Optional[int] = None):
        if (bits is None) == (seed is None):
            raise ValueError("exactly one of bits/seed must be given")
        if bits is not None and set(bits) - {"0", "1"}:
            raise ValueError("explicit tape must be a string over {0,1}")
        if segment_bits is not None and segment_bits <= 0:
            raise ValueError("segment_bits must be positive")
        self._bits = bits
        self._seed = seed
        self.segment_bits = segment_bits
        self.cursor = 0
        self._block_index = -1
        self._block = 0

    @classmethod
    def from_bits(cls, bits: str, segment_bits: Optional[int] = None) -> "RandomTape":
        return cls(bits=bits, segment_bits=segment_bits)

    @classmethod
    def from_int(cls, value: int, nbits: int, segment_bits: Optional[int] = None) -> "RandomTape":
        return cls(bits=format(value, f"0{nbits}b") if nbits else "", segment_bits=segment_bits)

    @classmethod
    def from_seed(cls, seed) -> "RandomTape":
        if isinstance(seed, int):
            seed = seed.to_bytes(8, "big", signed=True)
        elif isinstance(seed, str):
            seed = seed.encode()
        return cls(seed=bytes(seed))

    @property
    def explicit(self) -> bool:
        return self._bits is not None

    @property
    def length(self) -> Optional[int]:
        """Number of bits, or None for an (unbounded) seeded tape."""
        return len(self._bits) if self._bits is not None else None

    @property
    def remaining(self) -> Optional[int]:
        return None if self._bits is None else len(self._bits) - self.cursor

    @property
    def bits(self) -> Optional[str]:
        return self._bits

    def _seeded_bit(self, pos: int) -> int:
        block = pos // _BLOCK_BITS
        if block != self._block_index:
            self._block = int.from_bytes(_derive(self._seed, b"blk", block), "big")
            self._block_index = block
        return (self._block >> (_BLOCK_BITS - 1 - pos % _BLOCK_BITS)) & 1

    def read_bits(self, n: int) -> int:
        """Read ``n`` bits as an unsigned integer and advance the cursor."""
        if n < 0:
            raise ValueError("negative read")
        if n == 0:
            return 0
        if self._bits is not None:
            end = self.cursor + n
            if end > len(self._bits):
                raise TapeExhausted(f"need {n} bits at position {self.cursor}, "
                                    f"tape has {len(self._bits)}")
            value = int(self._bits[self.cursor:end], 2)
            self.cursor = end
            return value
        value = 0
        for pos in range(self.cursor, self.cursor + n):
            value = (value << 1) | self._seeded_bit(pos)
        self.cursor += n
        return value

    def read_bit(self) -> int:
        return self.read_bits(1)

    def uniform(self, m: int) -> int:
        """Uniform integer in ``[0, m)`` by rejection on ceil(log2 m)-bit reads.

        ``m == 1`` consumes nothing. Rejected reads stay consumed.
        """
        if m <= 0:
            raise ValueError("uniform() needs m >= 1")
        width = (m - 1).bit_length()
        while True:
            v = self.read_bits(width)
            if v < m:
                return v

    def segment(self, i: int) -> "RandomTape":
        """The tape handed to round/query ``i`` (1-based), cursor at 0."""
        if i < 1:
            raise ValueError("segment index is 1-based")
        if self._seed is not None:
            return RandomTape(seed=_derive(self._seed, b"seg", i))
        if self.segment_bits is None:
            if i != 1:
                raise TapeExhausted("explicit tape without segment_bits has a single segment")
            return RandomTape(bits=self._bits)
        start = (i - 1) * self.segment_bits
        if start + self.segment_bits > len(self._bits):
            raise TapeExhausted(f"segment {i} lies beyond the {len(self._bits)}-bit tape")
        return RandomTape(bits=self._bits[start:start + self.segment_bits])

    def __repr__(self) -> str:
        if self._bits is not None:
            return f"RandomTape(bits={self._bits!r}, cursor={self.cursor})"
        return f"RandomTape(seed={self._seed.hex()[:16]}..., cursor={self.cursor})"


def enumerate_tapes(nbits: int, segment_bits: Optional[int] = None) -> Iterator[RandomTape]:
    """Every explicit tape of length ``nbits``, in increasing integer order."""
    for v in range(1 << nbits):
        yield RandomTape.from_int(v, nbits, segment_bits)
