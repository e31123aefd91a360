"""Dense matrices over F2 with rows stored as int bitmasks.

Row ``r`` of a ``k x n`` matrix is an int whose bit ``n-1-j`` is entry
``(r, j)``, so printing ``format(row, f"0{n}b")`` shows the row left to right.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence, Tuple

from .tape import RandomTape

Matrix = Tuple[int, ...]


def rank(rows: Sequence[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


def rref(rows: Sequence[int], n: int) -> Matrix:
    """Reduced row echelon form; zero rows dropped."""
    rows = list(rows)
    out: list[int] = []
    for col in range(n):
        bit = 1 << (n - 1 - col)
        piv = next((i for i, r in enumerate(rows) if r & bit), None)
        if piv is None:
            continue
        pr = rows.pop(piv)
        rows = [r ^ pr if r & bit else r for r in rows]
        out = [r ^ pr if r & bit else r for r in out]
        out.append(pr)
    return tuple(out)


def is_rref(rows: Sequence[int], n: int) -> bool:
    return tuple(rows) == rref(rows, n) and all(rows)


def matmul(a: Sequence[int], b: Sequence[int], n: int) -> Matrix:
    """``a`` is ``k x m``, ``b`` is ``m x n``."""
    m = len(b)
    out = []
    for row in a:
        acc = 0
        for i in range(m):
            if row >> (m - 1 - i) & 1:
                acc ^= b[i]
        out.append(acc)
    return tuple(out)


def eye(k: int) -> Matrix:
    return tuple(1 << (k - 1 - i) for i in range(k))


def inverse(a: Sequence[int]) -> Matrix:
    """Gauss-Jordan on ``[a | I]``; raises ValueError when singular."""
    k = len(a)
    aug = [(r << k) | e for r, e in zip(a, eye(k))]
    for col in range(k):
        bit = 1 << (2 * k - 1 - col)
        piv = next((i for i in range(col, k) if aug[i] & bit), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        for i in range(k):
            if i != col and aug[i] & bit:
                aug[i] ^= aug[col]
    mask = (1 << k) - 1
    return tuple(r & mask for r in aug)


def is_invertible(a: Sequence[int]) -> bool:
    return rank(a) == len(a)


def all_invertible(k: int) -> Iterator[Matrix]:
    """GL_k(F2) in increasing order of the row-major integer value."""
    for rows in itertools.product(range(1 << k), repeat=k):
        if is_invertible(rows):
            yield tuple(rows)


def gl_order(k: int) -> int:
    out = 1
    for i in range(k):
        out *= (1 << k) - (1 << i)
    return out


def sample_invertible(k: int, tape: RandomTape) -> Matrix:
    """Rejection sampling over all ``k*k``-bit matrices."""
    while True:
        v = tape.read_bits(k * k)
        rows = tuple((v >> (k * (k - 1 - i))) & ((1 << k) - 1) for i in range(k))
        if is_invertible(rows):
            return rows


def permute_columns(rows: Sequence[int], p: Sequence[int], n: int) -> Matrix:
    """Move column ``j`` to position ``p[j]``."""
    out = []
    for r in rows:
        acc = 0
        for j in range(n):
            if r >> (n - 1 - j) & 1:
                acc |= 1 << (n - 1 - p[j])
        out.append(acc)
    return tuple(out)


def span(rows: Sequence[int]) -> list[int]:
    words = [0]
    for r in rows:
        words += [w ^ r for w in words]
    return words


def weight_enumerator(rows: Sequence[int], n: int) -> Tuple[int, ...]:
    """Number of codewords of each Hamming weight 0..n."""
    counts = [0] * (n + 1)
    for w in span(rows):
        counts[bin(w).count("1")] += 1
    return tuple(counts)


def gaussian_binomial(n: int, k: int) -> int:
    """Number of ``k``-dimensional subspaces of F2^n."""
    num = den = 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


def all_rref(n: int, k: int) -> Iterator[Matrix]:
    """Every full-rank ``k x n`` RREF matrix, one per subspace."""
    seen = set()
    for rows in itertools.combinations(range(1, 1 << n), k):
        if rank(rows) == k:
            r = rref(rows, n)
            if r not in seen:
                seen.add(r)
    yield from sorted(seen)


def encode(rows: Sequence[int], ncols: int) -> bytes:
    """Row count, column count, then row-major bits MSB-first, zero padded."""
    nbits = len(rows) * ncols
    acc = 0
    for r in rows:
        acc = (acc << ncols) | r
    nbytes = (nbits + 7) // 8
    acc <<= nbytes * 8 - nbits
    return bytes([len(rows), ncols]) + acc.to_bytes(nbytes, "big")


def decode(data: bytes, offset: int = 0) -> Tuple[Matrix, int, int]:
    """Returns ``(rows, ncols, next_offset)``."""
    k, n = data[offset], data[offset + 1]
    nbits = k * n
    nbytes = (nbits + 7) // 8
    end = offset + 2 + nbytes
    if end > len(data):
        raise ValueError("truncated matrix encoding")
    acc = int.from_bytes(data[offset + 2:end], "big") >> (nbytes * 8 - nbits)
    rows = tuple((acc >> (n * (k - 1 - i))) & ((1 << n) - 1) for i in range(k))
    return rows, n, end
