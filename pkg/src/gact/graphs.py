"""Simple undirected labelled graphs on ``{0, ..., n-1}`` as edge bitmasks.

Edges ``(i, j)``, ``i < j``, are numbered in row-major upper-triangular order
``(0,1), (0,2), ..., (0,n-1), (1,2), ...``; bit ``e`` of the mask is edge ``e``.
"""

from __future__ import annotations

import functools
import itertools
import re
from typing import Dict, Iterable, List, Sequence, Tuple

Edge = Tuple[int, int]


@functools.lru_cache(maxsize=None)
def edge_list(n: int) -> Tuple[Edge, ...]:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@functools.lru_cache(maxsize=None)
def edge_index(n: int) -> Dict[Edge, int]:
    idx = {}
    for e, (i, j) in enumerate(edge_list(n)):
        idx[(i, j)] = idx[(j, i)] = e
    return idx


def n_edges(n: int) -> int:
    return n * (n - 1) // 2


def from_edges(n: int, edges: Iterable[Edge]) -> int:
    idx = edge_index(n)
    mask = 0
    for i, j in edges:
        if i == j:
            raise ValueError("self-loops are not allowed")
        mask |= 1 << idx[(i, j)]
    return mask


def edges(n: int, mask: int) -> List[Edge]:
    return [e for k, e in enumerate(edge_list(n)) if mask >> k & 1]


def permute(n: int, p: Sequence[int], mask: int) -> int:
    """The graph with edge ``{p[i], p[j]}`` for every edge ``{i, j}``."""
    idx = edge_index(n)
    out = 0
    for k, (i, j) in enumerate(edge_list(n)):
        if mask >> k & 1:
            out |= 1 << idx[(p[i], p[j])]
    return out


def degrees(n: int, mask: int) -> Tuple[int, ...]:
    deg = [0] * n
    for i, j in edges(n, mask):
        deg[i] += 1
        deg[j] += 1
    return tuple(deg)


def delete_vertex(n: int, mask: int, v: int) -> int:
    """Drop every edge at ``v``; the vertex stays as an isolated label."""
    return from_edges(n, [e for e in edges(n, mask) if v not in e])


def edge_count(mask: int) -> int:
    return bin(mask).count("1")


def encode(n: int, mask: int) -> bytes:
    """``n`` then the upper-triangular adjacency bits, edge 0 first, MSB-first."""
    m = n_edges(n)
    nbytes = (m + 7) // 8
    bits = 0
    for k in range(m):
        bits = (bits << 1) | (mask >> k & 1)
    bits <<= nbytes * 8 - m
    return bytes([n]) + bits.to_bytes(nbytes, "big")


def decode(data: bytes, offset: int = 0) -> Tuple[int, int, int]:
    """Returns ``(n, mask, next_offset)``."""
    n = data[offset]
    m = n_edges(n)
    nbytes = (m + 7) // 8
    end = offset + 1 + nbytes
    if end > len(data):
        raise ValueError("truncated graph encoding")
    bits = int.from_bytes(data[offset + 1:end], "big") >> (nbytes * 8 - m)
    mask = 0
    for k in range(m):
        if bits >> (m - 1 - k) & 1:
            mask |= 1 << k
    return n, mask, end


def named(n: int, name: str) -> int:
    """Parse a graph literal.

    Accepts ``empty``, ``complete``, ``triangle`` (n = 3), ``path`` (0-1-...-n-1),
    ``path213`` (the 3-vertex path with middle vertex 0), ``star``, ``cycle``,
    ``edges:0-1,1-2`` and ``mask:<int>``.
    """
    name = name.strip().lower()
    if name == "empty":
        return 0
    if name == "complete" or (name == "triangle" and n == 3):
        return (1 << n_edges(n)) - 1
    if name == "path":
        return from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if name == "path213" and n == 3:
        return from_edges(3, [(1, 0), (0, 2)])
    if name == "star":
        return from_edges(n, [(0, i) for i in range(1, n)])
    if name == "cycle" and n >= 3:
        return from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if name.startswith("edges:"):
        body = name[len("edges:"):]
        pairs = [] if not body else [tuple(int(v) for v in tok.split("-"))
                                     for tok in body.split(",")]
        if any(len(p) != 2 or not all(0 <= v < n for v in p) for p in pairs):
            raise ValueError(f"bad edge list {name!r}")
        return from_edges(n, pairs)
    m = re.fullmatch(r"mask:(\d+)", name)
    if m:
        mask = int(m.group(1))
        if mask >> n_edges(n):
            raise ValueError(f"mask {mask} has bits beyond {n_edges(n)} edges")
        return mask
    raise ValueError(f"unknown graph literal {name!r} for n={n}")


def brute_canonical(n: int, mask: int) -> int:
    """Smallest mask over all relabellings; brute force over S_n."""
    return min(permute(n, p, mask) for p in itertools.permutations(range(n)))
