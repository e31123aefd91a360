"""Concrete group actions and the identifier and config plumbing around them.

Regular actions: ``ModAdd`` (Z_n on itself) and ``DiscreteLog`` (Z_q on the
order-q subgroup generated by ``g`` in Z_p*). Non-transitive actions:
``GraphIso`` (S_n relabelling graphs), ``CodePerm`` (GL_k(F2) x S_n on
generator matrices) and ``Deck`` ((S_n)^(n+1) on decks of vertex-deleted
subgraphs).
"""

from __future__ import annotations

import itertools
import math
import struct
from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Tuple

from . import gf2, graphs, perm
from .core import (
    DeltaSolution,
    GroupAction,
    InvalidParameter,
    NotFreeError,
    Properties,
    DEFAULT_ENUM_BOUND,
)
from .tape import RandomTape

MAX_DLOG_P = 2**31


def _width(m: int) -> int:
    """Bytes for a fixed-width big-endian residue below ``m``."""
    return max(1, ((m - 1).bit_length() + 7) // 8)


def _decode_residue(data: bytes, width: int) -> int:
    if len(data) != width:
        raise ValueError(f"expected {width} bytes, got {len(data)}")
    return int.from_bytes(data, "big")


class ModAdd(GroupAction):
    """``(Z_n, +)`` acting on ``Z_n`` by ``g * x = g + x mod n``."""

    def __init__(self, n: int):
        if n < 2:
            raise InvalidParameter("ModAdd needs n >= 2")
        self.n = n
        self.action_id = f"modadd-{n}"
        self.lam = (n - 1).bit_length()
        self.properties = Properties(transitive=True, free=True)
        self.group_order = self.set_size = n
        self.sample_bits = (n - 1).bit_length()
        self.origin = 0
        self._w = _width(n)

    @property
    def identity(self):
        return 0

    def op(self, g1, g2):
        return (g1 + g2) % self.n

    def inv(self, g):
        return -g % self.n

    def is_group_element(self, g) -> bool:
        return isinstance(g, int) and not isinstance(g, bool) and 0 <= g < self.n

    is_set_element = is_group_element

    def sample_group(self, tape: RandomTape):
        return tape.uniform(self.n)

    sample_set = sample_group

    def iter_group(self):
        return iter(range(self.n))

    iter_set = iter_group

    def star(self, g, x):
        return (g + x) % self.n

    def encode_group(self, g) -> bytes:
        return g.to_bytes(self._w, "big")

    encode_set = encode_group

    def decode_group(self, data: bytes):
        return _decode_residue(data, self._w)

    decode_set = decode_group

    def orbit(self, x, bound: int = DEFAULT_ENUM_BOUND) -> frozenset:
        return frozenset(range(self.n))

    def search_witness(self, x, y) -> Optional[DeltaSolution]:
        return DeltaSolution((x - y) % self.n)


class DiscreteLog(GroupAction):
    """``(Z_q, +)`` acting on ``<g> <= Z_p*`` by ``a * x = g^a x mod p``, q = ord(g)."""

    def __init__(self, p: int, generator: int):
        from sympy import isprime
        from sympy.ntheory import n_order

        if not 2 < p <= MAX_DLOG_P or not isprime(p):
            raise InvalidParameter(f"DiscreteLog needs a prime 2 < p <= 2^31, got {p}")
        if not 2 <= generator < p:
            raise InvalidParameter("generator must lie in [2, p)")
        self.p, self.gen = p, generator
        self.q = int(n_order(generator, p))
        self.action_id = f"dlog-{p}-{generator}"
        self.lam = p.bit_length()
        self.properties = Properties(transitive=True, free=True)
        self.group_order = self.set_size = self.q
        self.sample_bits = (self.q - 1).bit_length()
        self.origin = 1
        self._wg, self._wx = _width(self.q), _width(p)

    @property
    def identity(self):
        return 0

    def op(self, g1, g2):
        return (g1 + g2) % self.q

    def inv(self, g):
        return -g % self.q

    def is_group_element(self, g) -> bool:
        return isinstance(g, int) and not isinstance(g, bool) and 0 <= g < self.q

    def is_set_element(self, x) -> bool:
        return (isinstance(x, int) and not isinstance(x, bool) and 0 < x < self.p
                and pow(x, self.q, self.p) == 1)

    def sample_group(self, tape: RandomTape):
        return tape.uniform(self.q)

    def sample_set(self, tape: RandomTape):
        return pow(self.gen, tape.uniform(self.q), self.p)

    def iter_group(self):
        return iter(range(self.q))

    def iter_set(self):
        return iter(sorted(pow(self.gen, a, self.p) for a in range(self.q)))

    def star(self, g, x):
        return pow(self.gen, g, self.p) * x % self.p

    def encode_group(self, g) -> bytes:
        return g.to_bytes(self._wg, "big")

    def decode_group(self, data: bytes):
        return _decode_residue(data, self._wg)

    def encode_set(self, x) -> bytes:
        return x.to_bytes(self._wx, "big")

    def decode_set(self, data: bytes):
        return _decode_residue(data, self._wx)

    def search_witness(self, x, y) -> Optional[DeltaSolution]:
        """Baby-step giant-step for ``g^a = x / y``."""
        target = x * pow(y, -1, self.p) % self.p
        m = math.isqrt(self.q - 1) + 1
        baby: Dict[int, int] = {}
        cur = 1
        for j in range(m):
            baby.setdefault(cur, j)
            cur = cur * self.gen % self.p
        step = pow(self.gen, -m, self.p)
        gamma = target
        for i in range(m):
            j = baby.get(gamma)
            if j is not None:
                return DeltaSolution((i * m + j) % self.q)
            gamma = gamma * step % self.p
        return DeltaSolution.not_in_orbit()


class GraphIso(GroupAction):
    """``S_n`` relabelling the vertices of simple graphs on ``n`` labelled vertices."""

    def __init__(self, n: int):
        if not 1 <= n <= 255:
            raise InvalidParameter("GraphIso needs 1 <= n <= 255")
        self.n = n
        self.m = graphs.n_edges(n)
        self.action_id = f"graphiso-{n}"
        self.lam = self.m
        trivial = n <= 1
        self.properties = Properties(transitive=trivial, free=trivial)
        self.group_order = math.factorial(n)
        self.set_size = 1 << self.m
        self.sample_bits = perm.sample_bits(n)

    @property
    def identity(self):
        return perm.identity(self.n)

    def op(self, g1, g2):
        return perm.compose(g1, g2)

    def inv(self, g):
        return perm.inverse(g)

    def is_group_element(self, g) -> bool:
        return perm.is_perm(g, self.n)

    def is_set_element(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.set_size

    def sample_group(self, tape: RandomTape):
        return perm.sample(self.n, tape)

    def sample_set(self, tape: RandomTape):
        return tape.read_bits(self.m)

    def iter_group(self):
        return perm.all_perms(self.n)

    def iter_set(self):
        return iter(range(self.set_size))

    def star(self, g, x):
        return graphs.permute(self.n, g, x)

    def encode_group(self, g) -> bytes:
        return perm.encode(g)

    def decode_group(self, data: bytes):
        g, end = perm.decode(data)
        if end != len(data):
            raise ValueError("trailing bytes after permutation")
        return g

    def encode_set(self, x) -> bytes:
        return graphs.encode(self.n, x)

    def decode_set(self, data: bytes):
        n, mask, end = graphs.decode(data)
        if n != self.n or end != len(data):
            raise ValueError("graph encoding does not match this action")
        return mask

    def parse_set(self, text: str):
        return graphs.named(self.n, text)


class CodePerm(GroupAction):
    """``GL_k(F2) x S_n`` acting on ``k x n`` generator matrices by ``(S, P) * A = S A P``.

    ``P`` is realised as the column relabelling ``j -> p[j]``. With
    ``raw=False`` set elements are RREF matrices (one per code) and the
    result is re-reduced, so the GL factor acts trivially on representatives;
    with ``raw=True`` set elements are arbitrary full-rank matrices and no
    canonical form is offered.
    """

    def __init__(self, n: int, k: int, raw: bool = False):
        if not 1 <= k <= n or n > 255:
            raise InvalidParameter(f"CodePerm needs 1 <= k <= n, got n={n}, k={k}")
        self.n, self.k, self.raw = n, k, raw
        self.action_id = f"codeperm-{'raw-' if raw else ''}{n}-{k}"
        self.lam = n * k
        self.unique_representation = not raw
        self.properties = Properties(transitive=k == n, free=n == 1)
        self.group_order = gf2.gl_order(k) * math.factorial(n)
        subspaces = gf2.gaussian_binomial(n, k)
        self.set_size = subspaces * gf2.gl_order(k) if raw else subspaces
        self.sample_bits = k * k + perm.sample_bits(n)
        self._rref_cache: Dict[tuple, gf2.Matrix] = {}

    @property
    def identity(self):
        return gf2.eye(self.k), perm.identity(self.n)

    def op(self, g1, g2):
        return gf2.matmul(g1[0], g2[0], self.k), perm.compose(g1[1], g2[1])

    def inv(self, g):
        return gf2.inverse(g[0]), perm.inverse(g[1])

    def is_group_element(self, g) -> bool:
        if not (isinstance(g, tuple) and len(g) == 2):
            return False
        s, p = g
        return (isinstance(s, tuple) and len(s) == self.k
                and all(isinstance(r, int) and 0 <= r < 1 << self.k for r in s)
                and gf2.is_invertible(s) and perm.is_perm(p, self.n))

    def is_set_element(self, x) -> bool:
        if not (isinstance(x, tuple) and len(x) == self.k
                and all(isinstance(r, int) and 0 <= r < 1 << self.n for r in x)):
            return False
        if self.raw:
            return gf2.rank(x) == self.k
        return gf2.is_rref(x, self.n)

    def sample_group(self, tape: RandomTape):
        s = gf2.sample_invertible(self.k, tape)
        return s, perm.sample(self.n, tape)

    def sample_set(self, tape: RandomTape):
        while True:
            rows = tuple(tape.read_bits(self.n) for _ in range(self.k))
            if gf2.rank(rows) == self.k:
                return rows if self.raw else gf2.rref(rows, self.n)

    def iter_group(self):
        return itertools.product(list(gf2.all_invertible(self.k)), list(perm.all_perms(self.n)))

    def iter_set(self):
        if not self.raw:
            return gf2.all_rref(self.n, self.k)
        return (rows for rows in itertools.product(range(1, 1 << self.n), repeat=self.k)
                if gf2.rank(rows) == self.k)

    def star(self, g, x):
        s, p = g
        if self.raw:
            return gf2.permute_columns(gf2.matmul(s, x, self.n), p, self.n)
        # S A has the row space of A, so only the column relabelling matters
        key = (p, x)
        out = self._rref_cache.get(key)
        if out is None:
            out = self._rref_cache[key] = gf2.rref(gf2.permute_columns(x, p, self.n), self.n)
        return out

    def encode_group(self, g) -> bytes:
        return gf2.encode(g[0], self.k) + perm.encode(g[1])

    def decode_group(self, data: bytes):
        s, _, off = gf2.decode(data)
        p, end = perm.decode(data, off)
        if end != len(data):
            raise ValueError("trailing bytes after group element")
        return s, p

    def encode_set(self, x) -> bytes:
        return gf2.encode(x, self.n)

    def decode_set(self, data: bytes):
        rows, n, end = gf2.decode(data)
        if n != self.n or len(rows) != self.k or end != len(data):
            raise ValueError("matrix encoding does not match this action")
        return rows

    def parse_set(self, text: str):
        """Rows as bit strings separated by ``/`` or ``;``, e.g. ``1100/0011``."""
        toks = [t for t in text.replace(";", "/").split("/") if t]
        if len(toks) != self.k or any(len(t) != self.n or set(t) - {"0", "1"} for t in toks):
            raise ValueError(f"expected {self.k} rows of {self.n} bits, got {text!r}")
        rows = tuple(int(t, 2) for t in toks)
        if gf2.rank(rows) != self.k:
            raise ValueError("generator matrix is not full rank")
        return rows if self.raw else gf2.rref(rows, self.n)


Card = Tuple[int, int]


class Deck(GroupAction):
    """``(S_n)^(n+1)`` acting on n-tuples of cards.

    A card is ``(m, mask)``: a graph on ``n`` labelled vertices in which
    vertex ``m`` is deleted (kept isolated). ``(s, p_1..p_n)`` sends
    ``(C_1..C_n)`` to ``(p_1(C_{s(1)}), ..., p_n(C_{s(n)}))``. For this to be a
    left action the group law is
    ``(s, p)(t, r) = (t o s, (p_i o r_{s(i)})_i)``.
    """

    def __init__(self, n: int):
        if not 1 <= n <= 255:
            raise InvalidParameter("Deck needs 1 <= n <= 255")
        self.n = n
        self.action_id = f"deck-{n}"
        card_bits = graphs.n_edges(n - 1)
        self.lam = n * ((n - 1).bit_length() + card_bits)
        self.properties = Properties(transitive=n <= 2, free=n == 1)
        self.group_order = math.factorial(n) ** (n + 1)
        self.n_cards = n * (1 << card_bits)
        self.set_size = self.n_cards ** n
        self.sample_bits = (n + 1) * perm.sample_bits(n)
        self._class_cache: Dict[Card, Card] = {}

    # cards
    def card_act(self, p, card: Card) -> Card:
        m, mask = card
        return p[m], graphs.permute(self.n, p, mask)

    def is_card(self, card) -> bool:
        if not (isinstance(card, tuple) and len(card) == 2):
            return False
        m, mask = card
        if not (isinstance(m, int) and 0 <= m < self.n and isinstance(mask, int)
                and 0 <= mask < 1 << graphs.n_edges(self.n)):
            return False
        return all(m not in e for e in graphs.edges(self.n, mask))

    def iter_cards(self) -> Iterator[Card]:
        for m in range(self.n):
            free_edges = [e for e in graphs.edge_list(self.n) if m not in e]
            for bits in range(1 << len(free_edges)):
                yield m, graphs.from_edges(
                    self.n, [e for i, e in enumerate(free_edges) if bits >> i & 1])

    def sample_card(self, tape: RandomTape) -> Card:
        m = tape.uniform(self.n)
        free_edges = [e for e in graphs.edge_list(self.n) if m not in e]
        bits = tape.read_bits(len(free_edges))
        return m, graphs.from_edges(self.n, [e for i, e in enumerate(free_edges) if bits >> i & 1])

    def card_class(self, card: Card) -> Card:
        """Smallest image of the card under S_n; equal iff the cards are isomorphic."""
        hit = self._class_cache.get(card)
        if hit is None:
            hit = min(self.card_act(p, card) for p in perm.all_perms(self.n))
            self._class_cache[card] = hit
        return hit

    def deck_of(self, mask: int):
        """The deck ``(G^(1), ..., G^(n))`` of an n-vertex graph."""
        return tuple((v, graphs.delete_vertex(self.n, mask, v)) for v in range(self.n))

    # group
    @property
    def identity(self):
        e = perm.identity(self.n)
        return (e,) * (self.n + 1)

    def op(self, g1, g2):
        s, ps = g1[0], g1[1:]
        t, rs = g2[0], g2[1:]
        return (perm.compose(t, s),) + tuple(perm.compose(ps[i], rs[s[i]]) for i in range(self.n))

    def inv(self, g):
        s, ps = g[0], g[1:]
        s_inv = perm.inverse(s)
        return (s_inv,) + tuple(perm.inverse(ps[s_inv[j]]) for j in range(self.n))

    def is_group_element(self, g) -> bool:
        return (isinstance(g, tuple) and len(g) == self.n + 1
                and all(perm.is_perm(p, self.n) for p in g))

    def sample_group(self, tape: RandomTape):
        return tuple(perm.sample(self.n, tape) for _ in range(self.n + 1))

    def iter_group(self):
        return itertools.product(list(perm.all_perms(self.n)), repeat=self.n + 1)

    # set
    def is_set_element(self, x) -> bool:
        return isinstance(x, tuple) and len(x) == self.n and all(self.is_card(c) for c in x)

    def sample_set(self, tape: RandomTape):
        return tuple(self.sample_card(tape) for _ in range(self.n))

    def iter_set(self):
        return itertools.product(list(self.iter_cards()), repeat=self.n)

    def star(self, g, x):
        s, ps = g[0], g[1:]
        return tuple(self.card_act(ps[i], x[s[i]]) for i in range(self.n))

    # encodings
    def encode_group(self, g) -> bytes:
        return b"".join(perm.encode(p) for p in g)

    def decode_group(self, data: bytes):
        out, off = [], 0
        for _ in range(self.n + 1):
            p, off = perm.decode(data, off)
            out.append(p)
        if off != len(data):
            raise ValueError("trailing bytes after deck group element")
        return tuple(out)

    def encode_set(self, x) -> bytes:
        return bytes([self.n]) + b"".join(bytes([m]) + graphs.encode(self.n, mask) for m, mask in x)

    def decode_set(self, data: bytes):
        if not data or data[0] != self.n:
            raise ValueError("deck encoding does not match this action")
        off, cards = 1, []
        for _ in range(self.n):
            m = data[off]
            n, mask, off = graphs.decode(data, off + 1)
            if n != self.n:
                raise ValueError("card size mismatch")
            cards.append((m, mask))
        if off != len(data):
            raise ValueError("trailing bytes after deck")
        return tuple(cards)

    def parse_set(self, text: str):
        """``deck:<graph literal>`` builds the deck of an n-vertex graph."""
        if text.startswith("deck:"):
            return self.deck_of(graphs.named(self.n, text[len("deck:"):]))
        raise ValueError("deck literals look like 'deck:<graph literal>'")

    # orbits via card classes
    def same_orbit(self, x, y, bound: int = DEFAULT_ENUM_BOUND) -> bool:
        return sorted(map(self.card_class, x)) == sorted(map(self.card_class, y))

    def orbit_key(self, x, bound: int = DEFAULT_ENUM_BOUND) -> bytes:
        return self.encode_set(tuple(sorted(map(self.card_class, x))))

    def search_witness(self, x, y) -> Optional[DeltaSolution]:
        """Match cards class by class, then brute-force each card's relabelling."""
        pool: Dict[Card, list] = {}
        for j, card in enumerate(y):
            pool.setdefault(self.card_class(card), []).append(j)
        s = []
        for card in x:
            slots = pool.get(self.card_class(card))
            if not slots:
                return DeltaSolution.not_in_orbit()
            s.append(slots.pop(0))
        ps = []
        for i, card in enumerate(x):
            src = y[s[i]]
            ps.append(next(p for p in perm.all_perms(self.n) if self.card_act(p, src) == card))
        return DeltaSolution((tuple(s),) + tuple(ps))


class OrbitAction(GroupAction):
    """A free action restricted to the orbit of ``x0``: regular by construction."""

    def __init__(self, base: GroupAction, x0, bound: int = DEFAULT_ENUM_BOUND):
        if not base.properties.free:
            raise NotFreeError(f"{base.action_id} is not free; its orbits need not be regular")
        if not base.is_set_element(x0):
            raise InvalidParameter(f"{x0!r} is not in the set of {base.action_id}")
        self.base = base
        self.origin = x0
        self._orbit = base.orbit(x0, bound)
        self._sorted = sorted(self._orbit, key=base.encode_set)
        self.action_id = f"{base.action_id}@orbit:{base.encode_set(x0).hex()}"
        self.lam = base.lam
        self.properties = Properties(transitive=True, free=True)
        self.group_order = base.group_order
        self.set_size = len(self._orbit)
        self.sample_bits = base.sample_bits
        self.unique_representation = base.unique_representation

    @property
    def identity(self):
        return self.base.identity

    def op(self, g1, g2):
        return self.base.op(g1, g2)

    def inv(self, g):
        return self.base.inv(g)

    def is_group_element(self, g) -> bool:
        return self.base.is_group_element(g)

    def sample_group(self, tape: RandomTape):
        return self.base.sample_group(tape)

    def iter_group(self):
        return self.base.iter_group()

    def is_set_element(self, x) -> bool:
        return x in self._orbit

    def sample_set(self, tape: RandomTape):
        return self.base.star(self.base.sample_group(tape), self.origin)

    def iter_set(self):
        return iter(self._sorted)

    def star(self, g, x):
        return self.base.star(g, x)

    def encode_group(self, g) -> bytes:
        return self.base.encode_group(g)

    def decode_group(self, data: bytes):
        return self.base.decode_group(data)

    def encode_set(self, x) -> bytes:
        return self.base.encode_set(x)

    def decode_set(self, data: bytes):
        return self.base.decode_set(data)

    def canonical(self, x) -> bytes:
        return self.base.canonical(x)

    def orbit(self, x, bound: int = DEFAULT_ENUM_BOUND) -> frozenset:
        return self._orbit

    def search_witness(self, x, y):
        return self.base.search_witness(x, y)


def restrict_to_orbit(a: GroupAction, x0, bound: int = DEFAULT_ENUM_BOUND) -> GroupAction:
    return OrbitAction(a, x0, bound)


# specs and identifiers

KINDS = ("modadd", "dlog", "graphiso", "codeperm", "deck")


@dataclass(frozen=True)
class ActionSpec:
    kind: str
    n: int = 0
    k: int = 0
    p: int = 0
    generator: int = 0
    raw: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameter(f"unknown action kind {self.kind!r}")

    @property
    def action_id(self) -> str:
        if self.kind == "modadd":
            return f"modadd-{self.n}"
        if self.kind == "dlog":
            return f"dlog-{self.p}-{self.generator}"
        if self.kind == "codeperm":
            return f"codeperm-{'raw-' if self.raw else ''}{self.n}-{self.k}"
        return f"{self.kind}-{self.n}"

    @classmethod
    def from_id(cls, action_id: str) -> "ActionSpec":
        parts = action_id.strip().lower().split("-")
        try:
            kind = parts[0]
            if kind == "modadd" and len(parts) == 2:
                return cls("modadd", n=int(parts[1]))
            if kind == "dlog" and len(parts) == 3:
                return cls("dlog", p=int(parts[1]), generator=int(parts[2]))
            if kind in ("graphiso", "deck") and len(parts) == 2:
                return cls(kind, n=int(parts[1]))
            if kind == "codeperm" and len(parts) == 3:
                return cls("codeperm", n=int(parts[1]), k=int(parts[2]))
            if kind == "codeperm" and len(parts) == 4 and parts[1] == "raw":
                return cls("codeperm", n=int(parts[2]), k=int(parts[3]), raw=True)
        except ValueError:
            pass
        raise InvalidParameter(f"unknown action id {action_id!r}")

    def to_config(self) -> str:
        fields = {"kind": self.kind}
        if self.kind == "dlog":
            fields.update(p=self.p, generator=self.generator)
        else:
            fields["n"] = self.n
        if self.kind == "codeperm":
            fields["k"] = self.k
            fields["raw"] = "true" if self.raw else "false"
        return "".join(f"{key}={val}\n" for key, val in fields.items())

    @classmethod
    def from_config(cls, text: str) -> "ActionSpec":
        kv = parse_kv(text)
        if "kind" not in kv:
            raise InvalidParameter("action config needs a kind= line")
        try:
            return cls(kind=kv["kind"], n=int(kv.get("n", 0)), k=int(kv.get("k", 0)),
                       p=int(kv.get("p", 0)), generator=int(kv.get("generator", 0)),
                       raw=kv.get("raw", "false").lower() in ("1", "true", "yes"))
        except ValueError as exc:
            raise InvalidParameter(f"bad action config: {exc}") from None


def parse_kv(text: str) -> Dict[str, str]:
    """``key=value`` lines; blank lines and ``#`` comments ignored."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameter(f"line {lineno}: expected key=value, got {line!r}")
        key, val = line.split("=", 1)
        out[key.strip().lower().replace("_", "-")] = val.strip()
    return out


def build_action(spec: ActionSpec) -> GroupAction:
    if spec.kind == "modadd":
        return ModAdd(spec.n)
    if spec.kind == "dlog":
        return DiscreteLog(spec.p, spec.generator)
    if spec.kind == "graphiso":
        return GraphIso(spec.n)
    if spec.kind == "codeperm":
        return CodePerm(spec.n, spec.k, raw=spec.raw)
    return Deck(spec.n)


def action_from_id(action_id: str) -> GroupAction:
    return build_action(ActionSpec.from_id(action_id))


def parse_set_element(a: GroupAction, text: str):
    """Parse a set-element literal: named graphs, code rows, ``hex:<encoding>`` or an int."""
    text = text.strip()
    if text.startswith("hex:"):
        try:
            x = a.decode_set(bytes.fromhex(text[4:]))
        except (IndexError, struct.error) as exc:
            raise ValueError(f"truncated encoding {text!r}") from exc
        if not a.is_set_element(x):
            raise ValueError(f"{text!r} does not decode to an element of {a.action_id}")
        return x
    parser = getattr(a, "parse_set", None)
    if parser is not None:
        return parser(text)
    x = int(text)
    if not a.is_set_element(x):
        raise ValueError(f"{x} is not in the set of {a.action_id}")
    return x
