"""Effective group actions: the abstract interface and checked operations.

Group and set elements are plain hashable Python values (ints, tuples);
each action also provides the versioned byte encodings used on the wire and
in reports. The module-level functions (:func:`compose`, :func:`act`, ...)
are the checked entry points: they run membership tests before delegating
to the action's raw methods.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Hashable, Iterator, List, Optional

from .tape import RandomTape

DEFAULT_ENUM_BOUND = 10**6
ENCODING_VERSION = 1


class GactError(Exception):
    """Base class for errors raised by this package."""


class MembershipError(GactError, ValueError):
    """An element failed the owning action's membership test."""


class UnsupportedOperation(GactError):
    """The action does not provide the requested capability."""


class InvalidParameter(GactError, ValueError):
    """An action parameter or configuration value is out of range."""


class NotFreeError(GactError):
    """Orbit restriction was requested on an action that is not free."""


class EnumerationBoundExceeded(GactError):
    """A brute-force enumeration would exceed the configured bound."""


@dataclass(frozen=True)
class Properties:
    transitive: bool
    free: bool

    @property
    def regular(self) -> bool:
        return self.transitive and self.free


@dataclass(frozen=True)
class DeltaSolution:
    """Answer to an inversion query: a witness ``g`` with ``x = g * y``, or none.

    ``witness is None`` encodes "not in orbit"; group elements are never None.
    """

    witness: Any = None

    @property
    def found(self) -> bool:
        return self.witness is not None

    @property
    def status(self) -> str:
        return "found" if self.found else "not-in-orbit"

    @classmethod
    def not_in_orbit(cls) -> "DeltaSolution":
        return cls(None)


NOT_IN_ORBIT = DeltaSolution(None)


class GroupAction(ABC):
    """A finite effective group action ``(G, X, *)`` with desk-scale enumeration.

    Subclasses implement the raw operations; they may assume valid inputs.
    ``sample_bits`` is the number of tape bits a rejection-free group sample
    consumes, which fixes the minimal exhaustive tape length.
    """

    action_id: str
    lam: int
    properties: Properties
    group_order: Optional[int] = None
    set_size: Optional[int] = None
    sample_bits: int = 0
    unique_representation: bool = True
    origin: Any = None

    # group
    @property
    @abstractmethod
    def identity(self) -> Hashable: ...

    @abstractmethod
    def op(self, g1, g2): ...

    @abstractmethod
    def inv(self, g): ...

    @abstractmethod
    def is_group_element(self, g) -> bool: ...

    def group_equal(self, g1, g2) -> bool:
        return g1 == g2

    @abstractmethod
    def sample_group(self, tape: RandomTape): ...

    @abstractmethod
    def iter_group(self) -> Iterator: ...

    # set
    @abstractmethod
    def is_set_element(self, x) -> bool: ...

    @abstractmethod
    def sample_set(self, tape: RandomTape): ...

    @abstractmethod
    def iter_set(self) -> Iterator: ...

    # action
    @abstractmethod
    def star(self, g, x): ...

    # encodings
    @abstractmethod
    def encode_group(self, g) -> bytes: ...

    @abstractmethod
    def decode_group(self, data: bytes): ...

    @abstractmethod
    def encode_set(self, x) -> bytes: ...

    @abstractmethod
    def decode_set(self, data: bytes): ...

    def canonical(self, x) -> bytes:
        if not self.unique_representation:
            raise UnsupportedOperation(f"{self.action_id} has no unique representation")
        return self.encode_set(x)

    # orbit machinery, brute force unless a subclass knows better
    def orbit(self, x, bound: int = DEFAULT_ENUM_BOUND) -> frozenset:
        cache = self.__dict__.setdefault("_orbit_cache", {})
        hit = cache.get(x)
        if hit is not None:
            return hit
        self.require_enumerable(bound)
        orb = frozenset(self.star(g, x) for g in self.iter_group())
        for y in orb:
            cache[y] = orb
        return orb

    def same_orbit(self, x, y, bound: int = DEFAULT_ENUM_BOUND) -> bool:
        if self.properties.transitive:
            return True
        return x in self.orbit(y, bound)

    def orbit_key(self, x, bound: int = DEFAULT_ENUM_BOUND) -> bytes:
        """A label shared by exactly the elements of one orbit."""
        return min(self.encode_set(z) for z in self.orbit(x, bound))

    def search_witness(self, x, y) -> Optional[DeltaSolution]:
        """Structured witness search for actions too large to enumerate; None if absent."""
        return None

    def require_enumerable(self, bound: int) -> None:
        if self.group_order is None or self.group_order > bound:
            raise EnumerationBoundExceeded(
                f"{self.action_id}: |G| = {self.group_order} exceeds enumeration bound {bound}")

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.action_id}>"


# checked operations

def _check_group(a: GroupAction, *gs) -> None:
    for g in gs:
        if not a.is_group_element(g):
            raise MembershipError(f"{g!r} is not an element of the group of {a.action_id}")


def _check_set(a: GroupAction, *xs) -> None:
    for x in xs:
        if not a.is_set_element(x):
            raise MembershipError(f"{x!r} is not an element of the set of {a.action_id}")


def compose(a: GroupAction, g1, g2):
    _check_group(a, g1, g2)
    return a.op(g1, g2)


def inverse(a: GroupAction, g):
    _check_group(a, g)
    return a.inv(g)


def identity(a: GroupAction):
    return a.identity


def act(a: GroupAction, g, x):
    _check_group(a, g)
    _check_set(a, x)
    return a.star(g, x)


def sample_group(a: GroupAction, tape: RandomTape):
    return a.sample_group(tape)


def sample_set(a: GroupAction, tape: RandomTape):
    return a.sample_set(tape)


def canonical(a: GroupAction, x) -> bytes:
    _check_set(a, x)
    return a.canonical(x)


def verify_witness(a: GroupAction, g, x, y) -> bool:
    """True iff ``x = g * y``."""
    return a.is_group_element(g) and a.star(g, y) == x


# axiom checks

@dataclass
class CheckResult:
    check: str
    passed: bool
    cases: int
    exhaustive: bool
    detail: str = ""

    def as_record(self) -> dict:
        return {"check": self.check, "passed": self.passed, "cases": self.cases,
                "exhaustive": self.exhaustive, "detail": self.detail}


def _elements_or_sample(it_fn, sampler, count: int, exhaustive: bool, seed: bytes) -> List:
    if exhaustive:
        return list(it_fn())
    tape = RandomTape.from_seed(seed)
    return [sampler(tape) for _ in range(count)]


def check_action_axioms(a: GroupAction, bound: int = DEFAULT_ENUM_BOUND,
                        samples: int = 200, seed: bytes = b"axioms") -> List[CheckResult]:
    """Identity, compatibility and group-law checks.

    Exhaustive over all ``(g1, g2, x)`` when ``|G|^2 |X| <= bound``; otherwise
    over ``samples`` seeded random draws per quantifier.
    """
    G, X = a.group_order, a.set_size
    triple = G is not None and X is not None and G * G * X <= bound
    pairs = G is not None and G * G <= bound
    gs = _elements_or_sample(a.iter_group, a.sample_group, samples, pairs, seed + b"g")
    xs = _elements_or_sample(a.iter_set, a.sample_set, samples,
                             X is not None and X * (G or 1) <= bound, seed + b"x")
    out: List[CheckResult] = []

    e = a.identity
    bad = [x for x in xs if a.star(e, x) != x]
    out.append(CheckResult("identity", not bad, len(xs), X is not None and len(xs) == X,
                           f"first failure {bad[0]!r}" if bad else ""))

    if triple:
        cases = ((g1, g2, x) for g1 in gs for g2 in gs for x in xs)
        n_cases = len(gs) ** 2 * len(xs)
    else:
        tape = RandomTape.from_seed(seed + b"c")
        n_cases = samples * 5
        cases = ((a.sample_group(tape), a.sample_group(tape), a.sample_set(tape))
                 for _ in range(n_cases))
    fail = None
    for g1, g2, x in cases:
        if a.star(a.op(g1, g2), x) != a.star(g1, a.star(g2, x)):
            fail = (g1, g2, x)
            break
    out.append(CheckResult("compatibility", fail is None, n_cases, triple,
                           f"first failure {fail!r}" if fail else ""))

    ok = all(a.op(e, g) == g == a.op(g, e) for g in gs)
    out.append(CheckResult("group-identity", ok, len(gs), pairs))
    ok = all(a.op(g, a.inv(g)) == e == a.op(a.inv(g), g) for g in gs)
    out.append(CheckResult("group-inverse", ok, len(gs), pairs))
    if G is not None and G ** 3 <= bound:
        ok = all(a.op(a.op(g1, g2), g3) == a.op(g1, a.op(g2, g3))
                 for g1, g2, g3 in itertools.product(gs, repeat=3))
        out.append(CheckResult("group-associativity", ok, len(gs) ** 3, True))
    else:
        tape = RandomTape.from_seed(seed + b"a")
        trip = [(a.sample_group(tape), a.sample_group(tape), a.sample_group(tape))
                for _ in range(samples)]
        ok = all(a.op(a.op(g1, g2), g3) == a.op(g1, a.op(g2, g3)) for g1, g2, g3 in trip)
        out.append(CheckResult("group-associativity", ok, samples, False))

    ok = all(a.is_group_element(g) for g in gs) and all(a.is_set_element(x) for x in xs)
    out.append(CheckResult("membership", ok, len(gs) + len(xs), pairs))
    ok = all(a.decode_group(a.encode_group(g)) == g for g in gs) and \
        all(a.decode_set(a.encode_set(x)) == x for x in xs)
    out.append(CheckResult("encoding-roundtrip", ok, len(gs) + len(xs), pairs))

    if a.properties.regular and G is not None and X is not None:
        ok = G == X
        if ok and pairs and G * X <= bound:
            for x in xs:
                if len({a.star(g, x) for g in gs}) != X:
                    ok = False
                    break
        out.append(CheckResult("regular-bijection", ok, len(xs), G * X <= bound))
    if G is not None and X is not None and G * X <= bound:
        out.append(_check_declared_properties(a))
    return out


def _check_declared_properties(a: GroupAction) -> CheckResult:
    """Recompute transitivity and freeness by enumeration and compare to the flags."""
    xs = list(a.iter_set())
    gs = list(a.iter_group())
    e = a.identity
    transitive = len({a.star(g, xs[0]) for g in gs}) == len(xs)
    free = all(a.star(g, x) != x for g in gs if g != e for x in xs)
    want = a.properties
    ok = (transitive, free) == (want.transitive, want.free)
    detail = "" if ok else (f"declared transitive={want.transitive} free={want.free}, "
                            f"found transitive={transitive} free={free}")
    return CheckResult("declared-properties", ok, len(gs) * len(xs), True, detail)

