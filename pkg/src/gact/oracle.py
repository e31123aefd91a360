"""Problem oracles: exhaustive solvers and deliberately faulty wrappers.

The exhaustive solvers stand in for the unbounded party at desk scale. They
enumerate the group in ``iter_group`` order and return the first witness,
so repeated runs are reproducible even when witnesses are not unique.
"""

from __future__ import annotations

import enum
import json
import threading
from typing import Callable, IO, List, Optional

from .core import (
    DEFAULT_ENUM_BOUND,
    NOT_IN_ORBIT,
    DeltaSolution,
    EnumerationBoundExceeded,
    GroupAction,
)
from .problems import EmptyInstanceError, MGaipInstance, PGaipInstance, Problem, instance_hash


def _group_list(a: GroupAction, bound: int) -> list:
    cached = a.__dict__.get("_group_list")
    if cached is None:
        a.require_enumerable(bound)
        cached = a.__dict__["_group_list"] = list(a.iter_group())
    return cached


def witness_indices(a: GroupAction, x, y, bound: int = DEFAULT_ENUM_BOUND) -> frozenset:
    """Positions in the enumeration of G of every ``g`` with ``g * y = x``.

    Computed by a full scan of G on first use, then memoised per pair.
    """
    cache = a.__dict__.setdefault("_witness_cache", {})
    key = (x, y)
    hit = cache.get(key)
    if hit is None:
        G = _group_list(a, bound)
        star = a.star
        hit = cache[key] = frozenset(i for i, g in enumerate(G) if star(g, y) == x)
    return hit


def solve_gaip_bruteforce(a: GroupAction, x, y, bound: int = DEFAULT_ENUM_BOUND) -> DeltaSolution:
    if a.group_order is not None and a.group_order <= bound:
        idx = witness_indices(a, x, y, bound)
        return DeltaSolution(_group_list(a, bound)[min(idx)]) if idx else NOT_IN_ORBIT
    found = a.search_witness(x, y)
    if found is None:
        raise EnumerationBoundExceeded(
            f"{a.action_id}: |G| = {a.group_order} exceeds enumeration bound {bound}")
    return found


def solve_mgaip_bruteforce(a: GroupAction, q: MGaipInstance,
                           bound: int = DEFAULT_ENUM_BOUND) -> DeltaSolution:
    if not q.pairs:
        raise EmptyInstanceError("instance needs at least one pair")
    if a.group_order is not None and a.group_order <= bound:
        common = None
        for x, y in q.pairs:
            idx = witness_indices(a, x, y, bound)
            common = idx if common is None else common & idx
            if not common:
                return NOT_IN_ORBIT
        return DeltaSolution(_group_list(a, bound)[min(common)])
    if a.properties.free:
        # witnesses are unique, so the first pair's witness is the only candidate
        sol = a.search_witness(*q.pairs[0])
        if sol is not None:
            if sol.found and all(a.star(sol.witness, y) == x for x, y in q.pairs):
                return sol
            return NOT_IN_ORBIT
    raise EnumerationBoundExceeded(
        f"{a.action_id}: |G| = {a.group_order} exceeds enumeration bound {bound}")


def decide_pgaip_bruteforce(a: GroupAction, q: PGaipInstance,
                            bound: int = DEFAULT_ENUM_BOUND) -> int:
    """1 iff some ``g`` satisfies every pair, whatever the promise."""
    return int(solve_mgaip_bruteforce(a, MGaipInstance(q.pairs), bound).found)


def decide_dgaip(a: GroupAction, x, y, bound: int = DEFAULT_ENUM_BOUND) -> int:
    """1 iff ``x`` and ``y`` share an orbit."""
    return int(a.same_orbit(x, y, bound))


class Behavior(str, enum.Enum):
    EXACT = "exact"
    AVERAGE_CASE = "average-case"
    ADVERSARIAL = "adversarial"


def _wrong_answer(problem: Problem, answer):
    if problem in (Problem.PGAIP, Problem.DGAIP):
        return 1 - answer
    return NOT_IN_ORBIT


class Oracle:
    """Callable answering instances of one problem on one action.

    ``calls`` counts queries; increments are lock-protected so concurrent
    callers get an exact total.
    """

    def __init__(self, action: GroupAction, problem: Problem,
                 behavior: Behavior = Behavior.EXACT, *, inner: Optional["Oracle"] = None,
                 bad_set: Optional[Callable] = None, corruption_rule: Optional[Callable] = None,
                 bound: int = DEFAULT_ENUM_BOUND, log: Optional[List[dict]] = None):
        self.action = action
        self.problem = Problem(problem)
        self.behavior = Behavior(behavior)
        self.inner = inner
        self.bad_set = bad_set
        self.corruption_rule = corruption_rule
        self.bound = bound
        self.log = log
        self.calls = 0
        self._lock = threading.Lock()

    def _exact(self, inst):
        a, b = self.action, self.bound
        if self.problem is Problem.GAIP:
            return solve_gaip_bruteforce(a, inst.x, inst.y, b)
        if self.problem is Problem.MGAIP:
            return solve_mgaip_bruteforce(a, inst, b)
        if self.problem is Problem.PGAIP:
            return decide_pgaip_bruteforce(a, inst, b)
        return decide_dgaip(a, inst.x, inst.y, b)

    def __call__(self, inst):
        with self._lock:
            self.calls += 1
        if self.behavior is Behavior.EXACT:
            answer = truth = self._exact(inst)
        else:
            truth = self.inner(inst)
            if self.behavior is Behavior.AVERAGE_CASE:
                answer = _wrong_answer(self.problem, truth) if self.bad_set(inst) else truth
            else:
                answer = self.corruption_rule(inst, truth)
        if self.log is not None:
            self.log.append({"problem": self.problem.value,
                             "instance-hash": instance_hash(self.action, inst),
                             "answer": describe_answer(self.action, answer),
                             "correct": answer == truth})
        return answer

    def __repr__(self) -> str:
        return f"<Oracle {self.problem.value} {self.behavior.value} on {self.action.action_id}>"


def exact_oracle(a: GroupAction, problem: Problem, bound: int = DEFAULT_ENUM_BOUND,
                 log: Optional[List[dict]] = None) -> Oracle:
    return Oracle(a, problem, Behavior.EXACT, bound=bound, log=log)


def wrap_average_case(inner: Oracle, bad_set_predicate: Callable,
                      log: Optional[List[dict]] = None) -> Oracle:
    """Answer like ``inner`` except on the bad set, where the answer is wrong.

    Search problems get "not in orbit", decision problems the flipped bit.
    """
    if inner.behavior is not Behavior.EXACT:
        raise ValueError("average-case wrapping expects an exact inner oracle")
    return Oracle(inner.action, inner.problem, Behavior.AVERAGE_CASE, inner=inner,
                  bad_set=bad_set_predicate, bound=inner.bound, log=log)


def wrap_adversarial(inner: Oracle, corruption_rule: Callable,
                     log: Optional[List[dict]] = None) -> Oracle:
    """``corruption_rule(instance, true_answer)`` decides every answer."""
    return Oracle(inner.action, inner.problem, Behavior.ADVERSARIAL, inner=inner,
                  corruption_rule=corruption_rule, bound=inner.bound, log=log)


def describe_answer(a: GroupAction, answer) -> object:
    """JSON-friendly form: hex witness encoding, "not-in-orbit", or the bit."""
    if isinstance(answer, DeltaSolution):
        return a.encode_group(answer.witness).hex() if answer.found else "not-in-orbit"
    return int(answer)


def write_jsonl(records, fh: IO[str]) -> None:
    for rec in records:
        fh.write(json.dumps(rec, sort_keys=True) + "\n")

