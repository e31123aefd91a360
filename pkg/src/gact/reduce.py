"""Nonadaptive one-query random self-reductions for GAIP, mGAIP and pGAIP.

Each problem gets a blinding map ``sigma(a, i, instance, tape)`` and a recovery
map ``phi(a, instance, tape, oracle_answer)``. Blinders are drawn from
``tape.segment(i)`` and nothing else, so ``phi`` re-derives exactly the
blinders ``sigma`` used without them ever travelling alongside the query.

GAIP blinds each side independently; mGAIP and pGAIP apply one blinder to
every coordinate, which conjugates the hidden witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional

from .core import (
    NOT_IN_ORBIT,
    DeltaSolution,
    GactError,
    GroupAction,
    MembershipError,
    compose,
    inverse,
)
from .oracle import describe_answer
from .problems import (
    GaipInstance,
    MGaipInstance,
    PGaipInstance,
    Problem,
    check_instance,
    instance_hash,
)
from .tape import RandomTape


class AllRoundsFailed(GactError):
    """No repetition produced a verified answer; ``rounds`` holds the per-round records."""

    def __init__(self, message: str, rounds: List[dict]):
        super().__init__(message)
        self.rounds = rounds


@dataclass(frozen=True)
class ReductionConfig:
    k: int = 1
    repetitions: int = 1
    tape_length: Optional[int] = None

    def __post_init__(self):
        if self.k != 1:
            raise ValueError("the implemented reductions make exactly one oracle query (k = 1)")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


def blinder_count(problem: Problem) -> int:
    return 2 if Problem(problem) is Problem.GAIP else 1


def minimal_tape_bits(a: GroupAction, problem: Problem) -> int:
    """Shortest explicit tape that can drive one round without rejections."""
    return blinder_count(problem) * a.sample_bits


def omega(a: GroupAction, problem: Problem, k: int = 1) -> int:
    """Nominal tape length per call: k queries, 2x margin for rejected draws."""
    return k * 2 * minimal_tape_bits(a, problem)


def derive_blinders(a: GroupAction, i: int, tape: RandomTape, count: int) -> tuple:
    """Blinders for query ``i``; a function of ``(i, tape)`` only."""
    seg = tape.segment(i)
    return tuple(a.sample_group(seg) for _ in range(count))


# GAIP

def sigma_gaip(a: GroupAction, i: int, inst: GaipInstance, tape: RandomTape) -> GaipInstance:
    check_instance(a, inst)
    gx, gy = derive_blinders(a, i, tape, 2)
    return GaipInstance(a.star(gx, inst.x), a.star(gy, inst.y))


def phi_gaip(a: GroupAction, inst: GaipInstance, tape: RandomTape,
             answer: DeltaSolution) -> DeltaSolution:
    """``gx^-1 . f . gy`` for a blinded answer ``f``; "not in orbit" passes through."""
    if not answer.found:
        return NOT_IN_ORBIT
    gx, gy = derive_blinders(a, 1, tape, 2)
    return DeltaSolution(compose(a, compose(a, inverse(a, gx), answer.witness), gy))


# mGAIP

def _blind_pairs(a: GroupAction, g, pairs) -> tuple:
    return tuple((a.star(g, x), a.star(g, y)) for x, y in pairs)


def sigma_mgaip(a: GroupAction, i: int, inst: MGaipInstance, tape: RandomTape) -> MGaipInstance:
    check_instance(a, inst)
    g, = derive_blinders(a, i, tape, 1)
    return MGaipInstance(_blind_pairs(a, g, inst.pairs))


def phi_mgaip(a: GroupAction, inst: MGaipInstance, tape: RandomTape,
              answer: DeltaSolution) -> DeltaSolution:
    """Undo the conjugation: ``g^-1 . f . g``."""
    if not answer.found:
        return NOT_IN_ORBIT
    g, = derive_blinders(a, 1, tape, 1)
    return DeltaSolution(compose(a, compose(a, inverse(a, g), answer.witness), g))


# pGAIP

def sigma_pgaip(a: GroupAction, i: int, inst: PGaipInstance, tape: RandomTape) -> PGaipInstance:
    check_instance(a, inst)
    g, = derive_blinders(a, i, tape, 1)
    return PGaipInstance(_blind_pairs(a, g, inst.pairs), inst.promise_tag)


def phi_pgaip(a: GroupAction, inst: PGaipInstance, tape: RandomTape, answer: int) -> int:
    return int(answer)


SIGMA = {Problem.GAIP: sigma_gaip, Problem.MGAIP: sigma_mgaip, Problem.PGAIP: sigma_pgaip}
PHI = {Problem.GAIP: phi_gaip, Problem.MGAIP: phi_mgaip, Problem.PGAIP: phi_pgaip}


def verify_answer(a: GroupAction, inst, answer: DeltaSolution) -> bool:
    """Act-and-compare on every pair of the instance."""
    if not answer.found or not a.is_group_element(answer.witness):
        return False
    g = answer.witness
    return all(a.star(g, y) == x for x, y in inst.pairs)


def self_reduce(problem: Problem, a: GroupAction, inst, oracle: Callable,
                cfg: ReductionConfig = ReductionConfig(), tape: Optional[RandomTape] = None,
                trace: Optional[List[dict]] = None):
    """Answer ``inst`` through ``cfg.repetitions`` blinded oracle queries.

    Round ``r`` runs on ``tape.segment(r)``. Search problems return the first
    verified witness. If none verifies and every round reported "not in orbit",
    that is the answer whenever it can be true (mGAIP, or any non-transitive
    action); anything else
    raises :class:`AllRoundsFailed`. pGAIP returns the majority bit, ties going
    to round 1.
    """
    problem = Problem(problem)
    if problem not in SIGMA:
        raise ValueError(f"no self-reduction for {problem.value}")
    if tape is None:
        raise ValueError("self_reduce needs a tape")
    sigma, phi = SIGMA[problem], PHI[problem]
    search = problem is not Problem.PGAIP
    rounds: List[dict] = []
    bits: List[int] = []
    for r in range(1, cfg.repetitions + 1):
        rtape = tape.segment(r)
        blinded = sigma(a, 1, inst, rtape)
        answer = oracle(blinded)
        rec = {"round": r, "blinded_instance_hash": instance_hash(a, blinded),
               "oracle_answer": describe_answer(a, answer), "final": False}
        if search:
            try:
                result = phi(a, inst, rtape, answer)
            except MembershipError:
                result = NOT_IN_ORBIT
            rec["verified"] = verify_answer(a, inst, result)
            rec["answer"] = describe_answer(a, result)
            rounds.append(rec)
            if rec["verified"]:
                rec["final"] = True
                _emit(trace, rounds)
                return result
        else:
            bit = phi(a, inst, rtape, answer)
            bits.append(bit)
            rec["verified"] = None
            rec["answer"] = bit
            rounds.append(rec)
    if not search:
        ones = sum(bits)
        zeros = len(bits) - ones
        result = bits[0] if ones == zeros else int(ones > zeros)
        rounds[-1]["final"] = True
        rounds[-1]["majority"] = result
        _emit(trace, rounds)
        return result
    _emit(trace, rounds)
    can_be_absent = problem is Problem.MGAIP or not a.properties.transitive
    if can_be_absent and all(rec["answer"] == "not-in-orbit" for rec in rounds):
        rounds[-1]["final"] = True
        return NOT_IN_ORBIT
    raise AllRoundsFailed(f"{problem.value}: none of {cfg.repetitions} rounds verified", rounds)


def _emit(trace: Optional[List[dict]], rounds: List[dict]) -> None:
    if trace is not None:
        trace.extend(rounds)


def try_self_reduce(problem: Problem, a: GroupAction, inst, oracle: Callable,
                    cfg: ReductionConfig, tape: RandomTape):
    """``self_reduce`` that reports (True, answer) or (False, reason) instead of raising.

    :class:`TapeExhausted` still propagates: an insufficient tape is not an
    outcome of the reduction.
    """
    try:
        return True, self_reduce(problem, a, inst, oracle, cfg, tape)
    except AllRoundsFailed as exc:
        return False, exc


# problems reduced to GAIP

def mgaip_via_gaip(a: GroupAction, inst: MGaipInstance, gaip_oracle: Callable) -> DeltaSolution:
    """Solve the first pair with a GAIP oracle and check the rest.

    Sound and complete on free actions, where the witness is unique.
    """
    x1, y1 = inst.pairs[0]
    sol = gaip_oracle(GaipInstance(x1, y1))
    if verify_answer(a, inst, sol):
        return sol
    return NOT_IN_ORBIT


def pgaip_via_gaip(a: GroupAction, inst: PGaipInstance, gaip_oracle: Callable) -> int:
    return int(mgaip_via_gaip(a, MGaipInstance(inst.pairs), gaip_oracle).found)

