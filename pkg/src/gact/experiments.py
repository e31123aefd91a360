"""Experiment drivers shared by the command line and the acceptance suite."""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from .actions import parse_set_element
from .core import DEFAULT_ENUM_BOUND, NOT_IN_ORBIT, DeltaSolution, EnumerationBoundExceeded, GroupAction
from .oracle import (
    Oracle,
    decide_pgaip_bruteforce,
    exact_oracle,
    solve_gaip_bruteforce,
    solve_mgaip_bruteforce,
    wrap_adversarial,
    wrap_average_case,
)
from .problems import GaipInstance, MGaipInstance, PGaipInstance, Problem, encode_instance, instance_hash
from .reduce import (
    SIGMA,
    AllRoundsFailed,
    ReductionConfig,
    blinder_count,
    derive_blinders,
    minimal_tape_bits,
    self_reduce,
    verify_answer,
)
from .stats import Histogram, exact_distribution
from .tape import RandomTape, TapeExhausted, enumerate_tapes


# instance literals

def split_pair(a: GroupAction, text: str) -> tuple:
    """Split ``"x,y"`` at the one comma that leaves two valid literals.

    Graph literals such as ``edges:0-1,1-2`` contain commas themselves, so
    every split point is tried.
    """
    text = text.strip()
    found = []
    for i, ch in enumerate(text):
        if ch != ",":
            continue
        try:
            found.append((parse_set_element(a, text[:i].strip()),
                          parse_set_element(a, text[i + 1:].strip())))
        except ValueError:
            continue
    if len(found) != 1:
        reason = "no" if not found else "more than one"
        raise ValueError(f"{reason} way to read {text!r} as a pair of {a.action_id} elements")
    return found[0]


def parse_pairs(a: GroupAction, text: str) -> tuple:
    """``"x1,y1;x2,y2;..."``, each side a set literal of ``a``."""
    chunks = [c for c in text.split(";") if c.strip()]
    if not chunks:
        raise ValueError("instance has no pairs")
    return tuple(split_pair(a, c) for c in chunks)


def read_pairs_file(a: GroupAction, path: str) -> tuple:
    """One pair per line, the two literals separated by whitespace; ``#`` starts a comment."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected two literals, got {len(parts)}")
            pairs.append((parse_set_element(a, parts[0]), parse_set_element(a, parts[1])))
    if not pairs:
        raise ValueError(f"{path}: no pairs")
    return tuple(pairs)


def make_instance(problem: Problem, pairs: Sequence[tuple]):
    problem = Problem(problem)
    if problem is Problem.GAIP:
        if len(pairs) != 1:
            raise ValueError(f"a gaip instance has exactly one pair, got {len(pairs)}")
        return GaipInstance(*pairs[0])
    if problem is Problem.MGAIP:
        return MGaipInstance(tuple(pairs))
    if problem is Problem.PGAIP:
        return PGaipInstance(tuple(pairs))
    raise ValueError(f"{problem.value} has no self-reduction")


# oracles from a short text description

def _first_x(inst):
    return inst.pairs[0][0]


def oracle_from_spec(a: GroupAction, problem: Problem, spec: str,
                     bound: int = DEFAULT_ENUM_BOUND, log: Optional[list] = None) -> Oracle:
    """``exact``, ``avg:first-coord-V``, ``avg:hash-P/Q`` or ``adv:wrong-witness``.

    ``first-coord-V`` is wrong exactly when the first element of the first
    pair equals ``V``; ``hash-P/Q`` is wrong when the instance hash mod ``Q``
    is below ``P``.
    """
    inner = exact_oracle(a, problem, bound)
    if spec == "exact":
        return exact_oracle(a, problem, bound, log)
    if spec.startswith("avg:first-coord-"):
        v = parse_set_element(a, spec[len("avg:first-coord-"):])
        return wrap_average_case(inner, lambda inst: _first_x(inst) == v, log)
    if spec.startswith("avg:hash-"):
        p_text, sep, q_text = spec[len("avg:hash-"):].partition("/")
        if not sep or not p_text.isdigit() or not q_text.isdigit() or int(q_text) == 0:
            raise ValueError(f"bad hash oracle {spec!r}; expected avg:hash-P/Q")
        p, q = int(p_text), int(q_text)
        return wrap_average_case(
            inner, lambda inst: int(instance_hash(a, inst), 16) % q < p, log)
    if spec == "adv:wrong-witness":
        return wrap_adversarial(inner, _wrong_witness_rule(a), log)
    raise ValueError(f"unknown oracle {spec!r}")


def _wrong_witness_rule(a: GroupAction) -> Callable:
    shift = next((g for g in a.iter_group() if g != a.identity), a.identity)

    def rule(inst, truth):
        if isinstance(truth, DeltaSolution):
            return DeltaSolution(a.op(truth.witness, shift)) if truth.found else NOT_IN_ORBIT
        return 1 - truth
    return rule


# ground truth and trial outcomes

def ground_truth(a: GroupAction, problem: Problem, inst, bound: int = DEFAULT_ENUM_BOUND):
    problem = Problem(problem)
    if problem is Problem.GAIP:
        return solve_gaip_bruteforce(a, inst.x, inst.y, bound)
    if problem is Problem.MGAIP:
        return solve_mgaip_bruteforce(a, inst, bound)
    return decide_pgaip_bruteforce(a, inst, bound)


def is_correct(a: GroupAction, problem: Problem, inst, answer, truth) -> bool:
    """Search answers are checked by acting; "not in orbit" must match the truth."""
    if Problem(problem) is Problem.PGAIP:
        return answer == truth
    if answer.found:
        return verify_answer(a, inst, answer)
    return not truth.found


@dataclass
class TrialOutcome:
    trial: int
    success: bool
    rounds: List[dict] = field(default_factory=list)
    answer: object = None
    error: Optional[str] = None


def run_trial(problem: Problem, a: GroupAction, inst, oracle: Callable, cfg: ReductionConfig,
              tape: RandomTape, truth, trial: int = 0) -> TrialOutcome:
    """One reduction call. :class:`TapeExhausted` propagates to the caller."""
    trace: List[dict] = []
    try:
        answer = self_reduce(problem, a, inst, oracle, cfg, tape, trace)
    except AllRoundsFailed as exc:
        return TrialOutcome(trial, False, exc.rounds, error=str(exc))
    return TrialOutcome(trial, is_correct(a, problem, inst, answer, truth), trace, answer)


@dataclass
class ExhaustiveResult:
    successes: int
    sufficient: int
    exhausted: int
    outcomes: List[TrialOutcome]

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.successes, self.sufficient)


def _every_round_sufficient(a: GroupAction, problem: Problem, tape: RandomTape, reps: int) -> bool:
    """Whether each round's slice yields its blinders.

    Checking all rounds up front, not just the ones a run happens to reach,
    keeps the rounds independent under enumeration.
    """
    try:
        for r in range(1, reps + 1):
            derive_blinders(a, 1, tape.segment(r), blinder_count(problem))
    except TapeExhausted:
        return False
    return True


def reduction_tape_bits(a: GroupAction, problem: Problem, repetitions: int) -> int:
    return repetitions * minimal_tape_bits(a, problem)


def exhaustive_reduction(problem: Problem, a: GroupAction, inst, oracle: Callable,
                         cfg: ReductionConfig, bound: int = DEFAULT_ENUM_BOUND,
                         truth=None) -> ExhaustiveResult:
    """Run the reduction on every explicit tape of minimal length.

    Each repetition owns a fixed slice of ``minimal_tape_bits`` bits. Tapes
    with a slice that cannot finish its rejection sampling are counted as
    ``exhausted`` and left out of the success fraction.
    """
    seg = minimal_tape_bits(a, problem)
    nbits = cfg.repetitions * seg
    if (1 << nbits) > bound:
        raise EnumerationBoundExceeded(f"2^{nbits} tapes exceed enumeration bound {bound}")
    if truth is None:
        truth = ground_truth(a, problem, inst, bound)
    outcomes, exhausted = [], 0
    for idx, tape in enumerate(enumerate_tapes(nbits, seg if cfg.repetitions > 1 else None)):
        if not _every_round_sufficient(a, problem, tape, cfg.repetitions):
            exhausted += 1
            continue
        outcomes.append(run_trial(problem, a, inst, oracle, cfg, tape, truth, idx))
    return ExhaustiveResult(sum(o.success for o in outcomes), len(outcomes), exhausted, outcomes)


def seeded_reduction(problem: Problem, a: GroupAction, inst, oracle: Callable,
                     cfg: ReductionConfig, seed, trials: int,
                     bound: int = DEFAULT_ENUM_BOUND, truth=None) -> List[TrialOutcome]:
    """``trials`` reduction calls, trial ``i`` on segment ``i`` of the seed's tape."""
    if truth is None:
        truth = ground_truth(a, problem, inst, bound)
    base = RandomTape.from_seed(seed)
    return [run_trial(problem, a, inst, oracle, cfg, base.segment(i), truth, i)
            for i in range(1, trials + 1)]


# blinded-instance distributions

def sigma_distribution(problem: Problem, a: GroupAction, inst,
                       bound: int = DEFAULT_ENUM_BOUND) -> Histogram:
    """Exact histogram of ``sigma(1, inst, tape)`` over all minimal-length tapes."""
    sigma = SIGMA[Problem(problem)]
    nbits = minimal_tape_bits(a, problem)
    return exact_distribution(lambda t: encode_instance(a, sigma(a, 1, inst, t)),
                              enumerate_tapes(nbits), bound, size=1 << nbits)


def blinded_uniform_distribution(a: GroupAction, q: int,
                                 bound: int = DEFAULT_ENUM_BOUND) -> Histogram:
    """Pushforward through the pGAIP blinding of the uniform law on q-pair lists.

    Sums the exact sigma histogram of every list in ``(X x X)^q``.
    """
    xs = list(a.iter_set())
    nbits = minimal_tape_bits(a, Problem.PGAIP)
    total_cases = (len(xs) ** (2 * q)) * (1 << nbits)
    if total_cases > bound * 100:
        raise EnumerationBoundExceeded(f"{total_cases} cases exceed the enumeration budget")
    out = Histogram()
    for flat in itertools.product(xs, repeat=2 * q):
        pairs = tuple(zip(flat[0::2], flat[1::2]))
        h = sigma_distribution(Problem.PGAIP, a, PGaipInstance(pairs, "uniform"), bound)
        out.bins.update(h.bins)
        out.exhausted += h.exhausted
    return out


def uniform_pair_lists(a: GroupAction, q: int) -> Histogram:
    xs = list(a.iter_set())
    return Histogram.uniform(encode_instance(a, PGaipInstance(tuple(zip(flat[0::2], flat[1::2]))))
                             for flat in itertools.product(xs, repeat=2 * q))


def digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
