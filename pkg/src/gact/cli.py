"""``gact``: run axiom checks, reductions, protocol sessions and distribution
comparisons, writing one JSON object per line.

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from dataclasses import asdict, dataclass
from typing import IO, List, Optional, Sequence

from . import ip
from .actions import ActionSpec, action_from_id, parse_kv, parse_set_element
from .core import DEFAULT_ENUM_BOUND, GactError, check_action_axioms
from .experiments import (
    digest,
    exhaustive_reduction,
    ground_truth,
    make_instance,
    oracle_from_spec,
    parse_pairs,
    read_pairs_file,
    seeded_reduction,
    sigma_distribution,
)
from .oracle import describe_answer
from .problems import Problem
from .reduce import ReductionConfig
from .stats import tv_distance
from .tape import TapeExhausted
from .wire import parse_address

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("axioms", "reduce", "protocol", "distributions")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    action: str
    seed: str
    enum_bound: int
    problem: Optional[str] = None
    instance: Optional[str] = None
    oracle: Optional[str] = None
    repetitions: Optional[int] = None
    rounds: Optional[int] = None
    sessions: Optional[int] = None
    prover: Optional[str] = None

    def as_record(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


class Reporter:
    def __init__(self, fh: IO[str]):
        self.fh = fh

    def emit(self, kind: str, **fields) -> None:
        fields["kind"] = kind
        self.fh.write(json.dumps(fields, sort_keys=True) + "\n")


# argument handling

def _common(p: argparse.ArgumentParser) -> None:
    sup = argparse.SUPPRESS
    p.add_argument("--seed", default=sup, help="seed for all randomness (default 0)")
    p.add_argument("--out", default=sup, help="write the JSONL report here instead of stdout")
    p.add_argument("--enum-bound", type=int, default=sup, dest="enum_bound",
                   help=f"largest set to enumerate (default {DEFAULT_ENUM_BOUND})")
    p.add_argument("--config", default=sup, help="file of key=value defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gact", description=__doc__.split("\n\n")[0])
    _common(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("axioms", help="check the action and group laws")
    _common(p)
    p.add_argument("--action", required=True)
    p.add_argument("--samples", type=int, default=200)

    p = sub.add_parser("reduce", help="solve an instance through the blinded-query reduction")
    _common(p)
    p.add_argument("--action", required=True)
    p.add_argument("--problem", required=True, choices=["gaip", "mgaip", "pgaip"])
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--instance", help='pairs "x,y;x,y"')
    src.add_argument("--instance-file", dest="instance_file", help="one 'x y' pair per line")
    p.add_argument("--oracle", default="exact",
                   help="exact | avg:first-coord-V | avg:hash-P/Q | adv:wrong-witness")
    p.add_argument("--reps", type=int, default=1)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive-tapes", action="store_true", dest="exhaustive_tapes")
    mode.add_argument("--trials", type=int, default=1)

    p = sub.add_parser("protocol", help="run the orbit-distinctness protocol")
    _common(p)
    p.add_argument("--action", required=True)
    p.add_argument("--y0", required=True)
    p.add_argument("--y1", required=True)
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--prover", default="honest", choices=list(ip.PROVER_KINDS))
    p.add_argument("--sessions", type=int, default=1)
    p.add_argument("--wire", help="host:port of the networked peer")
    p.add_argument("--role", choices=["prover", "verifier"])

    p = sub.add_parser("distributions", help="exact blinded-instance histograms")
    _common(p)
    p.add_argument("--action", required=True)
    p.add_argument("--problem", required=True, choices=["gaip", "mgaip", "pgaip"])
    p.add_argument("--instance", required=True)
    p.add_argument("--compare", help="second instance; reports the total variation distance")
    p.add_argument("--expect-equal", action="store_true", dest="expect_equal",
                   help="exit 1 unless the two histograms coincide")
    p.add_argument("--histograms", action="store_true", help="also emit every bin")
    return parser


FLAG_KEYS = {"exhaustive-tapes", "expect-equal", "histograms"}


def config_tokens(text: str) -> List[str]:
    """Turn key=value lines into option tokens; ``kind``/``n``/... name an action."""
    kv = parse_kv(text)
    action_keys = {"kind", "n", "k", "p", "generator", "raw"}
    tokens: List[str] = []
    if "kind" in kv:
        spec = ActionSpec.from_config("".join(f"{k}={kv[k]}\n" for k in action_keys if k in kv))
        tokens += ["--action", spec.action_id]
    for key, val in kv.items():
        if key in action_keys:
            continue
        if key in FLAG_KEYS:
            if val.lower() in ("1", "true", "yes"):
                tokens.append(f"--{key}")
            continue
        tokens += [f"--{key}", val]
    return tokens


def _split_config(argv: List[str]) -> List[str]:
    """Insert tokens from ``--config`` right after the subcommand so CLI flags win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    try:
        with open(known.config, encoding="utf-8") as fh:
            tokens = config_tokens(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from None
    pos = next((i for i, t in enumerate(argv) if t in COMMANDS), None)
    if pos is None:
        return argv
    return argv[:pos + 1] + tokens + argv[pos + 1:]


def _defaults(args: argparse.Namespace) -> argparse.Namespace:
    for name, value in (("seed", "0"), ("out", None), ("enum_bound", DEFAULT_ENUM_BOUND)):
        if not hasattr(args, name):
            setattr(args, name, value)
    if args.enum_bound < 1:
        raise UsageError("--enum-bound must be positive")
    return args


# subcommands

def cmd_axioms(args, out: Reporter) -> int:
    a = action_from_id(args.action)
    results = check_action_axioms(a, args.enum_bound, samples=args.samples,
                                  seed=f"axioms:{args.seed}".encode())
    for r in results:
        out.emit("axiom", action=a.action_id, **r.as_record())
    ok = all(r.passed for r in results)
    out.emit("summary", action=a.action_id, passed=ok, checks=len(results),
             failed=[r.check for r in results if not r.passed])
    return EXIT_OK if ok else EXIT_FAIL


def _round_records(out: Reporter, outcome) -> None:
    for rec in outcome.rounds:
        out.emit("round", trial=outcome.trial, **rec)


def cmd_reduce(args, out: Reporter) -> int:
    a = action_from_id(args.action)
    problem = Problem(args.problem)
    if args.reps < 1:
        raise UsageError("--reps must be >= 1")
    pairs = (read_pairs_file(a, args.instance_file) if args.instance_file
             else parse_pairs(a, args.instance))
    inst = make_instance(problem, pairs)
    oracle = oracle_from_spec(a, problem, args.oracle, args.enum_bound)
    cfg = ReductionConfig(repetitions=args.reps)
    truth = ground_truth(a, problem, inst, args.enum_bound)
    if args.exhaustive_tapes:
        res = exhaustive_reduction(problem, a, inst, oracle, cfg, args.enum_bound, truth)
        outcomes = res.outcomes
        summary = {"mode": "exhaustive", "successes": res.successes, "tapes": res.sufficient,
                   "exhausted": res.exhausted,
                   "fraction": f"{res.successes}/{res.sufficient}",
                   "reduced": str(res.fraction) if res.sufficient else None}
    else:
        if args.trials < 1:
            raise UsageError("--trials must be >= 1")
        outcomes = seeded_reduction(problem, a, inst, oracle, cfg, args.seed, args.trials,
                                    args.enum_bound, truth)
        ok = sum(o.success for o in outcomes)
        summary = {"mode": "seeded", "successes": ok, "trials": len(outcomes),
                   "fraction": f"{ok}/{len(outcomes)}"}
    out.emit("config", **ExperimentConfig("reduce", a.action_id, str(args.seed), args.enum_bound,
                                          problem.value, args.instance or args.instance_file,
                                          args.oracle, args.reps).as_record())
    for o in outcomes:
        _round_records(out, o)
        out.emit("trial", trial=o.trial, success=o.success,
                 answer=None if o.answer is None else describe_answer(a, o.answer),
                 error=o.error)
    out.emit("summary", oracle_calls=oracle.calls,
             truth=describe_answer(a, truth), **summary)
    all_ok = all(o.success for o in outcomes)
    return EXIT_FAIL if args.oracle == "exact" and not all_ok else EXIT_OK


def _session_records(out: Reporter, j: int, t: ip.Transcript) -> None:
    for rec in t.rounds:
        out.emit("round", session=j, **rec)
    rec = {"verdict": t.verdict, "rounds": t.rounds_count,
           "accepted_rounds": t.accepted_rounds,
           "transcript_sha256": digest(t.to_bytes())}
    if t.diagnostic is not None:
        rec["diagnostic"] = t.diagnostic
    out.emit("session", session=j, **rec)


def cmd_protocol(args, out: Reporter) -> int:
    a = action_from_id(args.action)
    inst = ip.ProtocolInstance(a, parse_set_element(a, args.y0), parse_set_element(a, args.y1))
    if args.rounds < 1 or args.sessions < 1:
        raise UsageError("--rounds and --sessions must be >= 1")
    if (args.wire is None) != (args.role is None):
        raise UsageError("--wire and --role go together")
    if args.role == "prover":
        host, port = parse_address(args.wire)

        def announce(bound_port):
            print(f"listening {host}:{bound_port}", file=sys.stderr, flush=True)
        verdicts = ip.serve_prover(inst, args.prover, args.seed, args.sessions,
                                   host, port, on_listen=announce)
        for j, v in enumerate(verdicts, 1):
            out.emit("served", session=j, verdict=None if v is None else
                     ("accept" if v else "reject"))
        return EXIT_OK
    out.emit("config", **ExperimentConfig("protocol", a.action_id, str(args.seed), args.enum_bound,
                                          instance=f"{args.y0},{args.y1}", rounds=args.rounds,
                                          sessions=args.sessions, prover=args.prover).as_record())
    accepted = 0
    any_transport_error = False
    for j in range(1, args.sessions + 1):
        vtape = ip.verifier_session_tape(args.seed, j)
        if args.role == "verifier":
            host, port = parse_address(args.wire)
            t = ip.run_remote_session(inst, host, port, args.rounds, vtape)
        else:
            prover = ip.make_prover(args.prover, inst, ip.prover_session_tape(args.seed, j))
            t = ip.run_session(inst, prover, args.rounds, vtape)
        any_transport_error |= t.diagnostic is not None
        accepted += t.accepted
        _session_records(out, j, t)
    yes = inst.is_yes_instance()
    out.emit("summary", sessions=args.sessions, accepted=accepted, rounds=args.rounds,
             prover=args.prover, same_orbit=yes)
    if any_transport_error:
        return EXIT_FAIL
    # completeness: an honest prover on disjoint orbits must always be accepted
    if args.prover == "honest" and not yes and accepted != args.sessions:
        return EXIT_FAIL
    return EXIT_OK


def cmd_distributions(args, out: Reporter) -> int:
    a = action_from_id(args.action)
    problem = Problem(args.problem)
    inst = make_instance(problem, parse_pairs(a, args.instance))
    h1 = sigma_distribution(problem, a, inst, args.enum_bound)
    hists = [("instance", h1)]
    if args.compare:
        h2 = sigma_distribution(problem, a, make_instance(problem, parse_pairs(a, args.compare)),
                                args.enum_bound)
        hists.append(("compare", h2))
    for label, h in hists:
        out.emit("histogram", which=label, bins=len(h.bins), total=h.total,
                 exhausted=h.exhausted)
        if args.histograms:
            for rec in h.records():
                out.emit("bin", which=label, **rec)
    if not args.compare:
        if args.expect_equal:
            raise UsageError("--expect-equal needs --compare")
        return EXIT_OK
    tv = tv_distance(h1, hists[1][1])
    out.emit("tv", tv=str(tv))
    return EXIT_FAIL if args.expect_equal and tv != 0 else EXIT_OK


HANDLERS = {"axioms": cmd_axioms, "reduce": cmd_reduce, "protocol": cmd_protocol,
            "distributions": cmd_distributions}


def run_cli(argv: Optional[Sequence[str]] = None, stdout: Optional[IO[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = _defaults(parser.parse_args(_split_config(argv)))
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    except (UsageError, GactError, ValueError) as exc:
        print(f"gact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with contextlib.ExitStack() as stack:
            fh = stdout if args.out is None else stack.enter_context(
                open(args.out, "w", encoding="utf-8"))
            return HANDLERS[args.command](args, Reporter(fh))
    except TapeExhausted as exc:
        print(f"gact: error: tape exhausted: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, GactError, ValueError, OSError) as exc:
        print(f"gact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
