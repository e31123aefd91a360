"""Private-coin interactive proof that two set elements lie in different orbits.

Per round the verifier draws a secret bit ``b`` and a uniform group element
``g``, sends ``x = g * y_b`` and accepts iff the prover names ``b``. If the
orbits are disjoint the unbounded prover always can. If they coincide, ``x`` is
distributed identically for both values of ``b``, so no prover beats 1/2 per
round and ``k`` sequential rounds cap acceptance at ``2**-k``.

Every session moves real frames (see :mod:`gact.wire`), whether the prover sits
in-process or across a socket, so transcripts from both modes compare
byte for byte.
"""

from __future__ import annotations

import socket
from dataclasses import dataclass, field
from typing import List, Optional, Protocol

from . import wire
from .core import GactError, GroupAction, MembershipError
from .tape import RandomTape


class TransitiveActionError(GactError, ValueError):
    """Every pair shares the single orbit, so the protocol has nothing to decide."""


class NeitherOrbitError(GactError):
    """A challenge outside both orbits; only a corrupted message produces one."""


class NotYesInstance(GactError, ValueError):
    pass


@dataclass(frozen=True)
class ProtocolInstance:
    action: GroupAction
    y0: object
    y1: object

    def __post_init__(self):
        if self.action.properties.transitive:
            raise TransitiveActionError(f"{self.action.action_id} is transitive")
        for y in (self.y0, self.y1):
            if not self.action.is_set_element(y):
                raise MembershipError(f"{y!r} is not an element of the set of {self.action.action_id}")

    def element(self, b: int):
        return self.y1 if b else self.y0

    def is_yes_instance(self) -> bool:
        """True when both elements share an orbit (the prover should fail)."""
        return self.action.same_orbit(self.y0, self.y1)


@dataclass(frozen=True)
class VerifierState:
    b: int
    g: object
    challenge: object


def verifier_challenge(inst: ProtocolInstance, tape: RandomTape):
    """Draw ``b`` then ``g`` from ``tape``; return the secret state and ``x``."""
    b = tape.read_bit()
    g = inst.action.sample_group(tape)
    x = inst.action.star(g, inst.element(b))
    return VerifierState(b, g, x), x


def honest_prover_respond(inst: ProtocolInstance, x, tape: Optional[RandomTape] = None) -> int:
    """The bit naming the orbit containing ``x``; a coin from ``tape`` if both do."""
    a = inst.action
    in0 = a.same_orbit(x, inst.y0)
    in1 = a.same_orbit(x, inst.y1)
    if in0 and in1:
        if tape is None:
            raise ValueError("both orbits match and the prover has no tape to guess with")
        return tape.read_bit()
    if in0:
        return 0
    if in1:
        return 1
    raise NeitherOrbitError(f"challenge {x!r} lies in neither orbit")


def best_cheating_prover_respond(inst: ProtocolInstance, x) -> int:
    """Always 0. On a yes-instance ``x`` carries no information about ``b``,
    so this is as good as any strategy."""
    if not inst.is_yes_instance():
        raise NotYesInstance("the elements lie in different orbits")
    return 0


class Prover(Protocol):
    def respond(self, x) -> int: ...


class HonestProver:
    def __init__(self, inst: ProtocolInstance, tape: Optional[RandomTape] = None):
        self.inst = inst
        self.tape = tape

    def respond(self, x) -> int:
        return honest_prover_respond(self.inst, x, self.tape)


class ConstantProver:
    def __init__(self, bit: int = 0):
        self.bit = bit

    def respond(self, x) -> int:
        return self.bit


class CheatingProver:
    def __init__(self, inst: ProtocolInstance):
        self.inst = inst

    def respond(self, x) -> int:
        return best_cheating_prover_respond(self.inst, x)


class GuessingProver:
    """Ignores the challenge and answers a fresh coin from its own tape."""

    def __init__(self, tape: RandomTape):
        self.tape = tape

    def respond(self, x) -> int:
        return self.tape.read_bit()


PROVER_KINDS = ("honest", "guess", "constant", "cheat")


def make_prover(kind: str, inst: ProtocolInstance, tape: RandomTape) -> Prover:
    if kind == "honest":
        return HonestProver(inst, tape)
    if kind == "guess":
        return GuessingProver(tape)
    if kind == "constant":
        return ConstantProver(0)
    if kind == "cheat":
        return CheatingProver(inst)
    raise ValueError(f"unknown prover {kind!r}; expected one of {', '.join(PROVER_KINDS)}")


def verifier_session_tape(seed, session: int) -> RandomTape:
    return RandomTape.from_seed(f"verifier:{seed}").segment(session)


def prover_session_tape(seed, session: int) -> RandomTape:
    return RandomTape.from_seed(f"prover:{seed}").segment(session)


# transports

def decode_challenge(action: GroupAction, payload: bytes):
    x = action.decode_set(payload)
    if not action.is_set_element(x):
        raise MembershipError(f"challenge {payload.hex()} is not an element of {action.action_id}")
    return x


class LocalTransport:
    """Hands frames to an in-process prover and queues its reply frames."""

    def __init__(self, action: GroupAction, prover: Prover):
        self.action = action
        self.prover = prover
        self._pending: List[bytes] = []
        self.verdict: Optional[int] = None

    def send(self, frame: bytes) -> None:
        kind, payload = wire.decode_frame(frame)
        if kind == wire.CHALLENGE:
            bit = self.prover.respond(decode_challenge(self.action, payload))
            self._pending.append(wire.encode_frame(wire.RESPONSE, wire.encode_bit(bit)))
        elif kind == wire.VERDICT:
            self.verdict = wire.decode_bit(payload)
        else:
            raise wire.FrameError(f"prover cannot accept a {wire.FRAME_TYPES[kind]} frame")

    def recv(self) -> bytes:
        if not self._pending:
            raise wire.FrameError("no reply pending")
        return self._pending.pop(0)


class SocketTransport:
    def __init__(self, sock: socket.socket):
        self.sock = sock

    def send(self, frame: bytes) -> None:
        self.sock.sendall(frame)

    def recv(self) -> bytes:
        return wire.read_frame(self.sock)


def serve_prover_connection(sock: socket.socket, action: GroupAction, prover: Prover) -> Optional[int]:
    """Answer challenges on ``sock`` until the verdict arrives; return it."""
    while True:
        kind, payload = wire.decode_frame(wire.read_frame(sock))
        if kind == wire.CHALLENGE:
            bit = prover.respond(decode_challenge(action, payload))
            sock.sendall(wire.encode_frame(wire.RESPONSE, wire.encode_bit(bit)))
        elif kind == wire.VERDICT:
            return wire.decode_bit(payload)
        else:
            raise wire.FrameError(f"prover cannot accept a {wire.FRAME_TYPES[kind]} frame")


# sessions

@dataclass
class Transcript:
    rounds: List[dict] = field(default_factory=list)
    verdict: str = "reject"
    rounds_count: int = 0
    frames: List[bytes] = field(default_factory=list)
    diagnostic: Optional[str] = None

    @property
    def accepted(self) -> bool:
        return self.verdict == "accept"

    @property
    def accepted_rounds(self) -> int:
        return sum(r["accepted"] for r in self.rounds)

    def to_bytes(self) -> bytes:
        return b"".join(self.frames)

    def as_record(self) -> dict:
        rec = {"verdict": self.verdict, "rounds": self.rounds_count,
               "accepted_rounds": self.accepted_rounds,
               "transcript_hex": self.to_bytes().hex()}
        if self.diagnostic is not None:
            rec["diagnostic"] = self.diagnostic
        return rec


def run_session(inst: ProtocolInstance, prover: Optional[Prover], rounds: int, tape: RandomTape,
                transport=None) -> Transcript:
    """Run ``rounds`` sequential rounds, round ``r`` on ``tape.segment(r)``.

    Pass either an in-process ``prover`` or a ``transport`` with send/recv.
    The verdict is accept iff every round matched. A failing transport ends
    the session with a reject verdict and a diagnostic.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if transport is None:
        if prover is None:
            raise ValueError("need a prover or a transport")
        transport = LocalTransport(inst.action, prover)
    a = inst.action
    t = Transcript(rounds_count=rounds)
    try:
        for r in range(1, rounds + 1):
            state, x = verifier_challenge(inst, tape.segment(r))
            frame = wire.encode_frame(wire.CHALLENGE, a.encode_set(x))
            t.frames.append(frame)
            transport.send(frame)
            reply = transport.recv()
            t.frames.append(reply)
            kind, payload = wire.decode_frame(reply)
            if kind != wire.RESPONSE:
                raise wire.FrameError(f"expected a response, got {wire.FRAME_TYPES[kind]}")
            bit = wire.decode_bit(payload)
            t.rounds.append({"round": r, "challenge": payload_hex(frame),
                             "response": bit, "accepted": int(bit == state.b)})
        t.verdict = "accept" if all(rec["accepted"] for rec in t.rounds) else "reject"
        frame = wire.encode_frame(wire.VERDICT, wire.encode_bit(int(t.accepted)))
        t.frames.append(frame)
        transport.send(frame)
    except (wire.FrameError, OSError, NeitherOrbitError, ValueError) as exc:
        t.verdict = "reject"
        t.diagnostic = f"{type(exc).__name__}: {exc}"
    return t


def payload_hex(frame: bytes) -> str:
    return frame[wire.HEADER.size:].hex()


def run_remote_session(inst: ProtocolInstance, host: str, port: int, rounds: int,
                       tape: RandomTape, timeout: float = 30.0) -> Transcript:
    """Verifier side of one session against a prover listening at host:port."""
    try:
        sock = socket.create_connection((host, port), timeout=timeout)
    except OSError as exc:
        t = Transcript(rounds_count=rounds)
        t.diagnostic = f"{type(exc).__name__}: {exc}"
        return t
    with sock:
        return run_session(inst, None, rounds, tape, transport=SocketTransport(sock))


def serve_prover(inst: ProtocolInstance, kind: str, seed, sessions: int,
                 host: str = "127.0.0.1", port: int = 0, on_listen=None) -> List[Optional[int]]:
    """Prover side: accept ``sessions`` connections one after another.

    Session ``j`` (1-based) gets the prover tape ``prover_session_tape(seed, j)``.
    ``on_listen(port)`` is called once the socket is bound.
    """
    verdicts: List[Optional[int]] = []
    with socket.create_server((host, port)) as server:
        if on_listen is not None:
            on_listen(server.getsockname()[1])
        for j in range(1, sessions + 1):
            conn, _ = server.accept()
            with conn:
                prover = make_prover(kind, inst, prover_session_tape(seed, j))
                try:
                    verdicts.append(serve_prover_connection(conn, inst.action, prover))
                except (wire.FrameError, OSError, NeitherOrbitError, ValueError):
                    verdicts.append(None)
    return verdicts
