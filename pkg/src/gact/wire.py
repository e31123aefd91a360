"""Length-prefixed frames for the challenge/response protocol.

A frame is ``version (1 byte) | type (1 byte) | length (4 bytes, big-endian) |
payload``. Sessions send CHALLENGE/RESPONSE pairs followed by one VERDICT.
"""

from __future__ import annotations

import socket
import struct
from typing import Tuple

VERSION = 1
CHALLENGE = 1
RESPONSE = 2
VERDICT = 3
FRAME_TYPES = {CHALLENGE: "challenge", RESPONSE: "response", VERDICT: "verdict"}

HEADER = struct.Struct(">BBI")
MAX_PAYLOAD = 1 << 20


class FrameError(Exception):
    """Malformed frame, unexpected type, or a connection that closed mid-frame."""


def encode_frame(kind: int, payload: bytes) -> bytes:
    if kind not in FRAME_TYPES:
        raise FrameError(f"unknown frame type {kind}")
    if len(payload) > MAX_PAYLOAD:
        raise FrameError(f"payload of {len(payload)} bytes exceeds {MAX_PAYLOAD}")
    return HEADER.pack(VERSION, kind, len(payload)) + payload


def parse_header(header: bytes) -> Tuple[int, int]:
    version, kind, length = HEADER.unpack(header)
    if version != VERSION:
        raise FrameError(f"unsupported frame version {version}")
    if kind not in FRAME_TYPES:
        raise FrameError(f"unknown frame type {kind}")
    if length > MAX_PAYLOAD:
        raise FrameError(f"declared payload length {length} exceeds {MAX_PAYLOAD}")
    return kind, length


def decode_frame(data: bytes) -> Tuple[int, bytes]:
    """Decode exactly one frame; trailing bytes are an error."""
    if len(data) < HEADER.size:
        raise FrameError("truncated frame header")
    kind, length = parse_header(data[:HEADER.size])
    payload = data[HEADER.size:]
    if len(payload) != length:
        raise FrameError(f"payload length {len(payload)} does not match header {length}")
    return kind, payload


def recv_exact(sock: socket.socket, n: int) -> bytes:
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            raise FrameError(f"connection closed after {len(buf)} of {n} bytes")
        buf += chunk
    return bytes(buf)


def read_frame(sock: socket.socket) -> bytes:
    """Read one whole frame (header included) from a stream socket."""
    header = recv_exact(sock, HEADER.size)
    _, length = parse_header(header)
    return header + recv_exact(sock, length)


def encode_bit(bit: int) -> bytes:
    return bytes([bit])


def decode_bit(payload: bytes) -> int:
    if len(payload) != 1 or payload[0] not in (0, 1):
        raise FrameError(f"expected a single 0/1 byte, got {payload.hex() or 'empty'}")
    return payload[0]


def parse_address(text: str) -> Tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not host or not port.isdigit():
        raise ValueError(f"expected host:port, got {text!r}")
    return host, int(port)
