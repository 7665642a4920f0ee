"""Byte-stream transports for session output.

The simulator is deterministic and one-directional: a session transcript
is rendered to wire bytes and pushed through the chosen channel so other
tooling can exercise its decoder against a realistic stream.
"""
from __future__ import annotations

import os
import socket
from pathlib import Path

from ..errors import OutOfRange


def stream_to_tcp(data: bytes, host: str = "127.0.0.1", port: int = 0) -> tuple[str, int]:
    """Serve the stream to the first client that connects; returns the bound
    address. A port of 0 picks a free one (printed by the CLI)."""
    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as srv:
        srv.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        srv.bind((host, port))
        bound = srv.getsockname()
        srv.listen(1)
        conn, _ = srv.accept()
        with conn:
            conn.sendall(data)
    return bound


def stream_to_pty(data: bytes) -> str:
    """Write the stream to a fresh pseudo-terminal; returns the slave path.

    The caller is expected to have a reader attached promptly; writes block
    once the kernel buffer fills.
    """
    master, slave = os.openpty()
    name = os.ttyname(slave)
    try:
        os.write(master, data)
    finally:
        os.close(master)
        os.close(slave)
    return name


def stream_to_file(data: bytes, path: str | Path) -> None:
    Path(path).write_bytes(data)


def open_output(transport: str):
    if transport not in ("mem", "tcp", "pty"):
        raise OutOfRange(f"unknown transport {transport!r}")
