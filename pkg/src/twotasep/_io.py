"""Atomic file output and run manifests."""

from __future__ import annotations

import io
import json
import os
import tempfile
import time

SCHEMA_VERSION = 1
TOOL_VERSION = "0.1.0"


def write_text_atomic(path: str, text: str) -> None:
    """Write via a temp file in the target directory plus atomic rename."""
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(path: str, obj) -> None:
    write_text_atomic(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


class Manifest:
    """Reproducibility record accompanying every output file."""

    def __init__(self, command: str, config: dict, seeds=None):
        self.started = time.time()
        self.command = command
        self.config = config
        self.seeds = seeds or []
        self.outputs: list[str] = []

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": TOOL_VERSION,
            "command": self.command,
            "config": self.config,
            "seeds": self.seeds,
            "outputs": self.outputs,
            "wall_clock_seconds": round(time.time() - self.started, 3),
        }

    def write(self, path: str) -> None:
        write_json_atomic(path, self.as_dict())


def render_csv(write_rows) -> str:
    """Run a row-writing callback against an in-memory buffer."""
    buf = io.StringIO()
    write_rows(buf)
    return buf.getvalue()
