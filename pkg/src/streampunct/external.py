"""Client for out-of-process taggers speaking the line-delimited JSON protocol.

One request per line on the child's stdin: {"id": <int>, "words": [...]};
one response per line on its stdout: {"id": <int>, "tags": [...]} with the
id echoed and one tag name per word. The child owns the model; this side
only enforces the protocol.
"""

from __future__ import annotations

import json
import shlex
import subprocess
from typing import Sequence

from .core import PunctTag, Word


class ExternalTaggerError(RuntimeError):
    """The external tagger process violated the protocol or died."""


class SubprocessTagger:
    """Tagger backed by a child process; usable as a context manager."""

    def __init__(self, command: str | Sequence[str]):
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        self._proc = subprocess.Popen(
            argv,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            encoding="utf-8",
            bufsize=1,
        )
        self._next_id = 0

    def tag(self, words: Sequence[Word]) -> list[PunctTag]:
        request_id = self._next_id
        self._next_id += 1
        request = {"id": request_id, "words": [str(w) for w in words]}
        try:
            self._proc.stdin.write(json.dumps(request, ensure_ascii=False) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, ValueError) as exc:
            raise ExternalTaggerError(f"external tagger is not accepting input: {exc}") from None

        line = self._proc.stdout.readline()
        if not line:
            raise ExternalTaggerError("external tagger closed its output stream")
        try:
            response = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ExternalTaggerError(f"unparsable response line: {exc}") from None
        if not isinstance(response, dict):
            raise ExternalTaggerError(f"response must be a JSON object, got {line!r}")
        if response.get("id") != request_id:
            raise ExternalTaggerError(
                f"response id {response.get('id')!r} does not echo request id {request_id}"
            )
        if "error" in response:
            raise ExternalTaggerError(f"external tagger error: {response['error']}")
        tags = response.get("tags")
        if not isinstance(tags, list):
            raise ExternalTaggerError("response missing 'tags' list")
        if len(tags) != len(words):
            raise ExternalTaggerError(
                f"response has {len(tags)} tags for {len(words)} words"
            )
        try:
            return [PunctTag.from_name(t) for t in tags]
        except (TypeError, ValueError) as exc:
            raise ExternalTaggerError(f"bad tag in response: {exc}") from None

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            try:
                self._proc.wait(timeout=5)
            except subprocess.TimeoutExpired:
                self._proc.kill()
                self._proc.wait()

    def __enter__(self) -> "SubprocessTagger":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()
