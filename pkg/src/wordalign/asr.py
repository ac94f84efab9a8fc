"""Recognizer backends that return one cumulative hypothesis per frame."""

from __future__ import annotations

import base64
import bisect
import itertools
import json
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .audio import float_to_pcm16
from .timeline import CumulativeTranscript

DEFAULT_TIMEOUT_S = 5.0


class BackendError(RuntimeError):
    """Recoverable recognizer failure; the pipeline skips the frame."""


@dataclass(frozen=True)
class AsrScriptEntry:
    frame_index: int
    text: str

    def to_json(self) -> str:
        return json.dumps({"frame": self.frame_index, "text": self.text}, ensure_ascii=False)


def read_script(fp: IO[str]) -> list[AsrScriptEntry]:
    entries = []
    for lineno, line in enumerate(fp, 1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            entries.append(AsrScriptEntry(int(obj["frame"]), str(obj["text"])))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"script line {lineno}: {exc}") from exc
    return entries


def write_script(entries: Iterable[AsrScriptEntry], fp: IO[str]) -> None:
    for e in entries:
        fp.write(e.to_json() + "\n")


class AsrBackend:
    """Base class. Implementations must be safe to call from several threads."""

    def recognize_cumulative(self, store, upto_frame: int) -> CumulativeTranscript:
        raise NotImplementedError

    def close(self) -> None:
        pass


class ScriptedBackend(AsrBackend):
    """Replays a script; frames without an entry repeat the previous text."""

    def __init__(self, entries: Sequence[AsrScriptEntry]):
        entries = sorted(entries, key=lambda e: e.frame_index)
        frames = [e.frame_index for e in entries]
        if len(set(frames)) != len(frames):
            raise ValueError("script has more than one entry for a frame")
        self._frames = frames
        self._texts = [e.text for e in entries]

    @classmethod
    def from_texts(cls, texts: Sequence[str]) -> "ScriptedBackend":
        return cls([AsrScriptEntry(i, t) for i, t in enumerate(texts)])

    @classmethod
    def from_file(cls, path) -> "ScriptedBackend":
        with open(path, encoding="utf-8") as fp:
            return cls(read_script(fp))

    def text_at(self, frame_index: int) -> str:
        k = bisect.bisect_right(self._frames, frame_index)
        return self._texts[k - 1] if k else ""

    def recognize_cumulative(self, store, upto_frame: int) -> CumulativeTranscript:
        return CumulativeTranscript(upto_frame, self.text_at(upto_frame))


class HttpBackend(AsrBackend):
    """Client for a recognition service that re-decodes the full audio each frame.

    Each call POSTs JSON ``{"session", "seq", "sample_rate", "pcm16"}`` where
    ``pcm16`` is base64 little-endian PCM16 of everything from t=0 to the end
    of the frame. The reply is ``{"seq", "text"}``; ``seq`` must echo the
    request's.
    """

    def __init__(self, url: str, session: str, timeout_s: float = DEFAULT_TIMEOUT_S):
        self.url = url
        self.session = session
        self.timeout_s = timeout_s
        self._seq = itertools.count()
        self._lock = threading.Lock()

    def recognize_cumulative(self, store, upto_frame: int) -> CumulativeTranscript:
        with self._lock:
            seq = next(self._seq)
        _, end_s = store.frame_bounds(upto_frame)
        pcm = float_to_pcm16(store.slice(0.0, end_s))
        body = json.dumps({
            "session": self.session,
            "seq": seq,
            "sample_rate": store.sample_rate_hz,
            "pcm16": base64.b64encode(pcm).decode("ascii"),
        }).encode("utf-8")
        req = urllib.request.Request(
            self.url, data=body, method="POST",
            headers={"Content-Type": "application/json", "session": self.session},
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout_s) as resp:
                reply = json.loads(resp.read().decode("utf-8"))
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise BackendError(f"frame {upto_frame}: {exc}") from exc
        if reply.get("seq") != seq:
            raise BackendError(f"frame {upto_frame}: reply seq {reply.get('seq')} != {seq}")
        return CumulativeTranscript(upto_frame, str(reply.get("text", "")))
