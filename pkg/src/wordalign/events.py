"""Caption events and their JSON Lines wire format."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .timeline import SILENT, TIME_TOL, Loudness, WordSegment


class EventKind(str, enum.Enum):
    WORD_FINAL = "word_final"
    PARTIAL_TAIL = "partial_tail"
    REVISION = "revision"


@dataclass(frozen=True)
class CaptionEvent:
    kind: EventKind
    session: str
    word: str
    start_s: float
    end_s: float
    loudness_dbfs: Loudness = SILENT
    style_scale: float = 1.0
    frame: int = 0
    attrs: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_word(cls, kind: EventKind, word: WordSegment, session: str, frame: int) -> "CaptionEvent":
        return cls(
            kind=kind,
            session=session,
            word=word.word,
            start_s=word.start_s,
            end_s=word.end_s,
            loudness_dbfs=word.loudness_dbfs,
            style_scale=word.style_scale,
            frame=frame,
            attrs=dict(word.attributes),
        )

    def to_dict(self) -> dict:
        # key order is part of the wire format
        return {
            "kind": self.kind.value,
            "session": self.session,
            "word": self.word,
            "start_s": self.start_s,
            "end_s": self.end_s,
            "loudness_dbfs": None if self.loudness_dbfs is SILENT else float(self.loudness_dbfs),
            "style_scale": self.style_scale,
            "frame": self.frame,
            "attrs": {str(k): str(v) for k, v in self.attrs.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: dict) -> "CaptionEvent":
        db = d.get("loudness_dbfs")
        return cls(
            kind=EventKind(d["kind"]),
            session=d.get("session", ""),
            word=d["word"],
            start_s=float(d["start_s"]),
            end_s=float(d["end_s"]),
            loudness_dbfs=SILENT if db is None else float(db),
            style_scale=float(d.get("style_scale", 1.0)),
            frame=int(d.get("frame", 0)),
            attrs=dict(d.get("attrs") or {}),
        )


def write_jsonl(events: Iterable[CaptionEvent], fp: IO[str]) -> None:
    for ev in events:
        fp.write(ev.to_json() + "\n")


def read_jsonl(fp: IO[str]) -> Iterator[CaptionEvent]:
    for lineno, line in enumerate(fp, 1):
        line = line.strip()
        if not line:
            continue
        try:
            yield CaptionEvent.from_dict(json.loads(line))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"line {lineno}: bad event: {exc}") from exc


def final_words(events: Iterable[CaptionEvent]) -> list[CaptionEvent]:
    """Replay an event log: WordFinal adds a word, Revision withdraws it."""
    words: list[CaptionEvent] = []
    for ev in events:
        if ev.kind is EventKind.WORD_FINAL:
            words.append(ev)
        elif ev.kind is EventKind.REVISION:
            for i in range(len(words) - 1, -1, -1):
                w = words[i]
                if (
                    w.word == ev.word
                    and abs(w.start_s - ev.start_s) <= TIME_TOL
                    and abs(w.end_s - ev.end_s) <= TIME_TOL
                ):
                    del words[i]
                    break
    words.sort(key=lambda e: e.start_s)
    return words


def final_text(events: Iterable[CaptionEvent]) -> str:
    return " ".join(ev.word for ev in final_words(events))
