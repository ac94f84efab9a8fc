"""Caption sinks: JSON Lines, styled WebVTT and a live ANSI terminal line."""

from __future__ import annotations

import html
from typing import IO, Optional

from .events import CaptionEvent, EventKind, final_words


class Emitter:
    def emit(self, event: CaptionEvent) -> None:
        raise NotImplementedError

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class JsonlEmitter(Emitter):
    def __init__(self, fp: IO[str]):
        self.fp = fp

    def emit(self, event: CaptionEvent) -> None:
        self.fp.write(event.to_json() + "\n")
        self.fp.flush()


def format_vtt_time(seconds: float) -> str:
    ms = int(round(seconds * 1000))
    h, ms = divmod(ms, 3_600_000)
    m, ms = divmod(ms, 60_000)
    s, ms = divmod(ms, 1000)
    return f"{h:02d}:{m:02d}:{s:02d}.{ms:03d}"


def size_class(scale: float) -> str:
    return f"s{int(round(scale * 100))}"


class VttEmitter(Emitter):
    """One cue per final word, sized through ``::cue(.sNNN)`` classes.

    WebVTT cannot take back a cue, so events are buffered and the file is
    written on close, after revisions have been applied.
    """

    def __init__(self, fp: IO[str]):
        self.fp = fp
        self.events: list[CaptionEvent] = []

    def emit(self, event: CaptionEvent) -> None:
        self.events.append(event)

    def close(self) -> None:
        words = final_words(self.events)
        self.fp.write("WEBVTT\n\n")
        classes = sorted({size_class(w.style_scale) for w in words})
        if classes:
            self.fp.write("STYLE\n")
            for cls in classes:
                self.fp.write(f"::cue(.{cls}) {{ font-size: {int(cls[1:])}%; }}\n")
            self.fp.write("\n")
        for i, w in enumerate(words, 1):
            self.fp.write(f"{i}\n{format_vtt_time(w.start_s)} --> {format_vtt_time(w.end_s)}\n")
            self.fp.write(f"<c.{size_class(w.style_scale)}>{html.escape(w.word, quote=False)}</c>\n\n")
        self.fp.flush()


_RESET = "\x1b[0m"


def ansi_word(word: str, scale: float) -> str:
    """Approximate font size: dim, plain, bold, then bold and letter-spaced."""
    if scale < 1.0:
        return f"\x1b[2m{word}{_RESET}"
    if scale < 1.3:
        return word
    if scale < 1.5:
        return f"\x1b[1m{word}{_RESET}"
    return f"\x1b[1m{' '.join(word)}{_RESET}"


class AnsiEmitter(Emitter):
    def __init__(self, fp: IO[str], max_words: int = 14):
        self.fp = fp
        self.max_words = max_words
        self.events: list[CaptionEvent] = []
        self.tail: Optional[CaptionEvent] = None

    def emit(self, event: CaptionEvent) -> None:
        if event.kind is EventKind.PARTIAL_TAIL:
            self.tail = event
        else:
            self.events.append(event)
            if event.kind is EventKind.WORD_FINAL and self.tail is not None \
                    and event.start_s >= self.tail.start_s:
                self.tail = None
        words = [ansi_word(w.word, w.style_scale) for w in final_words(self.events)[-self.max_words:]]
        if self.tail is not None:
            words.append(f"\x1b[3;2m{self.tail.word}{_RESET}")
        self.fp.write("\r\x1b[2K" + " ".join(words))
        self.fp.flush()

    def close(self) -> None:
        self.fp.write("\n")
        self.fp.flush()


def make_emitter(kind: str, fp: IO[str]) -> Emitter:
    try:
        cls = {"jsonl": JsonlEmitter, "vtt": VttEmitter, "ansi": AnsiEmitter}[kind]
    except KeyError:
        raise ValueError(f"unknown output kind {kind!r}") from None
    return cls(fp)
