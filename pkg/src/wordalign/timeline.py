"""Value types shared by every stage, plus normalization and tokenization."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

TIME_TOL = 1e-9

_WS_RUN = re.compile(r"\s+")
_TOKEN = re.compile(r"\S+")


class ConfigurationError(ValueError):
    """Invalid or incomplete configuration, raised at startup."""


class Silence(enum.Enum):
    SILENT = "silent"

    def __repr__(self) -> str:
        return "SILENT"


SILENT = Silence.SILENT

Loudness = Union[float, Silence]


@dataclass(frozen=True, eq=False)
class AudioFrame:
    index: int
    start_s: float
    end_s: float
    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"frame index must be >= 0, got {self.index}")
        if not self.end_s > self.start_s:
            raise ValueError(f"frame {self.index}: end_s {self.end_s} <= start_s {self.start_s}")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


@dataclass(frozen=True)
class CumulativeTranscript:
    frame_index: int
    text: str


@dataclass(frozen=True)
class RevisionInfo:
    lcp_chars: int
    invalidated_text: str


@dataclass(frozen=True)
class DeltaSegment:
    frame_index: int
    start_s: float
    end_s: float
    text: str
    revision: Optional[RevisionInfo] = None
    # position of ``text`` inside the cumulative transcript it came from
    char_offset: int = 0

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


@dataclass(frozen=True)
class SubSegment:
    token: str
    start_s: float
    end_s: float
    source_frame: int
    char_start: int = 0

    def __post_init__(self):
        if not self.token or _WS_RUN.search(self.token):
            raise ValueError(f"invalid token {self.token!r}")
        if not self.end_s > self.start_s:
            raise ValueError(f"token {self.token!r}: end_s {self.end_s} <= start_s {self.start_s}")

    @property
    def id(self) -> tuple[int, int]:
        return (self.source_frame, self.char_start)

    @property
    def char_end(self) -> int:
        return self.char_start + len(self.token)


@dataclass(frozen=True)
class WordSegment:
    word: str
    start_s: float
    end_s: float
    fragments: tuple[tuple[int, int], ...] = ()
    loudness_dbfs: Loudness = SILENT
    style_scale: float = 1.0
    char_start: int = 0
    char_end: int = 0
    attributes: dict = field(default_factory=dict, compare=False, hash=False)

    def same_placement(self, other: "WordSegment") -> bool:
        return (
            self.word == other.word
            and self.fragments == other.fragments
            and abs(self.start_s - other.start_s) <= TIME_TOL
            and abs(self.end_s - other.end_s) <= TIME_TOL
        )


def normalize(text: str) -> str:
    return _WS_RUN.sub(" ", text).strip()


Segmenter = Callable[[str], Sequence[str]]

_segmenters: dict[str, Segmenter] = {}


def register_segmenter(fn: Segmenter, name: str = "default") -> None:
    """Install a word segmenter for languages written without spaces.

    ``fn`` receives one whitespace-free chunk of text and must return tokens
    whose concatenation is exactly that chunk.
    """
    _segmenters[name] = fn


def unregister_segmenter(name: str = "default") -> None:
    _segmenters.pop(name, None)


def _resolve_segmenter(segmenter: Union[Segmenter, str, None]) -> Segmenter:
    if callable(segmenter):
        return segmenter
    name = segmenter or "default"
    try:
        return _segmenters[name]
    except KeyError:
        raise ConfigurationError(f"no segmenter registered under {name!r}") from None


def token_spans(
    text: str,
    mode: str = "whitespace",
    segmenter: Union[Segmenter, str, None] = None,
) -> list[tuple[int, str]]:
    """Tokens of ``text`` with their character offsets, in source order."""
    chunks = [(m.start(), m.group()) for m in _TOKEN.finditer(text)]
    if mode == "whitespace":
        return chunks
    if mode != "segmenter":
        raise ConfigurationError(f"unknown tokenizer mode {mode!r}")
    fn = _resolve_segmenter(segmenter)
    out = []
    for offset, chunk in chunks:
        pos = 0
        for tok in fn(chunk):
            if not tok:
                continue
            if chunk[pos:pos + len(tok)] != tok:
                raise ValueError(f"segmenter output {tok!r} does not tile {chunk!r} at {pos}")
            out.append((offset + pos, tok))
            pos += len(tok)
        if pos != len(chunk):
            raise ValueError(f"segmenter dropped text {chunk[pos:]!r}")
    return out


def tokenize(
    text: str,
    mode: str = "whitespace",
    segmenter: Union[Segmenter, str, None] = None,
) -> list[str]:
    """Split ``text`` into non-empty, whitespace-free tokens.

    >>> tokenize("  We   cho ")
    ['We', 'cho']
    """
    return [tok for _, tok in token_spans(text, mode, segmenter)]
