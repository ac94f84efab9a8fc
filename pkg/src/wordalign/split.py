"""Divide a delta's interval among its tokens."""

from __future__ import annotations

import logging

from .timeline import DeltaSegment, SubSegment, token_spans

log = logging.getLogger(__name__)

STRATEGIES = ("linear", "char-weighted")


def _boundaries_linear(start: float, end: float, weights: list[int]) -> list[float]:
    k = len(weights)
    step = (end - start) / k
    bounds = [start]
    for _ in range(k - 1):
        bounds.append(bounds[-1] + step)
    bounds.append(end)
    return bounds


def _boundaries_char_weighted(start: float, end: float, weights: list[int]) -> list[float]:
    total = sum(weights)
    span = end - start
    bounds = [start]
    acc = 0
    for w in weights[:-1]:
        acc += w
        bounds.append(start + span * acc / total)
    bounds.append(end)
    return bounds


_BOUNDARIES = {
    "linear": _boundaries_linear,
    "char-weighted": _boundaries_char_weighted,
}


def split_delta(
    delta: DeltaSegment,
    strategy: str = "linear",
    tokenizer_mode: str = "whitespace",
    segmenter=None,
) -> list[SubSegment]:
    """Split ``delta`` into per-token sub-segments.

    The linear strategy gives each of the k tokens ``duration / k`` seconds;
    char-weighted gives time in proportion to token length. Either way the
    last token ends exactly at ``delta.end_s`` and the pieces are contiguous.
    An all-whitespace delta yields no sub-segments.
    """
    try:
        boundaries = _BOUNDARIES[strategy]
    except KeyError:
        raise ValueError(f"unknown split strategy {strategy!r}") from None
    spans = token_spans(delta.text, tokenizer_mode, segmenter)
    if not spans:
        log.debug("dropping whitespace-only delta %r at frame %d", delta.text, delta.frame_index)
        return []
    bounds = boundaries(delta.start_s, delta.end_s, [len(tok) for _, tok in spans])
    return [
        SubSegment(
            token=tok,
            start_s=bounds[i],
            end_s=bounds[i + 1],
            source_frame=delta.frame_index,
            char_start=delta.char_offset + offset,
        )
        for i, (offset, tok) in enumerate(spans)
    ]


def split_linear(delta: DeltaSegment, tokenizer_mode: str = "whitespace", segmenter=None) -> list[SubSegment]:
    """Give each of the delta's k tokens an equal ``duration / k`` share.

    >>> d = DeltaSegment(0, 0.0, 0.5, "We cho")
    >>> [(s.token, s.start_s, s.end_s) for s in split_linear(d)]
    [('We', 0.0, 0.25), ('cho', 0.25, 0.5)]
    """
    return split_delta(delta, "linear", tokenizer_mode, segmenter)


def split_char_weighted(delta: DeltaSegment, tokenizer_mode: str = "whitespace", segmenter=None) -> list[SubSegment]:
    return split_delta(delta, "char-weighted", tokenizer_mode, segmenter)
