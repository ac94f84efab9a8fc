"""Turn consecutive cumulative hypotheses into per-frame text deltas."""

from __future__ import annotations

from typing import Iterable, Optional

from .timeline import AudioFrame, DeltaSegment, RevisionInfo, WordSegment


def common_prefix_len(a: str, b: str) -> int:
    n = min(len(a), len(b))
    i = 0
    while i < n and a[i] == b[i]:
        i += 1
    return i


def compute_delta(prev: str, curr: str) -> tuple[str, Optional[RevisionInfo]]:
    """New text of ``curr`` relative to ``prev`` on raw characters.

    >>> compute_delta("We cho", "We choose")
    ('ose', None)
    """
    lcp = common_prefix_len(prev, curr)
    revision = None
    if lcp < len(prev):
        revision = RevisionInfo(lcp_chars=lcp, invalidated_text=prev[lcp:])
    return curr[lcp:], revision


def attribute_interval(
    delta_text: str,
    revision: Optional[RevisionInfo],
    frame: AudioFrame,
    pending_skipped_interval: Optional[tuple[float, float]] = None,
    char_offset: int = 0,
) -> Optional[DeltaSegment]:
    """Attach a delta to its frame, widened left over any skipped frames."""
    if not delta_text:
        return None
    start = frame.start_s
    if pending_skipped_interval is not None:
        start = min(start, pending_skipped_interval[0])
    return DeltaSegment(
        frame_index=frame.index,
        start_s=start,
        end_s=frame.end_s,
        text=delta_text,
        revision=revision,
        char_offset=char_offset,
    )


def revision_cut(prev: str, curr: str, lcp: int) -> int:
    """Character position from which ``prev`` must be re-timed.

    Equal to ``lcp`` unless the cut falls inside a word that ``curr``
    continues ("I" -> "Ice") or leaves open at its very end ("I " -> "I"),
    in which case it backs off to that word's start.
    """
    cut = lcp
    if 0 < lcp and not curr[lcp - 1].isspace() and (lcp == len(curr) or not curr[lcp].isspace()):
        while cut > 0 and not prev[cut - 1].isspace():
            cut -= 1
    return cut


def handle_revision(
    revision: RevisionInfo,
    live_words: Iterable[WordSegment],
    new_text: Optional[str] = None,
) -> tuple[list[WordSegment], Optional[tuple[float, float]]]:
    """Emitted words invalidated by ``revision`` and their pooled time span.

    A word is retracted when its characters overlap the invalidated suffix.
    With ``new_text`` given, a word that the new hypothesis extends across
    the cut is retracted as well.
    """
    cut = revision.lcp_chars
    if new_text is not None:
        prev = new_text[:revision.lcp_chars] + revision.invalidated_text
        cut = revision_cut(prev, new_text, revision.lcp_chars)
    retracted = [w for w in live_words if w.char_end > cut]
    if not retracted:
        return [], None
    span = (min(w.start_s for w in retracted), max(w.end_s for w in retracted))
    return retracted, span
