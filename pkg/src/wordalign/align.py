"""Group sub-segments into the words of the newest hypothesis.

``align`` is a dynamic program over (fragment index, word index). Each
reference word takes one or more contiguous fragments and the summed
character edit distance between every word and its group's concatenation is
minimised. With n fragments and m words it evaluates at most n*n*m
candidate groups, against the C(n-1, m-1) partitions that
``brute_force_align`` enumerates.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .events import CaptionEvent, EventKind
from .timeline import TIME_TOL, SubSegment, WordSegment

BRUTE_FORCE_LIMIT = 12
DEFAULT_COST_CEILING = 0.5


class AlignmentError(ValueError):
    pass


@dataclass(frozen=True)
class AlignmentResult:
    words: tuple[WordSegment, ...] = ()
    total_cost: int = 0
    unmatched_tail: tuple[SubSegment, ...] = ()
    tail_word: Optional[str] = None
    low_confidence: bool = False
    # DP: candidate groups scored; brute force: partitions enumerated
    evaluations: int = field(default=0, compare=False)

    @property
    def group_sizes(self) -> tuple[int, ...]:
        sizes = tuple(len(w.fragments) for w in self.words)
        if self.unmatched_tail:
            sizes += (len(self.unmatched_tail),)
        return sizes


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    row = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        prev_diag, row[0] = row[0], i
        for j, cb in enumerate(b, 1):
            cur = min(row[j] + 1, row[j - 1] + 1, prev_diag + (ca != cb))
            prev_diag, row[j] = row[j], cur
    return row[-1]


def _growing_distances(pieces: Sequence[str], word: str) -> list[int]:
    """Edit distance from ``word`` to each concatenation pieces[0..g], g = 0, 1, ...

    Extends one Wagner-Fischer table row by row, so the whole list costs
    one distance computation over the longest concatenation.
    """
    row = list(range(len(word) + 1))
    out = []
    depth = 0
    for piece in pieces:
        for ch in piece:
            depth += 1
            new = [depth]
            for j, cw in enumerate(word, 1):
                new.append(min(row[j] + 1, new[j - 1] + 1, row[j - 1] + (ch != cw)))
            row = new
        out.append(row[-1])
    return out


def _keys(subsegments, reference_words, case_sensitive):
    frags = [s.token for s in subsegments]
    words = list(reference_words)
    if not case_sensitive:
        frags = [f.casefold() for f in frags]
        words = [w.casefold() for w in words]
    return frags, words


def _check_inputs(subsegments, reference_words):
    n, m = len(subsegments), len(reference_words)
    if m == 0 and n:
        raise AlignmentError(f"{n} fragments but no reference words")
    if n < m:
        raise AlignmentError(f"{n} fragments cannot cover {m} reference words")


def _build_result(subsegments, reference_words, sizes, cost, tail_open, ceiling, evaluations):
    words = []
    i = 0
    for word, g in zip(reference_words, sizes):
        group = subsegments[i:i + g]
        i += g
        words.append(WordSegment(
            word=word,
            start_s=group[0].start_s,
            end_s=group[-1].end_s,
            fragments=tuple(s.id for s in group),
            char_start=group[0].char_start,
            char_end=group[-1].char_end,
        ))
    tail: tuple[SubSegment, ...] = ()
    tail_word = None
    if tail_open and words:
        last = words.pop()
        tail = tuple(subsegments[len(subsegments) - sizes[-1]:])
        tail_word = last.word
    ref_chars = sum(len(w) for w in reference_words)
    return AlignmentResult(
        words=tuple(words),
        total_cost=cost,
        unmatched_tail=tail,
        tail_word=tail_word,
        low_confidence=cost > ceiling * ref_chars,
        evaluations=evaluations,
    )


def align(
    subsegments: Sequence[SubSegment],
    reference_words: Sequence[str],
    *,
    tail_open: bool = False,
    case_sensitive: bool = True,
    cost_ceiling: float = DEFAULT_COST_CEILING,
) -> AlignmentResult:
    """Minimum-edit-distance grouping of fragments into reference words.

    Among equal-cost groupings the one with the lexicographically smallest
    group-size vector wins. With ``tail_open`` the last word is still being
    spoken: its fragments go to ``unmatched_tail`` instead of a WordSegment.
    """
    subsegments = list(subsegments)
    _check_inputs(subsegments, reference_words)
    n, m = len(subsegments), len(reference_words)
    if n == 0:
        return AlignmentResult()
    frags, words = _keys(subsegments, reference_words, case_sensitive)

    inf = float("inf")
    # best[i][j]: min cost of fragments i.. against words j..
    best = [[inf] * (m + 1) for _ in range(n + 1)]
    best[n][m] = 0
    dists: dict[tuple[int, int], list[int]] = {}
    evaluations = 0
    for j in range(m - 1, -1, -1):
        words_after = m - j - 1
        for i in range(j, n - words_after):
            max_g = n - i - words_after
            d = _growing_distances(frags[i:i + max_g], words[j])
            dists[i, j] = d
            row_best = inf
            for g in range(1, max_g + 1):
                evaluations += 1
                c = d[g - 1] + best[i + g][j + 1]
                if c < row_best:
                    row_best = c
            best[i][j] = row_best

    sizes = []
    i = 0
    for j in range(m):
        target = best[i][j]
        d = dists[i, j]
        for g in range(1, len(d) + 1):
            if d[g - 1] + best[i + g][j + 1] == target:
                break
        sizes.append(g)
        i += g
    return _build_result(subsegments, list(reference_words), sizes, int(best[0][0]),
                         tail_open, cost_ceiling, evaluations)


def brute_force_align(
    subsegments: Sequence[SubSegment],
    reference_words: Sequence[str],
    *,
    tail_open: bool = False,
    case_sensitive: bool = True,
    cost_ceiling: float = DEFAULT_COST_CEILING,
) -> AlignmentResult:
    """Enumerate every contiguous partition; reference oracle for ``align``."""
    subsegments = list(subsegments)
    if len(subsegments) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force refuses more than {BRUTE_FORCE_LIMIT} fragments")
    _check_inputs(subsegments, reference_words)
    n, m = len(subsegments), len(reference_words)
    if n == 0:
        return AlignmentResult()
    frags, words = _keys(subsegments, reference_words, case_sensitive)

    group_cost: dict[tuple[int, int, int], int] = {}

    def cost_of(a, b, j):
        key = (a, b, j)
        if key not in group_cost:
            group_cost[key] = levenshtein("".join(frags[a:b]), words[j])
        return group_cost[key]

    best_cost, best_sizes, count = None, None, 0
    # combinations come out in lexicographic order, as do their size vectors
    for cuts in itertools.combinations(range(1, n), m - 1):
        count += 1
        edges = (0,) + cuts + (n,)
        cost = sum(cost_of(a, b, j) for j, (a, b) in enumerate(zip(edges, edges[1:])))
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_sizes = [b - a for a, b in zip(edges, edges[1:])]
    return _build_result(subsegments, list(reference_words), best_sizes, best_cost,
                         tail_open, cost_ceiling, count)


def _same_tail(a: AlignmentResult, b: AlignmentResult) -> bool:
    if a.tail_word != b.tail_word or len(a.unmatched_tail) != len(b.unmatched_tail):
        return False
    return all(
        x.id == y.id and abs(x.start_s - y.start_s) <= TIME_TOL and abs(x.end_s - y.end_s) <= TIME_TOL
        for x, y in zip(a.unmatched_tail, b.unmatched_tail)
    )


def tail_segment(result: AlignmentResult) -> Optional[WordSegment]:
    if not result.unmatched_tail:
        return None
    tail = result.unmatched_tail
    return WordSegment(
        word=result.tail_word or "".join(s.token for s in tail),
        start_s=tail[0].start_s,
        end_s=tail[-1].end_s,
        fragments=tuple(s.id for s in tail),
        char_start=tail[0].char_start,
        char_end=tail[-1].char_end,
    )


def emit_updates(
    previous: AlignmentResult,
    current: AlignmentResult,
    *,
    session: str = "",
    frame: int = 0,
    tail: Optional[WordSegment] = None,
) -> list[CaptionEvent]:
    """Events that take a consumer from ``previous`` to ``current``.

    Words of ``previous`` with no identical counterpart in ``current`` are
    withdrawn (Revision); words of ``current`` not already in ``previous``
    become WordFinal; a changed in-progress tail is re-announced. ``tail``
    lets the caller pass a decorated tail word.
    """
    prev_by_key = {w.fragments: w for w in previous.words}
    cur_by_key = {w.fragments: w for w in current.words}
    events = []
    for w in previous.words:
        other = cur_by_key.get(w.fragments)
        if other is None or not w.same_placement(other):
            events.append(CaptionEvent.from_word(EventKind.REVISION, w, session, frame))
    for w in current.words:
        other = prev_by_key.get(w.fragments)
        if other is None or not w.same_placement(other):
            events.append(CaptionEvent.from_word(EventKind.WORD_FINAL, w, session, frame))
    if current.unmatched_tail and not _same_tail(previous, current):
        tail = tail or tail_segment(current)
        events.append(CaptionEvent.from_word(EventKind.PARTIAL_TAIL, tail, session, frame))
    return events
