"""Ground-truth driven simulation and timestamp accuracy scoring."""

from __future__ import annotations

import difflib
import json
import math
from dataclasses import asdict, dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .asr import AsrBackend, AsrScriptEntry
from .events import CaptionEvent, final_words
from .timeline import TIME_TOL, CumulativeTranscript


@dataclass(frozen=True)
class GroundTruthWord:
    word: str
    start_s: float
    end_s: float


def check_truth(truth: Sequence[GroundTruthWord]) -> None:
    prev_end = -math.inf
    for w in truth:
        if not w.end_s > w.start_s:
            raise ValueError(f"ground-truth word {w.word!r} has end <= start")
        if w.start_s < prev_end - TIME_TOL:
            raise ValueError(f"ground-truth word {w.word!r} overlaps its predecessor")
        prev_end = w.end_s


def read_truth(fp: IO[str]) -> list[GroundTruthWord]:
    truth = []
    for line in fp:
        line = line.strip()
        if line:
            obj = json.loads(line)
            truth.append(GroundTruthWord(str(obj["word"]), float(obj["start_s"]), float(obj["end_s"])))
    check_truth(truth)
    return truth


def write_truth(truth: Iterable[GroundTruthWord], fp: IO[str]) -> None:
    for w in truth:
        fp.write(json.dumps(asdict(w), ensure_ascii=False) + "\n")


def _round_half_up(x: float) -> int:
    # the slack keeps decimal halves like 3.4999999999999996 rounding up
    return int(math.floor(x + 0.5 + 1e-9))


def hypothesis_at(truth: Sequence[GroundTruthWord], t: float) -> str:
    """What an ideal streaming recognizer has said by time ``t``.

    Finished words appear whole; a word still being spoken contributes a
    prefix proportional to its elapsed fraction.
    """
    parts = []
    for w in truth:
        if w.end_s <= t + TIME_TOL:
            parts.append(w.word)
        elif w.start_s < t:
            n = _round_half_up(len(w.word) * (t - w.start_s) / (w.end_s - w.start_s))
            if n > 0:
                parts.append(w.word[:n])
            break
        else:
            break
    return " ".join(parts)


def simulate_asr(truth: Sequence[GroundTruthWord], frame_interval_s: float) -> list[AsrScriptEntry]:
    """Script of cumulative hypotheses at each frame boundary."""
    check_truth(truth)
    if not truth:
        return []
    n_frames = max(1, math.ceil(truth[-1].end_s / frame_interval_s - TIME_TOL))
    return [
        AsrScriptEntry(i, hypothesis_at(truth, (i + 1) * frame_interval_s))
        for i in range(n_frames)
    ]


class OracleBackend(AsrBackend):
    """Answers from ground truth at the frame's real end time."""

    def __init__(self, truth: Sequence[GroundTruthWord]):
        check_truth(truth)
        self.truth = list(truth)

    def recognize_cumulative(self, store, upto_frame: int) -> CumulativeTranscript:
        _, end_s = store.frame_bounds(upto_frame)
        return CumulativeTranscript(upto_frame, hypothesis_at(self.truth, end_s))


@dataclass(frozen=True)
class AccuracyReport:
    mean_abs_start_err_s: float
    mean_abs_end_err_s: float
    max_abs_start_err_s: float
    word_match_rate: float
    matched: int = 0
    truth_words: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def score(events: Iterable[CaptionEvent], truth: Sequence[GroundTruthWord]) -> AccuracyReport:
    """Compare final caption words against ground truth.

    Words are paired in order wherever their texts agree; timing errors are
    averaged over the pairs.
    """
    estimated = final_words(events)
    matcher = difflib.SequenceMatcher(
        a=[e.word for e in estimated], b=[w.word for w in truth], autojunk=False
    )
    start_err, end_err = [], []
    for block in matcher.get_matching_blocks():
        for k in range(block.size):
            e, w = estimated[block.a + k], truth[block.b + k]
            start_err.append(abs(e.start_s - w.start_s))
            end_err.append(abs(e.end_s - w.end_s))
    matched = len(start_err)
    return AccuracyReport(
        mean_abs_start_err_s=float(np.mean(start_err)) if matched else 0.0,
        mean_abs_end_err_s=float(np.mean(end_err)) if matched else 0.0,
        max_abs_start_err_s=float(np.max(start_err)) if matched else 0.0,
        word_match_rate=matched / len(truth) if truth else 1.0,
        matched=matched,
        truth_words=len(truth),
    )


VOCABULARY = (
    "we choose to go the moon in this decade and do other things not because "
    "they are easy but hard that goal will serve organize measure best of our "
    "energies skills challenge one willing accept unwilling postpone intend win"
).split()


def synthetic_truth(
    rng: np.random.Generator,
    n_words: int,
    min_dur_s: float = 0.3,
    max_dur_s: float = 0.8,
    max_gap_s: float = 0.2,
    vocabulary: Sequence[str] = VOCABULARY,
) -> list[GroundTruthWord]:
    """Random utterance with word durations in ``[min_dur_s, max_dur_s]``."""
    t = float(rng.uniform(0.0, max_gap_s))
    out = []
    for _ in range(n_words):
        dur = float(rng.uniform(min_dur_s, max_dur_s))
        out.append(GroundTruthWord(str(rng.choice(vocabulary)), t, t + dur))
        t += dur + float(rng.uniform(0.0, max_gap_s))
    return out
