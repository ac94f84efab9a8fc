import io

import pytest

from wordalign.events import CaptionEvent, EventKind
from wordalign.sim import (
    GroundTruthWord,
    check_truth,
    hypothesis_at,
    read_truth,
    score,
    simulate_asr,
    write_truth,
)

WE_CHOOSE = [GroundTruthWord("We", 0.0, 0.4), GroundTruthWord("choose", 0.4, 1.0)]


def test_partial_word_at_boundary():
    # fraction (0.7 - 0.4) / 0.6 = 0.5 of 6 chars -> 3
    assert hypothesis_at(WE_CHOOSE, 0.7) == "We cho"


def test_boundary_past_the_end():
    assert hypothesis_at(WE_CHOOSE, 5.0) == "We choose"


def test_boundary_at_zero():
    assert hypothesis_at(WE_CHOOSE, 0.0) == ""


def test_rounding_is_half_up():
    # 2 chars at fraction 0.25 -> 0.5 -> 1 char
    truth = [GroundTruthWord("ab", 0.0, 1.0)]
    assert hypothesis_at(truth, 0.25) == "a"


def test_simulate_script():
    script = simulate_asr(WE_CHOOSE, 0.25)
    assert [(e.frame_index, e.text) for e in script] == [
        (0, "W"),        # 2 chars * 0.25/0.4 = 1.25 -> 1
        (1, "We c"),     # 6 chars * 0.1/0.6 = 1.0 -> 1
        (2, "We choo"),  # 6 chars * 0.35/0.6 = 3.5 -> 4
        (3, "We choose"),
    ]


def test_simulate_empty():
    assert simulate_asr([], 0.25) == []


def test_truth_validation():
    with pytest.raises(ValueError):
        check_truth([GroundTruthWord("a", 0.0, 0.5), GroundTruthWord("b", 0.4, 0.8)])
    with pytest.raises(ValueError):
        check_truth([GroundTruthWord("a", 0.5, 0.5)])


def test_truth_jsonl_roundtrip():
    buf = io.StringIO()
    write_truth(WE_CHOOSE, buf)
    assert buf.getvalue().splitlines()[0] == '{"word": "We", "start_s": 0.0, "end_s": 0.4}'
    assert read_truth(io.StringIO(buf.getvalue())) == WE_CHOOSE


def final(word, a, b):
    return CaptionEvent(EventKind.WORD_FINAL, "s", word, a, b)


def test_score_start_error():
    report = score([final("We", 1.2, 1.5)], [GroundTruthWord("We", 1.0, 1.5)])
    assert report.mean_abs_start_err_s == pytest.approx(0.2)
    assert report.mean_abs_end_err_s == 0.0
    assert report.word_match_rate == 1.0


def test_score_perfect():
    events = [final(w.word, w.start_s, w.end_s) for w in WE_CHOOSE]
    report = score(events, WE_CHOOSE)
    assert report.mean_abs_start_err_s == report.max_abs_start_err_s == report.mean_abs_end_err_s == 0.0
    assert report.word_match_rate == 1.0


def test_score_counts_mismatches_and_revisions():
    events = [final("We", 0.0, 0.4), final("chose", 0.4, 1.0),
              CaptionEvent(EventKind.REVISION, "s", "chose", 0.4, 1.0)]
    report = score(events, WE_CHOOSE)
    assert report.word_match_rate == 0.5
    assert report.matched == 1
