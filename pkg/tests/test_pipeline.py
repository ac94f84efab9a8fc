import random
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import random_session
from wordalign.asr import AsrBackend, BackendError, ScriptedBackend
from wordalign.audio import ArraySource
from wordalign.events import EventKind, final_text, final_words
from wordalign.pipeline import CaptionSession, SessionOptions, StreamingPipeline, replay, run_frames
from wordalign.timeline import CumulativeTranscript, normalize


def spans(events):
    return [(e.word, e.start_s, e.end_s) for e in final_words(events)]


def test_choose_trace(choose_texts):
    events, _ = replay(choose_texts, 0.5)
    assert spans(events) == [("We", 0.0, 0.25), ("choose", 0.25, 1.0), ("to", 1.0, 1.25), ("go", 1.25, 1.5)]
    finals = [e.word for e in events if e.kind is EventKind.WORD_FINAL]
    assert "cho" not in finals and "ose" not in finals


def test_choose_event_stream(choose_texts):
    events, _ = replay(choose_texts, 0.5)
    assert [(e.kind.value, e.word, e.frame) for e in events] == [
        ("word_final", "We", 0),
        ("partial_tail", "cho", 0),
        ("partial_tail", "choose", 1),
        ("word_final", "choose", 2),
        ("word_final", "to", 2),
        ("partial_tail", "go", 2),
        ("word_final", "go", 2),
    ]


def test_empty_audio_no_events():
    events, _ = run_frames(ArraySource(np.zeros(0), 16000), ScriptedBackend([]), 0.25)
    assert events == []


def test_single_word_frame():
    events, _ = replay(["hello "], 0.25)
    assert [(e.kind, e.word, e.start_s, e.end_s) for e in events] == [(EventKind.WORD_FINAL, "hello", 0.0, 0.25)]


def test_trailing_space_finalises_without_waiting():
    events, _ = replay(["We cho", "We cho "], 0.5)
    assert [(e.kind.value, e.word) for e in events] == [
        ("word_final", "We"), ("partial_tail", "cho"), ("word_final", "cho")]


class FlakyBackend(AsrBackend):
    def __init__(self, texts, fail=(), delay=None):
        self.inner = ScriptedBackend.from_texts(texts)
        self.fail = set(fail)
        self.delay = delay or {}

    def recognize_cumulative(self, store, upto_frame):
        if upto_frame in self.delay:
            time.sleep(self.delay[upto_frame])
        if upto_frame in self.fail:
            raise BackendError("boom")
        return self.inner.recognize_cumulative(store, upto_frame)


def test_skipped_frame_merges_into_next_delta():
    texts = ["We", "We go", "We go to", "We go to it"]
    events, session = run_frames(ArraySource(np.zeros(16000), 16000), FlakyBackend(texts, fail={1}), 0.25)
    # frame 1 failed, so "go to" is attributed to [0.25, 0.75]
    assert [(d.text, d.start_s, d.end_s) for d in session.deltas] == [
        ("We", 0.0, 0.25), (" go to", 0.25, 0.75), (" it", 0.75, 1.0)]
    assert spans(events) == [("We", 0.0, 0.25), ("go", 0.25, 0.5), ("to", 0.5, 0.75), ("it", 0.75, 1.0)]


def test_revision_retimes_within_pooled_span():
    events, _ = replay(["I", "I scream", "Ice cream and"], 0.5)
    kinds = [(e.kind.value, e.word) for e in events]
    assert ("revision", "I") in kinds
    assert spans(events)[:2] == [("Ice", 0.0, 0.5), ("cream", 0.5, 1.0)]
    assert spans(events)[2] == ("and", 1.0, 1.5)
    assert final_text(events) == "Ice cream and"


def test_shrinking_hypothesis():
    events, _ = replay(["We go to", "We go"], 0.5)
    assert final_text(events) == "We go"
    assert ("revision", "to") not in [(e.kind.value, e.word) for e in events]  # "to" was never final


def test_word_final_starts_increase_except_reissues():
    for texts, _ in [random_session(random.Random(s)) for s in range(200)]:
        events, _ = replay(texts, 0.25)
        last = -1.0
        for ev in events:
            if ev.kind is EventKind.REVISION:
                last = -1.0
            elif ev.kind is EventKind.WORD_FINAL:
                if last >= 0:
                    assert ev.start_s > last
                last = ev.start_s


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_reconstruction_property(seed):
    texts, full = random_session(random.Random(seed))
    events, session = replay(texts, 0.25)
    assert final_text(events) == normalize(full)
    words = final_words(events)
    for a, b in zip(words, words[1:]):
        assert a.end_s <= b.start_s + 1e-9


def test_case_insensitive_session():
    opts = SessionOptions(case_sensitive=False)
    events, _ = replay(["we cho", "We choose "], 0.5, options=opts)
    assert final_text(events) == "We choose"


def test_char_weighted_session():
    opts = SessionOptions(split="char-weighted")
    events, _ = replay(["a bbb "], 0.4, options=opts)
    assert spans(events) == [("a", 0.0, pytest.approx(0.1)), ("bbb", pytest.approx(0.1), 0.4)]


def test_loudness_decorates_words():
    rate = 16000
    quiet = 0.001 * np.ones(rate // 2)
    loud = np.tile([0.5, -0.5], rate // 4)
    events, _ = replay(["soft ", "soft LOUD "], 0.5, samples=np.concatenate([quiet, loud]))
    by_word = {e.word: e for e in final_words(events)}
    assert by_word["soft"].style_scale == 0.8
    assert by_word["LOUD"].style_scale == 1.6
    assert by_word["LOUD"].loudness_dbfs == pytest.approx(20 * np.log10(0.5))


def run_threaded(texts, interval=0.25, backend=None, **kw):
    samples = np.zeros(int(round(len(texts) * interval * 16000)))
    events = []
    pipe = StreamingPipeline(ArraySource(samples, 16000), backend or ScriptedBackend.from_texts(texts),
                             interval, events.append, **kw)
    stats = pipe.run()
    return events, stats


def test_threaded_matches_synchronous():
    for seed in range(30):
        texts, _ = random_session(random.Random(seed))
        sync, _ = replay(texts, 0.25, session_id="session")
        threaded, stats = run_threaded(texts)
        assert [e.to_dict() for e in threaded] == [e.to_dict() for e in sync]
        assert stats.latency_violations() == 0


def test_threaded_orders_out_of_order_completions():
    texts = ["We", "We cho", "We choose", "We choose to", "We choose to go"]
    backend = FlakyBackend(texts, delay={0: 0.2, 1: 0.1})
    events, stats = run_threaded(texts, backend=backend)
    consumed = [t.frame for t in stats.trace if t.what == "consume"]
    assert consumed == sorted(consumed)
    assert final_text(events) == "We choose to go"


def test_threaded_timeout_skips_frame():
    texts = ["We", "We go", "We go now"]
    backend = FlakyBackend(texts, delay={1: 0.6})
    events, stats = run_threaded(texts, backend=backend, timeout_s=0.2)
    assert stats.skipped == 1
    assert final_text(events) == "We go now"


def test_ingest_error_propagates():
    import io

    from wordalign.audio import IngestError, RawPcmSource
    src = RawPcmSource(io.BytesIO(b"\x00" * 8001), 16000)
    pipe = StreamingPipeline(src, ScriptedBackend([]), 0.25, lambda e: None)
    with pytest.raises(IngestError):
        pipe.run()


def test_session_skip_then_empty_delta_keeps_pending():
    s = CaptionSession("s")
    from wordalign.timeline import AudioFrame
    f = [AudioFrame(i, i * 0.5, (i + 1) * 0.5, np.zeros(1), 2) for i in range(3)]
    s.process(f[0], CumulativeTranscript(0, "a"))
    s.process(f[1], None)
    s.process(f[2], CumulativeTranscript(2, "a b"))
    assert (s.deltas[-1].start_s, s.deltas[-1].end_s) == (0.5, 1.5)
