"""Frame-by-frame session state and the threaded streaming runner."""

from __future__ import annotations

import concurrent.futures
import logging
import queue
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .align import AlignmentResult, align, emit_updates, tail_segment
from .asr import DEFAULT_TIMEOUT_S, AsrBackend, BackendError, ScriptedBackend
from .audio import ArraySource, AudioStore, FrameReader
from .delta import attribute_interval, compute_delta, revision_cut
from .events import CaptionEvent
from .loudness import DEFAULT_MAP, LoudnessMap, decorate
from .split import split_delta
from .timeline import AudioFrame, CumulativeTranscript, DeltaSegment, SubSegment, WordSegment, token_spans

log = logging.getLogger(__name__)


@dataclass
class SessionOptions:
    split: str = "linear"
    tokenizer_mode: str = "whitespace"
    segmenter: object = None
    case_sensitive: bool = True
    loudness_map: LoudnessMap = DEFAULT_MAP


class CaptionSession:
    """Mutable per-session state for the align-and-emit stage.

    Feed frames strictly in order with :meth:`process`; call :meth:`finish`
    at end of stream to finalise the word still in progress. Words are
    frozen once emitted, so each frame re-aligns only the live fragments.
    """

    def __init__(self, session_id: str, store: Optional[AudioStore] = None,
                 options: Optional[SessionOptions] = None):
        self.session_id = session_id
        self.store = store
        self.options = options or SessionOptions()
        self.prev_text = ""
        self.frozen: list[WordSegment] = []
        self.live: list[SubSegment] = []
        self.pending_skip: Optional[tuple[float, float]] = None
        self.last = AlignmentResult()
        self.last_frame = -1
        self.deltas: list[DeltaSegment] = []
        self.subsegments: list[list[SubSegment]] = []

    def _split(self, delta: DeltaSegment) -> list[SubSegment]:
        subs = split_delta(delta, self.options.split, self.options.tokenizer_mode, self.options.segmenter)
        if subs:
            self.deltas.append(delta)
            self.subsegments.append(subs)
        return subs

    def _spans(self, text: str) -> list[tuple[int, str]]:
        return token_spans(text, self.options.tokenizer_mode, self.options.segmenter)

    def _decorate(self, word: WordSegment) -> WordSegment:
        if self.store is None:
            return word
        return decorate(word, self.store, self.options.loudness_map)

    def skip(self, frame: AudioFrame) -> None:
        """Record a frame whose recognition failed; its time joins the next delta."""
        start = frame.start_s if self.pending_skip is None else self.pending_skip[0]
        self.pending_skip = (start, frame.end_s)
        self.last_frame = frame.index

    def process(self, frame: AudioFrame, transcript: Optional[CumulativeTranscript]) -> list[CaptionEvent]:
        if transcript is None:
            self.skip(frame)
            return []
        self.last_frame = frame.index
        prev, curr = self.prev_text, transcript.text
        delta_text, revision = compute_delta(prev, curr)
        new_subs: list[SubSegment] = []
        fresh_subs: list[SubSegment] = []

        if revision is None:
            delta = attribute_interval(delta_text, None, frame, self.pending_skip,
                                       char_offset=len(prev))
            if delta is not None:
                fresh_subs = self._split(delta)
        else:
            new_subs, fresh_subs = self._revise(frame, prev, curr, revision)
        if fresh_subs:
            self.pending_skip = None
        new_subs = new_subs + fresh_subs

        self.live.extend(new_subs)
        self.prev_text = curr
        return self._realign(tail_open=bool(curr) and not curr[-1].isspace())

    def _revise(self, frame, prev, curr, revision):
        """Drop everything after the cut and re-time the replacement text.

        Tokens that start inside the old text's extent are spread over the
        time the retracted items occupied; the rest is new speech and belongs
        to this frame. Returns (re-timed, fresh) sub-segments.
        """
        cut = revision_cut(prev, curr, revision.lcp_chars)
        gone_words = [w for w in self.frozen if w.char_end > cut]
        gone_frags = [s for s in self.live if s.char_end > cut]
        self.frozen = [w for w in self.frozen if w.char_end <= cut]
        self.live = [s for s in self.live if s.char_end <= cut]
        pooled = gone_words + gone_frags
        if pooled:
            # a retracted item's leading characters may survive the cut
            cut = min(cut, min(x.char_start for x in pooled))
        if gone_words:
            log.info("frame %d: hypothesis revised, retracting %s",
                     frame.index, [w.word for w in gone_words])

        tokens = [(off + cut, tok) for off, tok in self._spans(curr[cut:])]
        if pooled:
            pool = [t for t in tokens if t[0] < len(prev)]
            fresh = [t for t in tokens if t[0] >= len(prev)]
        else:
            pool, fresh = [], tokens

        retimed, new = [], []
        if pool:
            lo = min(x.start_s for x in pooled)
            hi = max(x.end_s for x in pooled)
            end_char = pool[-1][0] + len(pool[-1][1])
            retimed = self._split(DeltaSegment(frame.index, lo, hi, curr[cut:end_char], revision, cut))
        if fresh:
            first = fresh[0][0]
            delta = attribute_interval(curr[first:], revision, frame, self.pending_skip, char_offset=first)
            new = self._split(delta)
        return retimed, new

    def _realign(self, tail_open: bool) -> list[CaptionEvent]:
        spans = self._spans(self.prev_text)
        reference = [tok for _, tok in spans[len(self.frozen):]]
        result = align(self.live, reference, tail_open=tail_open and bool(reference),
                       case_sensitive=self.options.case_sensitive)
        if result.low_confidence:
            log.warning("frame %d: low-confidence alignment (cost %d)", self.last_frame, result.total_cost)
        new_words = [self._decorate(w) for w in result.words]
        current = AlignmentResult(
            words=tuple(self.frozen) + tuple(new_words),
            total_cost=result.total_cost,
            unmatched_tail=result.unmatched_tail,
            tail_word=result.tail_word,
            low_confidence=result.low_confidence,
        )
        tail = tail_segment(result)
        if tail is not None:
            tail = self._decorate(tail)
        events = emit_updates(self.last, current, session=self.session_id,
                              frame=max(self.last_frame, 0), tail=tail)
        self.frozen.extend(new_words)
        self.live = list(result.unmatched_tail)
        self.last = current
        return events

    def finish(self) -> list[CaptionEvent]:
        """Finalise the in-progress word at end of stream."""
        if not self.live:
            return []
        return self._realign(tail_open=False)

    @property
    def words(self) -> list[WordSegment]:
        return list(self.frozen)


def replay(
    texts: Sequence[str],
    frame_interval_s: float = 0.5,
    samples: Optional[np.ndarray] = None,
    sample_rate_hz: int = 16000,
    session_id: str = "replay",
    options: Optional[SessionOptions] = None,
) -> tuple[list[CaptionEvent], CaptionSession]:
    """Run a list of cumulative hypotheses, one per frame, synchronously.

    Without ``samples`` the audio is silence just long enough for the script.
    """
    if samples is None:
        n = int(round(len(texts) * frame_interval_s * sample_rate_hz))
        samples = np.zeros(n)
    backend = ScriptedBackend.from_texts(texts)
    return run_frames(ArraySource(samples, sample_rate_hz), backend, frame_interval_s,
                      session_id=session_id, options=options)


def run_frames(source, backend: AsrBackend, frame_interval_s: float, session_id: str = "session",
               options: Optional[SessionOptions] = None,
               emit: Optional[Callable[[CaptionEvent], None]] = None) -> tuple[list[CaptionEvent], CaptionSession]:
    """Single-threaded pipeline; handy for tests and batch use."""
    store = AudioStore(source.sample_rate_hz)
    session = CaptionSession(session_id, store, options)
    events: list[CaptionEvent] = []

    def out(evs):
        events.extend(evs)
        if emit is not None:
            for ev in evs:
                emit(ev)

    for frame in FrameReader(source, frame_interval_s):
        store.append(frame)
        try:
            transcript = backend.recognize_cumulative(store, frame.index)
        except BackendError as exc:
            log.warning("skipping frame %d: %s", frame.index, exc)
            transcript = None
        out(session.process(frame, transcript))
    out(session.finish())
    return events, session


@dataclass
class TraceEntry:
    what: str  # "consume" | "emitted"
    frame: int
    t: float


@dataclass
class StreamStats:
    frames: int = 0
    skipped: int = 0
    events: int = 0
    trace: list[TraceEntry] = field(default_factory=list)

    def latency_violations(self) -> int:
        """Frames whose result was consumed before the previous frame's events were out."""
        emitted_at = {e.frame: e.t for e in self.trace if e.what == "emitted"}
        bad = 0
        for e in self.trace:
            if e.what == "consume" and e.frame > 0:
                done = emitted_at.get(e.frame - 1)
                if done is None or done > e.t:
                    bad += 1
        return bad


_EOS = object()


class _Failure:
    def __init__(self, exc: BaseException):
        self.exc = exc


class StreamingPipeline:
    """Ingest, recognition and align+emit on separate threads.

    Stages are joined by bounded queues, so a slow consumer stalls the
    producer instead of buffering without limit. Recognition may run for
    several frames at once; results are consumed strictly in frame order.
    """

    def __init__(self, source, backend: AsrBackend, frame_interval_s: float,
                 emit: Callable[[CaptionEvent], None], session_id: str = "session",
                 options: Optional[SessionOptions] = None, timeout_s: float = DEFAULT_TIMEOUT_S,
                 queue_size: int = 8, asr_workers: int = 4):
        self.reader = FrameReader(source, frame_interval_s)
        self.store = AudioStore(source.sample_rate_hz)
        self.backend = backend
        self.emit = emit
        self.session = CaptionSession(session_id, self.store, options)
        self.timeout_s = timeout_s
        self.frames_q: queue.Queue = queue.Queue(maxsize=queue_size)
        self.results_q: queue.Queue = queue.Queue(maxsize=queue_size)
        self.asr_workers = asr_workers
        self.stats = StreamStats()

    def _ingest(self):
        try:
            for frame in self.reader:
                self.store.append(frame)
                self.frames_q.put(frame)
        except BaseException as exc:
            self.frames_q.put(_Failure(exc))
            return
        self.frames_q.put(_EOS)

    def _recognize(self, pool):
        while True:
            item = self.frames_q.get()
            if item is _EOS or isinstance(item, _Failure):
                self.results_q.put(item)
                return
            future = pool.submit(self.backend.recognize_cumulative, self.store, item.index)
            self.results_q.put((item, future))

    def _emit(self, events):
        for ev in events:
            self.emit(ev)
        self.stats.events += len(events)

    def run(self) -> StreamStats:
        pool = concurrent.futures.ThreadPoolExecutor(max_workers=self.asr_workers, thread_name_prefix="asr")
        threads = [
            threading.Thread(target=self._ingest, name="ingest", daemon=True),
            threading.Thread(target=self._recognize, args=(pool,), name="recognize", daemon=True),
        ]
        for th in threads:
            th.start()
        try:
            while True:
                item = self.results_q.get()
                if item is _EOS:
                    break
                if isinstance(item, _Failure):
                    raise item.exc
                frame, future = item
                try:
                    transcript = future.result(timeout=self.timeout_s)
                except (BackendError, concurrent.futures.TimeoutError) as exc:
                    log.warning("skipping frame %d: %s", frame.index, exc or "timeout")
                    transcript = None
                    self.stats.skipped += 1
                self.stats.trace.append(TraceEntry("consume", frame.index, time.monotonic()))
                self._emit(self.session.process(frame, transcript))
                self.stats.trace.append(TraceEntry("emitted", frame.index, time.monotonic()))
                self.stats.frames += 1
            self._emit(self.session.finish())
        finally:
            pool.shutdown(wait=False, cancel_futures=True)
        return self.stats


class PacedSource:
    """Wraps a source so each read returns no earlier than real time allows."""

    def __init__(self, source, frame_interval_s: float, clock=time.monotonic, sleep=time.sleep):
        self.source = source
        self.sample_rate_hz = source.sample_rate_hz
        self.clock, self.sleep = clock, sleep
        self._t0 = None
        self._delivered = 0

    def read(self, n: int):
        if self._t0 is None:
            self._t0 = self.clock()
        out = self.source.read(n)
        self._delivered += len(out)
        due = self._t0 + self._delivered / self.sample_rate_hz
        wait = due - self.clock()
        if wait > 0:
            self.sleep(wait)
        return out
