"""Word-level timestamps and loudness styling for streaming ASR captions."""

from .align import AlignmentError, AlignmentResult, align, brute_force_align, emit_updates, levenshtein
from .asr import AsrScriptEntry, BackendError, HttpBackend, ScriptedBackend
from .audio import ArraySource, AudioStore, FrameReader, IngestError, RawPcmSource, WavSource
from .delta import attribute_interval, compute_delta, handle_revision
from .events import CaptionEvent, EventKind, final_text, final_words
from .loudness import LoudnessMap, decorate, rms_dbfs, style_scale
from .pipeline import CaptionSession, SessionOptions, StreamingPipeline, replay, run_frames
from .sim import AccuracyReport, GroundTruthWord, OracleBackend, score, simulate_asr
from .split import split_char_weighted, split_delta, split_linear
from .timeline import (
    SILENT,
    AudioFrame,
    ConfigurationError,
    CumulativeTranscript,
    DeltaSegment,
    RevisionInfo,
    SubSegment,
    WordSegment,
    normalize,
    register_segmenter,
    tokenize,
)

__version__ = "0.1.0"
