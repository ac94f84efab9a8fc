"""Audio ingest: PCM16 decoding, fixed-interval framing and the sample history."""

from __future__ import annotations

import threading
import wave
from typing import BinaryIO, Iterator, Optional

import numpy as np

from .timeline import TIME_TOL, AudioFrame, ConfigurationError

DEFAULT_FRAME_INTERVAL_S = 0.25
MIN_FRAME_INTERVAL_S = 0.05
MAX_FRAME_INTERVAL_S = 2.0


class IngestError(ValueError):
    """Malformed audio input."""

    def __init__(self, message: str, byte_offset: Optional[int] = None):
        if byte_offset is not None:
            message = f"{message} (byte offset {byte_offset})"
        super().__init__(message)
        self.byte_offset = byte_offset


def pcm16_to_float(data: bytes, channels: int = 1) -> np.ndarray:
    """Decode little-endian PCM16 into floats in [-1, 1), averaging channels."""
    samples = np.frombuffer(data, dtype="<i2").astype(np.float64) / 32768.0
    if channels > 1:
        samples = samples.reshape(-1, channels).mean(axis=1)
    return samples


def float_to_pcm16(samples: np.ndarray) -> bytes:
    clipped = np.clip(np.round(np.asarray(samples) * 32768.0), -32768, 32767)
    return clipped.astype("<i2").tobytes()


class SampleSource:
    """Anything that yields mono float samples on demand."""

    sample_rate_hz: int

    def read(self, n: int) -> np.ndarray:
        raise NotImplementedError


class ArraySource(SampleSource):
    def __init__(self, samples, sample_rate_hz: int):
        self.samples = np.asarray(samples, dtype=np.float64)
        self.sample_rate_hz = int(sample_rate_hz)
        self._pos = 0

    def read(self, n: int) -> np.ndarray:
        out = self.samples[self._pos:self._pos + n]
        self._pos += len(out)
        return out


class RawPcmSource(SampleSource):
    """Raw PCM16 little-endian mono, e.g. piped on standard input."""

    def __init__(self, stream: BinaryIO, sample_rate_hz: int):
        if sample_rate_hz <= 0:
            raise ConfigurationError("raw PCM input needs a positive --rate")
        self.stream = stream
        self.sample_rate_hz = int(sample_rate_hz)
        self._offset = 0

    def read(self, n: int) -> np.ndarray:
        want = 2 * n
        chunks = []
        got = 0
        while got < want:
            chunk = self.stream.read(want - got)
            if not chunk:
                break
            chunks.append(chunk)
            got += len(chunk)
        data = b"".join(chunks)
        if len(data) % 2:
            raise IngestError("odd byte count in PCM16 stream", self._offset + len(data) - 1)
        self._offset += len(data)
        return pcm16_to_float(data)


class WavSource(SampleSource):
    """RIFF/WAVE PCM16 reader; multi-channel input is downmixed by averaging."""

    def __init__(self, fp):
        try:
            self._wav = wave.open(fp, "rb")
        except (wave.Error, EOFError) as exc:
            raise IngestError(f"not a readable WAV file: {exc}") from exc
        if self._wav.getsampwidth() != 2:
            raise IngestError(f"only PCM16 WAV is supported, got {8 * self._wav.getsampwidth()}-bit")
        self.sample_rate_hz = self._wav.getframerate()
        self.channels = self._wav.getnchannels()

    def read(self, n: int) -> np.ndarray:
        return pcm16_to_float(self._wav.readframes(n), self.channels)

    def close(self):
        self._wav.close()


def write_wav(path, samples, sample_rate_hz: int) -> None:
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(sample_rate_hz)
        w.writeframes(float_to_pcm16(samples))


def check_frame_interval(frame_interval_s: float) -> float:
    if not MIN_FRAME_INTERVAL_S - TIME_TOL <= frame_interval_s <= MAX_FRAME_INTERVAL_S + TIME_TOL:
        raise ConfigurationError(
            f"frame interval {frame_interval_s} s outside "
            f"[{MIN_FRAME_INTERVAL_S}, {MAX_FRAME_INTERVAL_S}]"
        )
    return frame_interval_s


class FrameReader:
    """Cut a sample source into contiguous frames.

    Frame boundaries are integer sample positions, so ``frame[i+1].start_s``
    equals ``frame[i].end_s`` exactly. The last frame may be shorter.
    """

    def __init__(self, source: SampleSource, frame_interval_s: float = DEFAULT_FRAME_INTERVAL_S):
        if frame_interval_s <= 0:
            raise ValueError("frame_interval_s must be > 0")
        self.source = source
        self.rate = source.sample_rate_hz
        self.frame_samples = max(1, int(round(frame_interval_s * self.rate)))
        self._index = 0
        self._pos = 0

    def next_frame(self) -> Optional[AudioFrame]:
        samples = self.source.read(self.frame_samples)
        if len(samples) == 0:
            return None
        start = self._pos
        self._pos += len(samples)
        frame = AudioFrame(
            index=self._index,
            start_s=start / self.rate,
            end_s=self._pos / self.rate,
            samples=samples,
            sample_rate_hz=self.rate,
        )
        self._index += 1
        return frame

    def __iter__(self) -> Iterator[AudioFrame]:
        while True:
            frame = self.next_frame()
            if frame is None:
                return
            yield frame


def next_frame(reader: FrameReader) -> Optional[AudioFrame]:
    return reader.next_frame()


class AudioStore:
    """Growable sample history addressed by absolute time.

    One thread appends whole frames; any number of threads may read.
    Readers never see a partially appended frame.
    """

    def __init__(self, sample_rate_hz: int, capacity: int = 1 << 16):
        self.sample_rate_hz = int(sample_rate_hz)
        self._buf = np.zeros(capacity, dtype=np.float64)
        self._n = 0
        self._frames: list[tuple[float, float]] = []
        self._lock = threading.Lock()

    def append(self, frame: AudioFrame) -> None:
        if frame.sample_rate_hz != self.sample_rate_hz:
            raise ValueError("sample rate mismatch")
        with self._lock:
            if frame.index != len(self._frames):
                raise ValueError(f"expected frame {len(self._frames)}, got {frame.index}")
            need = self._n + len(frame.samples)
            if need > len(self._buf):
                grown = np.zeros(max(need, 2 * len(self._buf)), dtype=np.float64)
                grown[:self._n] = self._buf[:self._n]
                self._buf = grown
            self._buf[self._n:need] = frame.samples
            self._n = need
            self._frames.append((frame.start_s, frame.end_s))

    @property
    def total_samples(self) -> int:
        return self._n

    @property
    def total_duration_s(self) -> float:
        return self._n / self.sample_rate_hz

    @property
    def frame_count(self) -> int:
        return len(self._frames)

    def frame_bounds(self, index: int) -> tuple[float, float]:
        with self._lock:
            return self._frames[index]

    def samples(self) -> np.ndarray:
        with self._lock:
            return self._buf[:self._n].copy()

    def slice(self, start_s: float, end_s: float) -> np.ndarray:
        """Samples whose timestamps fall in ``[start_s, end_s)``."""
        with self._lock:
            buf, n = self._buf, self._n
        total = n / self.sample_rate_hz
        if not (-TIME_TOL <= start_s < end_s <= total + TIME_TOL):
            raise IndexError(f"slice [{start_s}, {end_s}) outside [0, {total}]")
        i0 = min(n, max(0, int(round(start_s * self.sample_rate_hz))))
        i1 = min(n, max(0, int(round(end_s * self.sample_rate_hz))))
        return buf[i0:i1].copy()
