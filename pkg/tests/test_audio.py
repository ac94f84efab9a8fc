import io
import wave

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wordalign.audio import (
    ArraySource,
    AudioStore,
    FrameReader,
    IngestError,
    RawPcmSource,
    WavSource,
    check_frame_interval,
    float_to_pcm16,
    next_frame,
    pcm16_to_float,
    write_wav,
)
from wordalign.timeline import ConfigurationError


def frames_of(samples, rate, interval):
    return list(FrameReader(ArraySource(samples, rate), interval))


def test_frames_at_16k_quarter_second():
    frames = frames_of(np.zeros(16000), 16000, 0.25)
    assert [len(f.samples) for f in frames] == [4000] * 4


def test_remainder_frame():
    frames = frames_of(np.zeros(17600), 16000, 0.25)  # 1.1 s
    assert len(frames) == 5
    assert [len(f.samples) for f in frames[:4]] == [4000] * 4
    assert frames[-1].duration_s == pytest.approx(0.1, abs=1e-9)
    assert frames[-1].end_s == pytest.approx(1.1, abs=1e-9)


def test_empty_stream_has_no_frames():
    reader = FrameReader(ArraySource(np.zeros(0), 16000), 0.25)
    assert next_frame(reader) is None
    assert list(reader) == []


@given(n=st.integers(0, 5000), interval=st.floats(0.05, 2.0), rate=st.sampled_from([8000, 16000, 44100]))
def test_frames_contiguous_and_lossless(n, interval, rate):
    samples = np.arange(n, dtype=np.float64) / max(n, 1)
    frames = frames_of(samples, rate, interval)
    for a, b in zip(frames, frames[1:]):
        assert b.start_s == a.end_s
        assert b.index == a.index + 1
    for f in frames:
        assert abs(len(f.samples) - round(f.duration_s * rate)) <= 1
    joined = np.concatenate([f.samples for f in frames]) if frames else np.zeros(0)
    assert np.array_equal(joined, samples)


def test_raw_pcm_roundtrip_is_bit_exact():
    ints = np.array([0, 1, -1, 32767, -32768, 1234, -4321], dtype="<i2")
    src = RawPcmSource(io.BytesIO(ints.tobytes()), 8000)
    frames = list(FrameReader(src, 0.05))
    got = np.concatenate([f.samples for f in frames])
    assert np.array_equal(got, ints / 32768.0)
    assert float_to_pcm16(got) == ints.tobytes()


def test_raw_pcm_odd_byte_count_names_offset():
    src = RawPcmSource(io.BytesIO(b"\x01\x00\x02\x00\x03"), 16000)
    with pytest.raises(IngestError) as info:
        list(FrameReader(src, 0.25))
    assert info.value.byte_offset == 4
    assert "byte offset 4" in str(info.value)


def test_wav_roundtrip(tmp_path):
    samples = np.sin(np.linspace(0, 20, 1600)) * 0.5
    path = tmp_path / "a.wav"
    write_wav(path, samples, 16000)
    with open(path, "rb") as fp:
        src = WavSource(fp)
        got = np.concatenate([f.samples for f in FrameReader(src, 0.05)])
    assert np.max(np.abs(got - samples)) <= 1 / 32768


def test_stereo_wav_is_averaged(tmp_path):
    path = tmp_path / "st.wav"
    left = np.array([1000, 2000, -3000], dtype="<i2")
    right = np.array([3000, 0, -1000], dtype="<i2")
    with wave.open(str(path), "wb") as w:
        w.setnchannels(2)
        w.setsampwidth(2)
        w.setframerate(8000)
        w.writeframes(np.column_stack([left, right]).astype("<i2").tobytes())
    with open(path, "rb") as fp:
        got = WavSource(fp).read(10)
    assert np.allclose(got, np.array([2000, 1000, -2000]) / 32768.0)


def test_non_pcm16_wav_rejected(tmp_path):
    path = tmp_path / "u8.wav"
    with wave.open(str(path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(1)
        w.setframerate(8000)
        w.writeframes(b"\x80" * 10)
    with open(path, "rb") as fp, pytest.raises(IngestError):
        WavSource(fp)


def test_pcm_decode_range():
    x = pcm16_to_float(np.array([-32768, 32767], dtype="<i2").tobytes())
    assert x[0] == -1.0 and x[1] < 1.0


def filled_store(n=16000, rate=16000, interval=0.25):
    store = AudioStore(rate, capacity=16)
    for f in frames_of(np.arange(n, dtype=np.float64), rate, interval):
        store.append(f)
    return store


def test_store_slice_examples():
    store = filled_store(32000)
    assert np.array_equal(store.slice(0, store.total_duration_s), np.arange(32000))
    assert len(store.slice(0.5, 0.5 + 1 / 16000)) == 1
    assert len(store.slice(1.0, 1.5)) == 8000


def test_store_slice_out_of_range():
    store = filled_store()
    with pytest.raises(IndexError):
        store.slice(0.5, 1.5)
    with pytest.raises(IndexError):
        store.slice(0.5, 0.5)
    with pytest.raises(IndexError):
        store.slice(-0.1, 0.5)


@given(st.lists(st.floats(0, 1), min_size=3, max_size=3, unique=True))
def test_store_slices_concatenate(points):
    a, b, c = sorted(points)
    store = filled_store()
    joined = np.concatenate([store.slice(a, b), store.slice(b, c)])
    assert np.array_equal(joined, store.slice(a, c))
    assert abs(len(store.slice(a, c)) - round((c - a) * 16000)) <= 1


def test_store_records_frame_bounds_in_order():
    store = filled_store(8000, interval=0.25)
    assert store.frame_count == 2
    assert store.frame_bounds(1) == (0.25, 0.5)
    f = next(iter(FrameReader(ArraySource(np.zeros(10), 16000), 0.25)))
    with pytest.raises(ValueError):
        store.append(f)  # index 0 again


def test_frame_interval_bounds():
    assert check_frame_interval(0.25) == 0.25
    for bad in (0.01, 2.5):
        with pytest.raises(ConfigurationError):
            check_frame_interval(bad)
