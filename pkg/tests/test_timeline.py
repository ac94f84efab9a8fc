import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wordalign.timeline import (
    SILENT,
    AudioFrame,
    ConfigurationError,
    SubSegment,
    normalize,
    register_segmenter,
    token_spans,
    tokenize,
    unregister_segmenter,
)


@pytest.mark.parametrize("text, expected", [
    ("to go", ["to", "go"]),
    ("", []),
    ("  We   cho ", ["We", "cho"]),
])
def test_tokenize_examples(text, expected):
    assert tokenize(text) == expected


@pytest.mark.parametrize("text, expected", [
    ("We  choose ", "We choose"),
    ("ose", "ose"),
    ("\tto\n go", "to go"),
])
def test_normalize_examples(text, expected):
    assert normalize(text) == expected


def test_normalize_keeps_case_and_punctuation():
    assert normalize(" YOU  should, do THIS. ") == "YOU should, do THIS."


@given(st.text(alphabet=st.sampled_from("ab C.\t\n　 "), max_size=40))
def test_join_tokenize_is_normalize(text):
    tokens = tokenize(text)
    assert all(tok and not any(c.isspace() for c in tok) for tok in tokens)
    assert " ".join(tokens) == normalize(text)


def test_token_spans_offsets():
    text = " We  cho"
    assert token_spans(text) == [(1, "We"), (5, "cho")]
    for off, tok in token_spans(text):
        assert text[off:off + len(tok)] == tok


def test_segmenter_mode_without_segmenter_is_config_error():
    unregister_segmenter()
    with pytest.raises(ConfigurationError):
        tokenize("わたしはがくせい", mode="segmenter")


def test_segmenter_mode_uses_registered_segmenter():
    # fixed-width segmenter stands in for a morphological analyser
    register_segmenter(lambda chunk: [chunk[i:i + 2] for i in range(0, len(chunk), 2)], name="pairs")
    try:
        assert tokenize("abcde fg", mode="segmenter", segmenter="pairs") == ["ab", "cd", "e", "fg"]
        assert token_spans("abcde fg", mode="segmenter", segmenter="pairs")[-1] == (6, "fg")
    finally:
        unregister_segmenter("pairs")


def test_segmenter_must_tile_its_chunk():
    with pytest.raises(ValueError):
        tokenize("abc", mode="segmenter", segmenter=lambda chunk: ["ab"])


def test_unknown_mode():
    with pytest.raises(ConfigurationError):
        tokenize("a", mode="morph")


def test_subsegment_rejects_whitespace_and_empty_span():
    with pytest.raises(ValueError):
        SubSegment("to go", 0.0, 1.0, 0)
    with pytest.raises(ValueError):
        SubSegment("", 0.0, 1.0, 0)
    with pytest.raises(ValueError):
        SubSegment("go", 1.0, 1.0, 0)


def test_audio_frame_requires_positive_span():
    with pytest.raises(ValueError):
        AudioFrame(0, 0.5, 0.5, np.zeros(0), 16000)


def test_silent_is_a_distinct_value():
    assert SILENT is not None and SILENT != 0.0 and SILENT != float("-inf")
