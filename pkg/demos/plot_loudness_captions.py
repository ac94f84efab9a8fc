"""
Sizing caption words by loudness
================================

Synthesises an utterance whose words are spoken at different levels, runs
the streaming pipeline with an ideal recognizer, and writes the captions as
styled WebVTT and as a terminal line. With matplotlib installed it also
draws each word at its scale over the waveform.
"""

import io
import sys

import numpy as np

from wordalign.audio import ArraySource
from wordalign.emitters import AnsiEmitter, VttEmitter
from wordalign.events import final_words
from wordalign.pipeline import run_frames
from wordalign.sim import GroundTruthWord, OracleBackend

RATE = 16000
rng = np.random.default_rng(0)

# (word, start, end, level in dBFS)
script = [("you", 0.1, 0.5, -32), ("should", 0.55, 1.0, -30), ("do", 1.05, 1.35, -29),
          ("THIS", 1.4, 2.0, -12)]
truth = [GroundTruthWord(w, a, b) for w, a, b, _ in script]

audio = np.zeros(int(2.25 * RATE))
for _, a, b, db in script:
    i0, i1 = int(a * RATE), int(b * RATE)
    audio[i0:i1] = rng.normal(0, 10 ** (db / 20), i1 - i0)

# %%
# Run the pipeline. Each final word carries its RMS level and scale.
events, _ = run_frames(ArraySource(audio, RATE), OracleBackend(truth), 0.25, session_id="demo")
for w in final_words(events):
    print(f"{w.word:>7}  [{w.start_s:.2f}, {w.end_s:.2f}]  {w.loudness_dbfs:6.1f} dBFS  x{w.style_scale:.2f}")

# %%
# Styled WebVTT: one cue per word, font size through a cue class.
buf = io.StringIO()
with VttEmitter(buf) as vtt:
    for e in events:
        vtt.emit(e)
print(buf.getvalue())

# %%
# Terminal rendering: quiet words dim, loud words bold and spaced out.
with AnsiEmitter(sys.stdout) as ansi:
    for e in events:
        ansi.emit(e)

# %%
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(8, 3))
    ax.plot(np.arange(len(audio)) / RATE, audio, lw=0.3, color="0.6")
    for w in final_words(events):
        ax.text((w.start_s + w.end_s) / 2, 0.3, w.word, ha="center", fontsize=12 * w.style_scale)
    ax.set_xlabel("time (s)")
    fig.savefig("loudness_captions.png", dpi=120, bbox_inches="tight")
