"""Per-word loudness and the loudness-to-size mapping."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .timeline import SILENT, ConfigurationError, Loudness, WordSegment


def rms_dbfs(samples) -> Loudness:
    """RMS level in dB relative to full scale, or ``SILENT`` for zero energy."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size == 0:
        raise IndexError("rms_dbfs of an empty sample sequence")
    mean_sq = float(np.mean(x * x))
    if mean_sq == 0.0:
        return SILENT
    return float(10.0 * np.log10(mean_sq))


@dataclass(frozen=True)
class LoudnessMap:
    lo_db: float = -40.0
    hi_db: float = -10.0
    lo_scale: float = 0.8
    hi_scale: float = 1.6

    def __post_init__(self):
        if not self.lo_db < self.hi_db:
            raise ConfigurationError(f"loudness map needs lo_db < hi_db, got {self.lo_db}, {self.hi_db}")
        if not 0 < self.lo_scale < self.hi_scale:
            raise ConfigurationError(
                f"loudness map needs 0 < lo_scale < hi_scale, got {self.lo_scale}, {self.hi_scale}"
            )

    @classmethod
    def parse(cls, text: str) -> "LoudnessMap":
        """Parse ``lo_db,hi_db,lo_scale,hi_scale``."""
        try:
            values = [float(v) for v in text.split(",")]
        except ValueError:
            raise ConfigurationError(f"bad loudness map {text!r}") from None
        if len(values) != 4:
            raise ConfigurationError(f"loudness map needs 4 values, got {len(values)}")
        return cls(*values)


DEFAULT_MAP = LoudnessMap()


def style_scale(dbfs: Loudness, loudness_map: LoudnessMap = DEFAULT_MAP) -> float:
    m = loudness_map
    if dbfs is SILENT or dbfs <= m.lo_db:
        return m.lo_scale
    if dbfs >= m.hi_db:
        return m.hi_scale
    frac = (dbfs - m.lo_db) / (m.hi_db - m.lo_db)
    return m.lo_scale + frac * (m.hi_scale - m.lo_scale)


def decorate(word: WordSegment, store, loudness_map: LoudnessMap = DEFAULT_MAP) -> WordSegment:
    """Score ``word`` over its own span of ``store``."""
    samples = store.slice(word.start_s, word.end_s)
    if samples.size == 0:
        level = SILENT
    else:
        level = rms_dbfs(samples)
    return dataclasses.replace(word, loudness_dbfs=level, style_scale=style_scale(level, loudness_map))
