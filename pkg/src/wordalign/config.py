"""Run configuration: defaults, ``key = value`` config files and validation.

A config file holds one setting per line; ``#`` starts a comment. Keys are
the long CLI flag names with dashes or underscores, e.g.::

    # wordalign.conf
    frame-ms = 250
    asr = script:golden.jsonl
    split = linear
    out = vtt
    loudness-map = -40,-10,0.8,1.6
    case-insensitive = false

Flags given on the command line override the file, which overrides the
defaults.
"""

from __future__ import annotations

import dataclasses
import uuid
from dataclasses import dataclass, field
from typing import Any, Optional

from .asr import DEFAULT_TIMEOUT_S
from .audio import check_frame_interval
from .loudness import DEFAULT_MAP, LoudnessMap
from .split import STRATEGIES
from .timeline import ConfigurationError

OUTPUTS = ("jsonl", "vtt", "ansi")
ASR_KINDS = ("script", "oracle", "url")


@dataclass
class RunConfig:
    input: Optional[str] = None
    pcm16le: bool = False
    rate: Optional[int] = None
    frame_ms: float = 250.0
    asr: Optional[str] = None
    split: str = "linear"
    out: str = "jsonl"
    output: Optional[str] = None
    loudness_map: LoudnessMap = DEFAULT_MAP
    session: str = field(default_factory=lambda: f"session-{uuid.uuid4().hex[:8]}")
    timeout_s: float = DEFAULT_TIMEOUT_S
    case_insensitive: bool = False
    realtime: bool = False

    @property
    def frame_interval_s(self) -> float:
        return self.frame_ms / 1000.0

    @property
    def asr_kind(self) -> tuple[str, str]:
        kind, _, arg = (self.asr or "").partition(":")
        return kind, arg

    def validate(self) -> "RunConfig":
        if not self.input:
            raise ConfigurationError("--input is required")
        check_frame_interval(self.frame_interval_s)
        kind, arg = self.asr_kind
        if kind not in ASR_KINDS or not arg:
            raise ConfigurationError(f"--asr must be one of script:<path>, oracle:<path>, url:<endpoint>; got {self.asr!r}")
        if self.split not in STRATEGIES:
            raise ConfigurationError(f"--split must be one of {STRATEGIES}")
        if self.out not in OUTPUTS:
            raise ConfigurationError(f"--out must be one of {OUTPUTS}")
        if self.pcm16le and not self.rate:
            raise ConfigurationError("--pcm16le needs --rate")
        if self.timeout_s <= 0:
            raise ConfigurationError("timeout must be positive")
        return self


_BOOL = {"1": True, "true": True, "yes": True, "on": True,
         "0": False, "false": False, "no": False, "off": False}


def _coerce(name: str, raw: Any) -> Any:
    if name == "loudness_map":
        return raw if isinstance(raw, LoudnessMap) else LoudnessMap.parse(str(raw))
    if not isinstance(raw, str):
        return raw
    if name in ("pcm16le", "case_insensitive", "realtime"):
        try:
            return _BOOL[raw.strip().lower()]
        except KeyError:
            raise ConfigurationError(f"{name}: expected a boolean, got {raw!r}") from None
    try:
        if name == "rate":
            return int(raw)
        if name in ("frame_ms", "timeout_s"):
            return float(raw)
    except ValueError:
        raise ConfigurationError(f"{name}: bad number {raw!r}") from None
    return raw


def parse_config_text(text: str) -> dict[str, Any]:
    known = {f.name for f in dataclasses.fields(RunConfig)}
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigurationError(f"config line {lineno}: expected key = value")
        name = key.strip().replace("-", "_")
        if name not in known:
            raise ConfigurationError(f"config line {lineno}: unknown key {key.strip()!r}")
        values[name] = _coerce(name, value.strip())
    return values


def load_config_file(path) -> dict[str, Any]:
    with open(path, encoding="utf-8") as fp:
        return parse_config_text(fp.read())


def build_config(file_values: Optional[dict] = None, cli_values: Optional[dict] = None) -> RunConfig:
    """Merge layers; ``None`` in ``cli_values`` means the flag was not given."""
    merged: dict[str, Any] = {}
    merged.update(file_values or {})
    merged.update({k: v for k, v in (cli_values or {}).items() if v is not None})
    return RunConfig(**{k: _coerce(k, v) for k, v in merged.items()})
