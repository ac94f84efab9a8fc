"""``wordalign`` command line: run, simulate, score."""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from typing import Optional, Sequence

from .asr import HttpBackend, ScriptedBackend, write_script
from .audio import IngestError, RawPcmSource, WavSource, check_frame_interval
from .config import OUTPUTS, RunConfig, build_config, load_config_file
from .emitters import make_emitter
from .events import read_jsonl
from .loudness import LoudnessMap
from .pipeline import PacedSource, SessionOptions, StreamingPipeline
from .sim import OracleBackend, read_truth, score, simulate_asr
from .split import STRATEGIES
from .timeline import ConfigurationError

log = logging.getLogger("wordalign")


def _open_source(cfg: RunConfig):
    if cfg.input == "-":
        if cfg.pcm16le:
            return RawPcmSource(sys.stdin.buffer, cfg.rate)
        return WavSource(io.BytesIO(sys.stdin.buffer.read()))
    fp = open(cfg.input, "rb")
    if cfg.pcm16le:
        return RawPcmSource(fp, cfg.rate)
    return WavSource(fp)


def _make_backend(cfg: RunConfig):
    kind, arg = cfg.asr_kind
    if kind == "script":
        return ScriptedBackend.from_file(arg)
    if kind == "oracle":
        with open(arg, encoding="utf-8") as fp:
            return OracleBackend(read_truth(fp))
    return HttpBackend(arg, cfg.session, cfg.timeout_s)


def run(cfg: RunConfig, out=None) -> int:
    """Stream captions for one input; returns a process exit status."""
    out = out or sys.stdout
    try:
        cfg.validate()
        source = _open_source(cfg)
        backend = _make_backend(cfg)
    except (ConfigurationError, IngestError, OSError, ValueError) as exc:
        print(f"wordalign: {exc}", file=sys.stderr)
        return 2
    if cfg.realtime:
        source = PacedSource(source, cfg.frame_interval_s)
    options = SessionOptions(split=cfg.split, case_sensitive=not cfg.case_insensitive,
                             loudness_map=cfg.loudness_map)
    sink = open(cfg.output, "w", encoding="utf-8") if cfg.output else out
    emitter = make_emitter(cfg.out, sink)
    try:
        pipeline = StreamingPipeline(source, backend, cfg.frame_interval_s, emitter.emit,
                                     session_id=cfg.session, options=options, timeout_s=cfg.timeout_s)
        stats = pipeline.run()
    except (IngestError, OSError) as exc:
        print(f"wordalign: {exc}", file=sys.stderr)
        return 1
    finally:
        emitter.close()
        backend.close()
        if sink is not out:
            sink.close()
    log.info("%d frames, %d skipped, %d events", stats.frames, stats.skipped, stats.events)
    return 0


def _frame_ms(text: str) -> float:
    value = float(text)
    try:
        check_frame_interval(value / 1000.0)
    except ConfigurationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wordalign", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="caption an audio stream")
    # defaults are None so a config file can fill what the command line leaves out
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--input", help="WAV file, raw PCM file, or - for stdin")
    p.add_argument("--pcm16le", action="store_true", default=None, help="input is raw PCM16 little-endian mono")
    p.add_argument("--rate", type=int, help="sample rate of raw PCM input")
    p.add_argument("--frame-ms", type=_frame_ms, help="frame interval in ms (50-2000, default 250)")
    p.add_argument("--asr", help="script:<path> | oracle:<truth.jsonl> | url:<endpoint>")
    p.add_argument("--split", choices=STRATEGIES)
    p.add_argument("--out", choices=OUTPUTS)
    p.add_argument("--output", help="write captions here instead of stdout")
    p.add_argument("--loudness-map", type=LoudnessMap.parse, metavar="LO_DB,HI_DB,LO_SCALE,HI_SCALE")
    p.add_argument("--session")
    p.add_argument("--timeout-s", type=float, help="recognizer timeout per frame (default 5)")
    p.add_argument("--case-insensitive", action="store_true", default=None)
    p.add_argument("--realtime", action="store_true", default=None, help="pace file input at real time")

    p = sub.add_parser("simulate", help="write the cumulative ASR script an ideal recognizer would produce")
    p.add_argument("--truth", required=True)
    p.add_argument("--frame-ms", type=_frame_ms, default=250.0)
    p.add_argument("--emit-script", required=True)

    p = sub.add_parser("score", help="timestamp accuracy of an event log against ground truth")
    p.add_argument("--events", required=True)
    p.add_argument("--truth", required=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")

    if args.command == "run":
        cli_values = {k: v for k, v in vars(args).items() if k not in ("command", "config", "verbose")}
        try:
            file_values = load_config_file(args.config) if args.config else {}
            cfg = build_config(file_values, cli_values)
        except (ConfigurationError, OSError) as exc:
            print(f"wordalign: {exc}", file=sys.stderr)
            return 2
        return run(cfg)

    if args.command == "simulate":
        with open(args.truth, encoding="utf-8") as fp:
            truth = read_truth(fp)
        with open(args.emit_script, "w", encoding="utf-8") as fp:
            write_script(simulate_asr(truth, args.frame_ms / 1000.0), fp)
        return 0

    with open(args.events, encoding="utf-8") as fp:
        events = list(read_jsonl(fp))
    with open(args.truth, encoding="utf-8") as fp:
        truth = read_truth(fp)
    print(json.dumps(score(events, truth).to_dict()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
