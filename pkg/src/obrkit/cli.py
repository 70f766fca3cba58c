"""Command-line interface: transcribe, revise, render, corrupt, experiment.

Exit codes: 0 success; 1 I/O failure; 2 nothing recognisable in the image
(transcribe); 3 invalid parameters or unrenderable input (render/corrupt).
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .cells import CodeTable, data_path, default_table
from .corrector import BrailleCorrector, FrequencyBaseline
from .corpus import load_corpus_dir
from .errors import BrailleError, NoLinesFound
from .experiments import (
    DEFAULT_ERROR_PERCENTS,
    DEFAULT_NOISE_SPECS,
    DEFAULT_SEED,
    BitflipConfig,
    ImageNoiseConfig,
    NoiseSpec,
    run_bitflip_experiment,
    run_image_experiment,
)
from .lexicon import DEFAULT_ALLOWED_CHARS, load_lexicon
from .pgm import load_image, save_image
from .recognize import RecognizeConfig, recognize
from .render import RenderConfig, gaussian_blur, render, spread_noise

log = logging.getLogger("obrkit")

DICTIONARY_ENV = "OBRKIT_DICTIONARY"


def _resolve_dictionary(arg: str | None) -> Path:
    if arg:
        return Path(arg)
    env = os.environ.get(DICTIONARY_ENV)
    if env:
        return Path(env)
    return data_path("pt_frequency.txt")


def _load_table(arg: str | None) -> CodeTable:
    return CodeTable.load(arg) if arg else default_table()


def _read_config_file(path: str) -> dict[str, str]:
    """Parse a ``key = value`` text file; '#' starts a comment."""
    values: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line without '=': {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _dataclass_from(cls, args: argparse.Namespace, config: dict[str, str]):
    """Build a config dataclass from file values overridden by CLI flags."""
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name in config:
            kwargs[f.name] = type(f.default)(config[f.name]) if f.default is not None else config[f.name]
        flag = getattr(args, f.name, None)
        if flag is not None:
            kwargs[f.name] = flag
    return cls(**kwargs)


def _parse_noise(value: str) -> NoiseSpec:
    try:
        kind, _, param = value.partition(":")
        return NoiseSpec(kind.strip(), float(param))
    except (ValueError, TypeError):
        raise ValueError(
            f"bad noise spec {value!r}; expected kind:parameter, e.g. blur:3.0"
        ) from None


def _add_render_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dot-radius", type=int, dest="dot_radius")
    parser.add_argument("--dot-pitch", type=int, dest="dot_pitch")
    parser.add_argument("--cell-pitch-x", type=int, dest="cell_pitch_x")
    parser.add_argument("--cell-pitch-y", type=int, dest="cell_pitch_y")
    parser.add_argument("--margin", type=int)
    parser.add_argument("--max-cols", type=int, dest="max_cols")
    parser.add_argument("--config", help="key = value file with the same parameters")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obrkit",
        description="Braille document transcription and revision toolkit",
    )
    parser.add_argument("--version", action="version", version=f"obrkit {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transcribe", help="recognise a braille page image into text")
    p.add_argument("image")
    p.add_argument("--table", help="code table file (default: shipped Portuguese)")
    p.add_argument("--out", required=True, help="output text file")
    p.add_argument("--dot-ratio", type=float, dest="dot_ratio")

    p = sub.add_parser("revise", help="correct a transcribed text against a dictionary")
    p.add_argument("text")
    p.add_argument("--dict", dest="dictionary", help=f"frequency list (default: ${DICTIONARY_ENV} or shipped)")
    p.add_argument("--table")
    p.add_argument("--method", choices=("ours", "baseline"), default="ours")
    p.add_argument("--out", required=True)

    p = sub.add_parser("render", help="render text as a synthetic braille page")
    p.add_argument("text")
    p.add_argument("--table")
    p.add_argument("--out", required=True, help="output image (.pgm or .png)")
    _add_render_flags(p)

    p = sub.add_parser("corrupt", help="apply blur or spread noise to a page image")
    p.add_argument("image")
    p.add_argument("--noise", required=True, help="kind:parameter, e.g. blur:3.0 or spread:10")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True)

    p = sub.add_parser("experiment", help="run evaluation harness a (bit flips) or b (image noise)")
    p.add_argument("which", choices=("a", "b"))
    p.add_argument("--corpus", required=True, help="directory of UTF-8 .txt files")
    p.add_argument("--dict", dest="dictionary")
    p.add_argument("--table")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--percents", help="comma-separated error percentages (experiment a)")
    p.add_argument("--noise", action="append", help="kind:parameter, repeatable (experiment b)")
    p.add_argument("--allowed-chars", dest="allowed_chars", help="dictionary character filter")
    p.add_argument("--out", required=True, help="CSV report path")
    _add_render_flags(p)
    return parser


def cmd_transcribe(args: argparse.Namespace) -> int:
    try:
        img = load_image(args.image)
        table = _load_table(args.table)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    cfg = RecognizeConfig() if args.dot_ratio is None else RecognizeConfig(dot_ratio=args.dot_ratio)
    out = recognize(img, table, cfg)
    if out.cells_total == 0:
        print("error: no braille lines detected", file=sys.stderr)
        return 2
    try:
        Path(args.out).write_text("\n".join(out.text) + "\n", encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"cells: {out.cells_total} total, {out.cells_failed} failed")
    return 0


def cmd_revise(args: argparse.Namespace) -> int:
    try:
        text = Path(args.text).read_text(encoding="utf-8")
        table = _load_table(args.table)
        lexicon = load_lexicon(_resolve_dictionary(args.dictionary))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.method == "ours":
        corrector = BrailleCorrector(lexicon, table)

        def fix(tokens: list[str]) -> list[str]:
            return corrector.revise_text(tokens)[0]
    else:
        baseline = FrequencyBaseline(lexicon)
        fix = baseline.correct_text
    changed = 0
    out_lines = []
    for line in text.splitlines():
        tokens = line.split()
        fixed = fix(tokens)
        changed += sum(a != b for a, b in zip(tokens, fixed))
        out_lines.append(" ".join(fixed))
    try:
        Path(args.out).write_text("\n".join(out_lines) + "\n", encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"changed: {changed} words")
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    try:
        lines = Path(args.text).read_text(encoding="utf-8").splitlines()
        table = _load_table(args.table)
        config = _read_config_file(args.config) if args.config else {}
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = _dataclass_from(RenderConfig, args, config)
        img = render(lines, table, cfg)
    except (ValueError, BrailleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    try:
        save_image(args.out, img)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"rendered {img.shape[1]}x{img.shape[0]} page to {args.out}")
    return 0


def cmd_corrupt(args: argparse.Namespace) -> int:
    try:
        img = load_image(args.image)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        spec = _parse_noise(args.noise)
        if spec.kind == "blur":
            noisy = gaussian_blur(img, spec.parameter)
        else:
            noisy = spread_noise(img, int(spec.parameter), args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    try:
        save_image(args.out, noisy)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"applied {spec.label} to {args.image}")
    return 0


def cmd_experiment(args: argparse.Namespace) -> int:
    try:
        table = _load_table(args.table)
        allowed = frozenset(args.allowed_chars) if args.allowed_chars else DEFAULT_ALLOWED_CHARS
        lexicon = load_lexicon(_resolve_dictionary(args.dictionary), allowed)
        texts = load_corpus_dir(args.corpus, table)
    except (OSError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        if args.which == "a":
            percents = (
                tuple(float(p) for p in args.percents.split(","))
                if args.percents
                else DEFAULT_ERROR_PERCENTS
            )
            report = run_bitflip_experiment(
                BitflipConfig(percents, args.seed), texts, lexicon, table
            )
        else:
            specs = (
                tuple(_parse_noise(n)._replace_seed(args.seed) for n in args.noise)
                if args.noise
                else tuple(dataclasses.replace(s, seed=args.seed) for s in DEFAULT_NOISE_SPECS)
            )
            config = _read_config_file(args.config) if args.config else {}
            render_cfg = _dataclass_from(RenderConfig, args, config)
            cfg = ImageNoiseConfig(
                noise_specs=specs, seed=args.seed, render=render_cfg
            )
            report = run_image_experiment(cfg, texts, lexicon, table)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    try:
        report.write_csv(args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report.pretty())
    print(f"report written to {args.out}")
    return 0


COMMANDS = {
    "transcribe": cmd_transcribe,
    "revise": cmd_revise,
    "render": cmd_render,
    "corrupt": cmd_corrupt,
    "experiment": cmd_experiment,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return COMMANDS[args.command](args)


def entry() -> None:  # console_scripts hook
    sys.exit(main())


if __name__ == "__main__":
    entry()
