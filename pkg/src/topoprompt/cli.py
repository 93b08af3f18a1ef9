"""Command-line entry point.

Subcommands: ``prompts`` (image -> prompt JSON), ``diagram`` (image ->
persistence CSV), ``synth`` (write synthetic scenes), ``bench`` (tabular
benchmark report). Exit codes: 0 success, 1 usage error, 2 runtime error.
Data goes to files or stdout (``-o -``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import TopopromptError
from .persistence import compute_diagram, diagram_to_csv, filter_by_persistence
from .prompts import (
    DEFAULT_MIN_PERSISTENCE,
    export_prompts,
    grid_prompts,
    prompt_set_to_json,
    random_prompts,
    tda_prompts,
)
from .scalar_field import gaussian_smooth, load_image, normalize
from .synth import SceneConfig, dataset, discover_dataset, save_scene
from .evaluation import benchmark, parse_generator_name

_DEFAULT_GENERATORS = "grid16,grid32,grid64,random256,random1024,random4096,tda"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems instead of exiting with code 2."""

    def error(self, message):  # noqa: A003 - argparse API
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="topoprompt", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command",
                                parser_class=_Parser)
    defaults = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("prompts", help="generate point prompts for an image",
                       formatter_class=defaults,
                       description="Generate point prompts and write them as "
                                   "versioned JSON.")
    p.add_argument("-i", "--input", required=True, help="PNG or PGM image")
    p.add_argument("-o", "--output", default="-", help="output JSON ('-' = stdout)")
    p.add_argument("--method", choices=["tda", "grid", "random"], default="tda",
                   help="prompt generator")
    p.add_argument("--budget", type=int, default=None,
                   help="tda: keep at most this many points")
    p.add_argument("--min-persistence", type=float, default=None,
                   help=f"tda: significance threshold on the normalized "
                        f"range ({DEFAULT_MIN_PERSISTENCE} when only a "
                        f"budget is given)")
    p.add_argument("--sigma", type=float, default=0.0,
                   help="tda: Gaussian presmoothing radius (0 = off)")
    p.add_argument("--invert", action="store_true",
                   help="tda: treat dark structures as objects")
    p.add_argument("--connectivity", type=int, choices=[4, 8], default=8)
    p.add_argument("--n", type=int, default=16, help="grid: points per side")
    p.add_argument("--count", type=int, default=256, help="random: number of points")
    p.add_argument("--seed", type=int, default=0, help="random: RNG seed")

    p = sub.add_parser("diagram", formatter_class=defaults,
                       help="export the persistence diagram as CSV")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--connectivity", type=int, choices=[4, 8], default=8)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--invert", action="store_true")
    p.add_argument("--min-persistence", type=float, default=0.0,
                   help="drop pairs below this persistence (default 0: keep all)")

    p = sub.add_parser("synth", formatter_class=defaults,
                       help="generate synthetic benchmark scenes")
    p.add_argument("-o", "--output", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--width", type=int, default=1024)
    p.add_argument("--height", type=int, default=1024)
    p.add_argument("--count", type=int, default=80, help="ovals per image")
    p.add_argument("--n-images", type=int, default=1)
    p.add_argument("--semi-axis", type=float, nargs=2, default=[4.0, 12.0],
                   metavar=("LO", "HI"))
    p.add_argument("--intensity", type=float, nargs=2, default=[0.6, 1.0],
                   metavar=("LO", "HI"))
    p.add_argument("--background", type=float, default=0.1)
    p.add_argument("--noise-sigma", type=float, default=0.02)
    p.add_argument("--max-overlap", type=int, default=0)
    p.add_argument("--format", choices=["pgm", "png"], default="pgm")

    p = sub.add_parser("bench", formatter_class=defaults,
                       help="run the prompt-generator benchmark")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("dataset", nargs="?", default=None,
                     help="directory of *.scene.json files (from 'synth')")
    src.add_argument("--synth", action="store_true",
                     help="generate the default synthetic dataset in memory")
    p.add_argument("--seed", type=int, default=42, help="--synth: base seed")
    p.add_argument("--width", type=int, default=1024)
    p.add_argument("--height", type=int, default=1024)
    p.add_argument("--count", type=int, default=80)
    p.add_argument("--n-images", type=int, default=10)
    p.add_argument("--noise-sigma", type=float, default=0.02)
    p.add_argument("--generators", default=_DEFAULT_GENERATORS,
                   help=f"comma list of gridN/randomN/tda[N] "
                        f"(default {_DEFAULT_GENERATORS})")
    p.add_argument("--threshold", type=float, default=None,
                   help="oracle segmenter threshold (default: midpoint of "
                        "background and minimum object intensity)")
    p.add_argument("--iou-min", type=float, default=0.5)
    p.add_argument("--repeat", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1,
                   help="images evaluated in parallel (default 1, reproducible timing)")
    p.add_argument("-o", "--output", default="-", help="report CSV ('-' = stdout)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of CSV")

    return parser


def _write_output(text: str, target: str) -> None:
    if target == "-":
        sys.stdout.write(text)
    else:
        Path(target).write_text(text, encoding="utf-8")


def _cmd_prompts(args) -> int:
    image = load_image(args.input)
    if args.method == "tda":
        min_p = args.min_persistence
        if args.budget is None and min_p is None:
            min_p = DEFAULT_MIN_PERSISTENCE
        pset = tda_prompts(image, budget=args.budget, min_persistence=min_p,
                           sigma=args.sigma, invert=args.invert,
                           connectivity=args.connectivity)
    elif args.method == "grid":
        pset = grid_prompts(image.width, image.height, args.n)
    else:
        pset = random_prompts(image.width, image.height, args.count, args.seed)
    pset = pset.with_source(args.input)
    if args.output == "-":
        sys.stdout.write(prompt_set_to_json(pset))
    else:
        export_prompts(pset, args.output)
    return 0


def _cmd_diagram(args) -> int:
    image = load_image(args.input, invert=args.invert)
    field = normalize(image)
    if args.sigma > 0:
        field = gaussian_smooth(field, args.sigma)
    diagram = compute_diagram(field, args.connectivity)
    if args.min_persistence > 0:
        diagram = filter_by_persistence(diagram, args.min_persistence)
    _write_output(diagram_to_csv(diagram), args.output)
    return 0


def _cmd_synth(args) -> int:
    config = SceneConfig(
        seed=args.seed, width=args.width, height=args.height, count=args.count,
        semi_axis_range=tuple(args.semi_axis),
        intensity_range=tuple(args.intensity),
        background=args.background, noise_sigma=args.noise_sigma,
        max_overlap=args.max_overlap,
    )
    scenes = dataset(config, args.n_images)
    for i, (image, scene) in enumerate(scenes):
        stem = f"scene_{i:03d}"
        paths = save_scene(image, scene, args.output, stem, args.format)
        print(f"wrote {paths['image']} (+ scene JSON, labels)", file=sys.stderr)
    return 0


def _cmd_bench(args) -> int:
    if args.synth:
        config = SceneConfig(seed=args.seed, width=args.width, height=args.height,
                             count=args.count, noise_sigma=args.noise_sigma)
        data = dataset(config, args.n_images)
    else:
        data = discover_dataset(args.dataset)
    specs = [parse_generator_name(name)
             for name in args.generators.split(",") if name.strip()]
    report = benchmark(data, specs, threshold=args.threshold,
                       iou_min=args.iou_min, repeat=args.repeat, jobs=args.jobs)
    if args.json:
        _write_output(json.dumps(report.to_json_dict(), indent=2) + "\n",
                      args.output)
    else:
        _write_output(report.to_csv(), args.output)
        sys.stderr.write(report.format_table())
    return 0


_COMMANDS = {
    "prompts": _cmd_prompts,
    "diagram": _cmd_diagram,
    "synth": _cmd_synth,
    "bench": _cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"topoprompt: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version have already printed
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except (TopopromptError, OSError, ValueError) as exc:
        print(f"topoprompt: error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
