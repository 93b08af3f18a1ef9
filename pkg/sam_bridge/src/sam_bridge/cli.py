"""CLI: run a prompt file through a SAM checkpoint and write the result JSON.

    sam-bridge --image I --prompts P.json --checkpoint C --out R.json \\
               [--overlay O.png] [--device cpu|cuda] [--model-type vit_b]

Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys

from .bridge import load_image_rgb, run_bridge, write_result
from .errors import BridgeError
from .overlay import write_overlay
from .schema import load_prompts
from .segmenter import MODEL_TYPES, SamSegmenter


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="sam-bridge", description=__doc__)
    parser.add_argument("--image", required=True, help="input image")
    parser.add_argument("--prompts", required=True,
                        help="topoprompt/v1 prompt JSON")
    parser.add_argument("--checkpoint", required=True,
                        help="SAM checkpoint (.pth)")
    parser.add_argument("--out", required=True, help="result JSON path")
    parser.add_argument("--overlay", default=None,
                        help="optional overlay PNG path")
    parser.add_argument("--device", choices=["cpu", "cuda"], default="cpu")
    parser.add_argument("--model-type", choices=list(MODEL_TYPES), default=None,
                        help="default: inferred from the checkpoint filename")
    parser.add_argument("--dedup-iou", type=float, default=0.9,
                        help="masks with pairwise IoU above this count once")
    parser.add_argument("--batch", type=int, default=1, metavar="N",
                        help="points per forward pass (1 = no batching)")
    return parser


def _build_segmenter(args) -> SamSegmenter:
    return SamSegmenter(args.checkpoint, model_type=args.model_type,
                        device=args.device)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else argv)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"sam-bridge: error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help has already printed
        return int(exc.code or 0)
    try:
        prompt_file = load_prompts(args.prompts)
        image_rgb = load_image_rgb(args.image)
        segmenter = _build_segmenter(args)
        meta = {"path": args.checkpoint, "device": args.device,
                "model_type": getattr(segmenter, "model_type", args.model_type)}
        result = run_bridge(image_rgb, prompt_file, segmenter,
                            image_path=args.image, prompts_path=args.prompts,
                            checkpoint_meta=meta, dedup_iou=args.dedup_iou,
                            batch_size=args.batch)
        write_result(result, args.out)
        if args.overlay:
            write_overlay(image_rgb, result, args.overlay)
        print(f"{result.mask_count} masks from {len(result.results)} prompts "
              f"in {result.total_time_s:.2f}s -> {args.out}", file=sys.stderr)
        return 0
    except (BridgeError, OSError) as exc:
        print(f"sam-bridge: error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
