"""Feed exported point prompts into a Segment Anything checkpoint."""

from .bridge import (
    BridgeResult,
    PromptResult,
    load_image_rgb,
    load_result,
    run_bridge,
    write_result,
)
from .errors import BridgeError, CheckpointError, DimensionMismatchError, SchemaError
from .linearity import fit_line
from .overlay import render_overlay, write_overlay
from .rle import decode, encode, mask_iou
from .schema import Prompt, PromptFile, load_prompts
from .segmenter import SamSegmenter, Segmenter, sniff_model_type

__version__ = "0.1.0"
