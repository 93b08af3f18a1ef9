"""Segmenter abstraction and the Segment Anything implementation.

The bridge core only needs ``set_image`` plus one mask-and-score prediction
per foreground point, so any model satisfying :class:`Segmenter` plugs in.
The SAM wrapper imports torch and segment_anything lazily: parsing, RLE and
result handling stay usable (and testable) without the heavyweight stack.
"""

from __future__ import annotations

from pathlib import Path
from typing import Protocol

import numpy as np
from numpy.typing import NDArray

from .errors import CheckpointError

MODEL_TYPES = ("vit_b", "vit_l", "vit_h")


class Segmenter(Protocol):
    def set_image(self, image_rgb: NDArray[np.uint8]) -> None:
        """Prepare for predictions on an (H, W, 3) uint8 image."""

    def predict_point(self, x: int, y: int) -> tuple[NDArray[np.bool_], float]:
        """Best mask and its predicted quality for one foreground point."""

    # Optional: implementations may also expose
    #   predict_points(points) -> list[(mask, score)]
    # to serve several independent single-point prompts per forward pass.


def sniff_model_type(checkpoint: str | Path) -> str | None:
    """Guess vit_b/vit_l/vit_h from the checkpoint filename."""
    name = Path(checkpoint).name.lower()
    for mt in MODEL_TYPES:
        if mt in name:
            return mt
    return None


class SamSegmenter:
    """One-point-per-forward-pass wrapper around a SAM predictor.

    Of the three masks SAM proposes per point, the one with the highest
    predicted IoU is kept, matching single-object prompting semantics.
    """

    def __init__(self, checkpoint: str | Path, model_type: str | None = None,
                 device: str = "cpu") -> None:
        checkpoint = Path(checkpoint)
        if not checkpoint.exists():
            raise CheckpointError(f"checkpoint not found: {checkpoint}")
        model_type = model_type or sniff_model_type(checkpoint)
        if model_type not in MODEL_TYPES:
            raise CheckpointError(
                f"cannot infer model type from {checkpoint.name!r}; "
                f"pass one of {MODEL_TYPES}")
        try:
            from segment_anything import SamPredictor, sam_model_registry
        except ImportError as exc:
            raise CheckpointError(
                "segment-anything is not installed; install the [sam] extra"
            ) from exc
        try:
            model = sam_model_registry[model_type](checkpoint=str(checkpoint))
        except Exception as exc:
            raise CheckpointError(f"failed to load {checkpoint}: {exc}") from exc
        model.to(device)
        self._predictor = SamPredictor(model)
        self.model_type = model_type
        self.device = device

    def set_image(self, image_rgb: NDArray[np.uint8]) -> None:
        self._predictor.set_image(image_rgb)

    def predict_point(self, x: int, y: int) -> tuple[NDArray[np.bool_], float]:
        masks, scores, _ = self._predictor.predict(
            point_coords=np.array([[x, y]], dtype=np.float32),
            point_labels=np.array([1], dtype=np.int64),
            multimask_output=True,
        )
        best = int(np.argmax(scores))
        return masks[best].astype(bool), float(scores[best])

    def predict_points(self, points) -> list[tuple[NDArray[np.bool_], float]]:
        """Batched variant: each point is still its own single-point prompt."""
        import torch

        coords = np.array([[[x, y]] for x, y in points], dtype=np.float32)
        coords = self._predictor.transform.apply_coords(
            coords, self._predictor.original_size)
        coords_t = torch.as_tensor(coords, device=self._predictor.device)
        labels_t = torch.ones((len(points), 1), dtype=torch.int64,
                              device=self._predictor.device)
        masks, scores, _ = self._predictor.predict_torch(
            point_coords=coords_t, point_labels=labels_t,
            multimask_output=True)
        out = []
        for b in range(len(points)):
            best = int(torch.argmax(scores[b]).item())
            out.append((masks[b, best].cpu().numpy().astype(bool),
                        float(scores[b, best].item())))
        return out
