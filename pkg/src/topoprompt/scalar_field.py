"""Grayscale scalar fields and the preprocessing applied before extrema extraction.

An image is treated as a real-valued function over its pixel grid. This module
loads PNG / PGM files into that representation, rescales intensities to [0, 1],
and optionally smooths or flips them so that objects of interest become maxima.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from scipy.ndimage import convolve1d

from .errors import DecodeError, EmptyImageError, UnsupportedFormatError

# Rec. 601 luminance weights for RGB reduction.
_LUMA = (0.299, 0.587, 0.114)


@dataclass(frozen=True, slots=True)
class ScalarImage:
    """Immutable 2D scalar field with row-major float64 samples.

    Attributes
    ----------
    width, height : int
        Grid dimensions, both >= 1.
    values : ndarray
        Flat array of length ``width * height``; all entries finite.
    """

    width: int
    height: int
    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise EmptyImageError(
                f"image dimensions must be positive, got {self.width}x{self.height}"
            )
        # private copy: freezing must not alias (or mutate) a caller's buffer
        arr = np.array(self.values, dtype=np.float64).reshape(-1)
        if arr.size != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} values, got {arr.size}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValueError("image values must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_array(cls, array: NDArray) -> "ScalarImage":
        """Build from a 2D array (rows are scanlines)."""
        arr = np.asarray(array, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2D array, got ndim={arr.ndim}")
        h, w = arr.shape
        return cls(width=w, height=h, values=arr.reshape(-1))

    def as_array(self) -> NDArray[np.float64]:
        """Read-only 2D view, shape (height, width)."""
        return self.values.reshape(self.height, self.width)

    def value_at(self, x: int, y: int) -> float:
        return float(self.values[y * self.width + x])


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def load_image(path: str | Path, *, invert: bool = False) -> ScalarImage:
    """Decode a PNG or PGM file into a scalar field of raw intensities.

    RGB inputs are reduced with Rec. 601 luminance (0.299 R + 0.587 G +
    0.114 B). With ``invert`` every value v becomes ``max_representable - v``
    (255 for 8-bit data, 65535 for 16-bit, the declared maxval for PGM), so
    dark-on-bright structures turn into maxima.
    """
    arr, max_rep = _load_raw(path)
    if invert:
        arr = max_rep - arr
    return ScalarImage.from_array(arr)


def _load_raw(path: str | Path) -> tuple[NDArray[np.float64], float]:
    """Decode to a float 2D array plus the format's maximum representable value."""
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(str(p))
    with p.open("rb") as fh:
        head = fh.read(2)
    if head in (b"P2", b"P5"):
        arr, maxval = read_pgm(p)
        return arr.astype(np.float64), float(maxval)
    return _load_with_pillow(p)


def _load_with_pillow(path: Path) -> tuple[NDArray[np.float64], float]:
    from PIL import Image, UnidentifiedImageError

    try:
        with Image.open(path) as img:
            img.load()
            if img.width < 1 or img.height < 1:
                raise UnsupportedFormatError(f"zero-dimension image: {path}")
            mode = img.mode
            if mode == "L":
                return np.asarray(img, dtype=np.float64), 255.0
            if mode in ("I", "I;16", "I;16B", "I;16L"):
                # PNG grayscale above 8 bits is 16-bit; Pillow may report mode I.
                return np.asarray(img, dtype=np.float64), 65535.0
            if mode in ("RGB", "RGBA", "P", "LA"):
                rgb = np.asarray(img.convert("RGB"), dtype=np.float64)
                luma = _LUMA[0] * rgb[..., 0] + _LUMA[1] * rgb[..., 1] + _LUMA[2] * rgb[..., 2]
                return luma, 255.0
            raise UnsupportedFormatError(f"unsupported image mode {mode!r}: {path}")
    except UnidentifiedImageError as exc:
        raise UnsupportedFormatError(f"not a supported image: {path}") from exc
    except (OSError, SyntaxError) as exc:
        raise DecodeError(f"failed to decode {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# PGM (portable graymap), plain P2 and binary P5, maxval up to 65535
# ---------------------------------------------------------------------------

def read_pgm(path: str | Path) -> tuple[NDArray[np.int64], int]:
    """Parse a P2/P5 PGM file. Returns (2D int array, maxval)."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P2", b"P5"):
        raise UnsupportedFormatError(f"not a PGM file: {path}")

    pos = 2

    def skip_separators(i: int) -> int:
        while i < len(data):
            c = data[i : i + 1]
            if c == b"#":
                while i < len(data) and data[i : i + 1] != b"\n":
                    i += 1
            elif c.isspace():
                i += 1
            else:
                break
        return i

    def next_token(i: int) -> tuple[int, int]:
        i = skip_separators(i)
        start = i
        while i < len(data) and not data[i : i + 1].isspace():
            i += 1
        if start == i:
            raise DecodeError(f"truncated PGM header: {path}")
        try:
            return int(data[start:i]), i
        except ValueError as exc:
            raise DecodeError(f"bad PGM header token in {path}") from exc

    width, pos = next_token(pos)
    height, pos = next_token(pos)
    maxval, pos = next_token(pos)
    if width < 1 or height < 1:
        raise UnsupportedFormatError(f"zero-dimension PGM: {path}")
    if not 0 < maxval <= 65535:
        raise DecodeError(f"PGM maxval {maxval} out of range (1..65535): {path}")

    count = width * height
    if magic == b"P5":
        pos += 1  # exactly one whitespace byte after maxval
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = count * dtype.itemsize
        raster = data[pos : pos + need]
        if len(raster) < need:
            raise DecodeError(f"truncated PGM raster: {path}")
        arr = np.frombuffer(raster, dtype=dtype).astype(np.int64)
    else:
        tokens = data[pos:].split()
        if len(tokens) < count:
            raise DecodeError(f"truncated PGM raster: {path}")
        try:
            arr = np.array([int(t) for t in tokens[:count]], dtype=np.int64)
        except ValueError as exc:
            raise DecodeError(f"bad PGM sample in {path}") from exc
    if arr.max(initial=0) > maxval:
        raise DecodeError(f"PGM sample exceeds declared maxval: {path}")
    return arr.reshape(height, width), maxval


def write_pgm(path: str | Path, array: NDArray, maxval: int = 255) -> None:
    """Write a 2D integer array as binary (P5) PGM."""
    arr = np.asarray(array)
    if arr.ndim != 2:
        raise ValueError("write_pgm expects a 2D array")
    if not 0 < maxval <= 65535:
        raise ValueError("maxval must be in 1..65535")
    h, w = arr.shape
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    header = f"P5\n{w} {h}\n{maxval}\n".encode("ascii")
    Path(path).write_bytes(header + arr.astype(dtype).tobytes())


def write_image(path: str | Path, array: NDArray, maxval: int = 65535) -> None:
    """Write a 2D integer array as PGM or PNG depending on the file suffix."""
    p = Path(path)
    if p.suffix.lower() == ".pgm":
        write_pgm(p, array, maxval)
        return
    if p.suffix.lower() == ".png":
        from PIL import Image

        arr = np.asarray(array)
        if maxval > 255:
            Image.fromarray(arr.astype(np.uint16)).save(p)
        else:
            Image.fromarray(arr.astype(np.uint8)).save(p)
        return
    raise UnsupportedFormatError(f"unsupported output suffix: {p.suffix!r}")


# ---------------------------------------------------------------------------
# Pointwise transforms
# ---------------------------------------------------------------------------

def normalize(image: ScalarImage) -> ScalarImage:
    """Affine rescale to [0, 1]; a constant image maps to all zeros.

    Idempotent, and makes persistence thresholds transferable across bit
    depths (a threshold of 0.05 always means 5% of the dynamic range).
    """
    vmin = float(image.values.min())
    vmax = float(image.values.max())
    if vmax == vmin:
        out = np.zeros_like(image.values)
    else:
        out = (image.values - vmin) / (vmax - vmin)
    return ScalarImage(image.width, image.height, out)


def invert(image: ScalarImage) -> ScalarImage:
    """Flip the field so minima become maxima: v -> (max + min) - v.

    An involution for any input; combined with the normalization that
    follows it in the prompt pipeline it is equivalent to the raw
    ``max_representable - v`` flip applied at load time.
    """
    vmin = float(image.values.min())
    vmax = float(image.values.max())
    return ScalarImage(image.width, image.height, (vmax + vmin) - image.values)


def gaussian_smooth(image: ScalarImage, sigma: float) -> ScalarImage:
    """Separable Gaussian blur with kernel radius ceil(3*sigma).

    Border samples are replicated (clamp-to-edge), which cannot invent new
    extrema at corners the way reflection can. ``sigma == 0`` returns the
    input unchanged.
    """
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return image
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(x * x) / (2.0 * sigma * sigma))
    kernel /= kernel.sum()
    arr = image.as_array()
    out = convolve1d(arr, kernel, axis=1, mode="nearest")
    out = convolve1d(out, kernel, axis=0, mode="nearest")
    return ScalarImage.from_array(out)
