"""Grayscale reordered-dissimilarity images and a binary PGM writer.

Black pixels mark low dissimilarity, white high, so clusters in a VAT or
ConiVAT ordering appear as dark blocks along the diagonal. Linear scaling
maps distances affinely onto 0..255; rank scaling spreads the distinct
off-diagonal values evenly, which keeps structure visible when a single
far-out pair would otherwise compress everything toward black.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .vat import VatResult

SCALES = ("linear", "rank")


@dataclass(frozen=True)
class RdiImage:
    """Square grayscale pixel array, one pixel per matrix entry."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2 or px.shape[0] != px.shape[1]:
            raise ValueError(f"pixel array must be square, got shape {px.shape}")
        if px.dtype != np.uint8:
            if np.any(px < 0) or np.any(px > 255):
                raise ValueError("pixel values must lie in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def render(vat: VatResult, scale: str = "linear") -> RdiImage:
    """Map the reordered matrix to intensities; both scales are monotone.

    linear: round(255 * d / max(d)); an all-zero matrix renders black.
    rank: round(255 * rank / (m - 1)) over the m distinct off-diagonal
    values (a single distinct positive value renders 255; the diagonal's
    zeros always render black).
    """
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {SCALES}, got {scale!r}")
    d = vat.reordered
    n = d.shape[0]
    if scale == "linear":
        mx = float(d.max()) if n else 0.0
        px = np.zeros((n, n)) if mx == 0.0 else np.rint(255.0 * d / mx)
        return RdiImage(px)
    off_mask = ~np.eye(n, dtype=bool)
    distinct = np.unique(d[off_mask])
    if distinct.size <= 1:
        return RdiImage(np.where(d == 0.0, 0, 255))
    # diagonal zeros sit at or below the smallest off-diagonal value, so
    # searchsorted ranks them 0 and they stay black
    ranks = np.searchsorted(distinct, d)
    return RdiImage(np.rint(255.0 * ranks / (distinct.size - 1)))


def write_pgm(img: RdiImage, path) -> None:
    """Binary PGM (P5, maxval 255): header then row-major pixel bytes."""
    header = f"P5\n{img.width} {img.height}\n255\n".encode("ascii")
    payload = np.ascontiguousarray(img.pixels, dtype=np.uint8).tobytes()
    with open(path, "wb") as fh:
        fh.write(header + payload)
