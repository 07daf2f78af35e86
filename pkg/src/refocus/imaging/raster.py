# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
Owned RGBA8 images and the pixel primitives every editing tool is built on.

All operations are pure: they return a new Raster and never touch the
input. Regions are inclusive pixel boxes; they are clamped to the image at
use, never at construction.
"""
import hashlib
from dataclasses import dataclass
from io import BytesIO

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import DecodeError, EmptyRegion

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


@dataclass(frozen=True)
class Color:
    r: int
    g: int
    b: int
    a: int = 255

    def __post_init__(self):
        for name in ("r", "g", "b", "a"):
            value = getattr(self, name)
            if not 0 <= value <= 255:
                raise ValueError(f"channel {name}={value} outside 0..255")

    @classmethod
    def from_seq(cls, values):
        return cls(*[int(v) for v in values])


WHITE = Color(255, 255, 255)
RED = Color(255, 0, 0)


@dataclass(frozen=True)
class Region:
    """Inclusive pixel rectangle (x1, y1) .. (x2, y2)."""
    x1: int
    y1: int
    x2: int
    y2: int

    def normalized(self):
        return Region(min(self.x1, self.x2), min(self.y1, self.y2),
                      max(self.x1, self.x2), max(self.y1, self.y2))

    def clamp(self, width, height):
        """Normalized and clipped to the image, or None if nothing is left."""
        reg = self.normalized()
        x1, y1 = max(reg.x1, 0), max(reg.y1, 0)
        x2, y2 = min(reg.x2, width - 1), min(reg.y2, height - 1)
        if x1 > x2 or y1 > y2:
            return None
        return Region(x1, y1, x2, y2)

    @property
    def width(self):
        reg = self.normalized()
        return reg.x2 - reg.x1 + 1

    @property
    def height(self):
        reg = self.normalized()
        return reg.y2 - reg.y1 + 1

    @property
    def area(self):
        return self.width * self.height

    def center(self):
        reg = self.normalized()
        return (reg.x1 + reg.x2) / 2, (reg.y1 + reg.y2) / 2

    def contains(self, other):
        a, b = self.normalized(), other.normalized()
        return a.x1 <= b.x1 and a.y1 <= b.y1 and b.x2 <= a.x2 and b.y2 <= a.y2

    def intersection(self, other):
        a, b = self.normalized(), other.normalized()
        x1, y1 = max(a.x1, b.x1), max(a.y1, b.y1)
        x2, y2 = min(a.x2, b.x2), min(a.y2, b.y2)
        if x1 > x2 or y1 > y2:
            return None
        return Region(x1, y1, x2, y2)

    def union(self, other):
        a, b = self.normalized(), other.normalized()
        return Region(min(a.x1, b.x1), min(a.y1, b.y1),
                      max(a.x2, b.x2), max(a.y2, b.y2))

    def iou(self, other):
        inter = self.intersection(other)
        if inter is None:
            return 0.
        return inter.area / (self.area + other.area - inter.area)

    def to_dict(self):
        return {"x1": self.x1, "y1": self.y1, "x2": self.x2, "y2": self.y2}

    @classmethod
    def from_dict(cls, data):
        if isinstance(data, (list, tuple)):
            return cls(*[int(v) for v in data])
        return cls(int(data["x1"]), int(data["y1"]), int(data["x2"]), int(data["y2"]))


def union_all(regions):
    regions = list(regions)
    if not regions:
        return None
    out = regions[0].normalized()
    for reg in regions[1:]:
        out = out.union(reg)
    return out


@dataclass(frozen=True)
class Raster:
    """Row-major RGBA8 pixels; `pixels` is exactly width * height * 4 bytes."""
    width: int
    height: int
    pixels: bytes

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"raster must be at least 1x1, got {self.width}x{self.height}")
        if len(self.pixels) != self.width * self.height * 4:
            raise ValueError("pixel buffer length does not match dimensions")

    @classmethod
    def from_array(cls, arr):
        arr = np.asarray(arr)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ValueError(f"expected an (H, W, 4) array, got {arr.shape}")
        arr = np.ascontiguousarray(arr, dtype=np.uint8)
        return cls(arr.shape[1], arr.shape[0], arr.tobytes())

    @classmethod
    def blank(cls, width, height, color=WHITE):
        arr = np.empty((height, width, 4), dtype=np.uint8)
        arr[:] = (color.r, color.g, color.b, color.a)
        return cls.from_array(arr)

    def array(self):
        """Read-only (H, W, 4) view of the pixels."""
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(
            self.height, self.width, 4)

    def pixel(self, x, y):
        return tuple(int(v) for v in self.array()[y, x])

    def digest(self):
        hasher = hashlib.sha256()
        hasher.update(f"{self.width}x{self.height}:".encode("ascii"))
        hasher.update(self.pixels)
        return hasher.hexdigest()

    def to_pil(self):
        return Image.frombytes("RGBA", (self.width, self.height), self.pixels)

    @classmethod
    def from_pil(cls, pim):
        pim = pim.convert("RGBA")
        return cls(pim.width, pim.height, pim.tobytes())


def load_png(data):
    """Decodes PNG bytes into an RGBA8 Raster; other color types gain alpha 255."""
    if not data.startswith(PNG_SIGNATURE):
        raise DecodeError("not a PNG stream")
    try:
        with Image.open(BytesIO(data)) as pim:
            pim.load()
            if pim.mode in ("I;16", "I;16B", "I"):
                # 16-bit grayscale: keep the high byte
                arr = (np.asarray(pim, dtype=np.uint32) >> 8).astype(np.uint8)
                pim = Image.fromarray(arr, mode="L")
            return Raster.from_pil(pim)
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as err:
        raise DecodeError(f"malformed PNG: {err}") from err


def save_png(raster):
    buffer = BytesIO()
    raster.to_pil().save(buffer, format="PNG")
    return buffer.getvalue()


def read_png(path):
    with open(path, "rb") as fh:
        return load_png(fh.read())


def write_png(raster, path):
    with open(path, "wb") as fh:
        fh.write(save_png(raster))


def _clamped(raster, region):
    clamped = region.clamp(raster.width, raster.height)
    if clamped is None:
        raise EmptyRegion(f"{region} has no pixels inside a "
                          f"{raster.width}x{raster.height} image")
    return clamped


def _region_mask(raster, regions):
    mask = np.zeros((raster.height, raster.width), dtype=bool)
    for reg in regions:
        mask[reg.y1:reg.y2 + 1, reg.x1:reg.x2 + 1] = True
    return mask


def _source_over(dst, color):
    """Per-channel round-half-up source-over of a flat color onto dst pixels."""
    alpha = color.a
    dst = dst.astype(np.uint32)
    src = np.array([color.r, color.g, color.b], dtype=np.uint32)
    out = np.empty(dst.shape, dtype=np.uint8)
    blended = src * alpha + dst[..., :3] * (255 - alpha)
    out[..., :3] = (2 * blended + 255) // 510
    out[..., 3] = (2 * (255 * alpha + dst[..., 3] * (255 - alpha)) + 255) // 510
    return out


def fill_opaque(raster, region, color):
    reg = _clamped(raster, region)
    arr = raster.array().copy()
    arr[reg.y1:reg.y2 + 1, reg.x1:reg.x2 + 1] = (color.r, color.g, color.b, 255)
    return Raster.from_array(arr)


def composite_overlay(raster, region, color):
    return composite_overlay_many(raster, [region], color)


def composite_overlay_many(raster, regions, color):
    """Composites `color` once over the union of `regions`."""
    clamped = [_clamped(raster, reg) for reg in regions]
    if not clamped:
        raise EmptyRegion("no regions to composite")
    arr = raster.array().copy()
    if color.a == 0:
        return Raster.from_array(arr)
    mask = _region_mask(raster, clamped)
    arr[mask] = _source_over(arr[mask], color)
    return Raster.from_array(arr)


def draw_rect_outline(raster, region, color, thickness):
    if thickness < 1:
        raise ValueError("thickness must be >= 1")
    reg = _clamped(raster, region)
    arr = raster.array().copy()
    paint = (color.r, color.g, color.b, 255)
    t = thickness
    arr[reg.y1:min(reg.y1 + t, reg.y2 + 1), reg.x1:reg.x2 + 1] = paint
    arr[max(reg.y2 - t + 1, reg.y1):reg.y2 + 1, reg.x1:reg.x2 + 1] = paint
    arr[reg.y1:reg.y2 + 1, reg.x1:min(reg.x1 + t, reg.x2 + 1)] = paint
    arr[reg.y1:reg.y2 + 1, max(reg.x2 - t + 1, reg.x1):reg.x2 + 1] = paint
    return Raster.from_array(arr)


def restore_regions(edited, original, regions):
    """Copies `regions` of `original` back over `edited` (same dimensions)."""
    if (edited.width, edited.height) != (original.width, original.height):
        raise ValueError("rasters differ in size")
    arr = edited.array().copy()
    src = original.array()
    for reg in regions:
        reg = reg.clamp(edited.width, edited.height)
        if reg is not None:
            arr[reg.y1:reg.y2 + 1, reg.x1:reg.x2 + 1] = \
                src[reg.y1:reg.y2 + 1, reg.x1:reg.x2 + 1]
    return Raster.from_array(arr)
