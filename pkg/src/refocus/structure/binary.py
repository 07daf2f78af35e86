# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""Ink masks, rule extraction and connected components."""
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import ndimage

from ..imaging.raster import Region

EIGHT_CONNECTED = np.ones((3, 3), dtype=bool)
FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)


class Orientation(str, Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"


@dataclass(frozen=True, eq=False)
class BinaryMask:
    """Row-major foreground bits; True is ink."""
    width: int
    height: int
    bits: np.ndarray

    def __post_init__(self):
        if self.bits.shape != (self.height, self.width):
            raise ValueError("bit array does not match dimensions")
        self.bits.setflags(write=False)

    @classmethod
    def from_array(cls, bits):
        bits = np.array(bits, dtype=bool)
        return cls(bits.shape[1], bits.shape[0], bits)

    def count(self):
        return int(self.bits.sum())

    def __eq__(self, other):
        return isinstance(other, BinaryMask) and np.array_equal(self.bits, other.bits)


@dataclass(frozen=True)
class LineSegment:
    orientation: Orientation
    position: int
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("segment start after end")

    @property
    def length(self):
        return self.end - self.start + 1


@dataclass(frozen=True)
class Contour:
    bbox: Region
    area: int
    perimeter_length: int


def luminance(arr):
    """ITU-R 601 luma, rounded, for an (..., >=3) uint8 array."""
    rgb = arr[..., :3].astype(np.uint32)
    return (299 * rgb[..., 0] + 587 * rgb[..., 1] + 114 * rgb[..., 2] + 500) // 1000


def binarize(raster, threshold=200):
    return BinaryMask.from_array(luminance(raster.array()) < threshold)


def default_kernel_length(extent, min_kernel=10, divisor=20):
    return max(min_kernel, extent // divisor)


def morph_open_lines(mask, orientation, kernel_length):
    """Keeps only foreground runs at least `kernel_length` long along `orientation`."""
    if kernel_length < 2:
        raise ValueError("kernel_length must be >= 2")
    if orientation == Orientation.HORIZONTAL:
        structure = np.ones((1, kernel_length), dtype=bool)
    else:
        structure = np.ones((kernel_length, 1), dtype=bool)
    opened = ndimage.binary_opening(mask.bits, structure=structure, border_value=0)
    return BinaryMask.from_array(opened)


def _runs(bits):
    """(row, start, end_inclusive) for every foreground run along axis 1."""
    padded = np.pad(bits.astype(np.int8), ((0, 0), (1, 1)))
    delta = np.diff(padded, axis=1)
    rows, starts = np.nonzero(delta == 1)
    _, ends = np.nonzero(delta == -1)
    return rows, starts, ends - 1


def extract_line_segments(mask, orientation, min_length, merge_gap=2):
    """
    Maximal runs of at least `min_length` pixels, merged across parallel
    neighbours no more than `merge_gap` apart whose spans overlap.
    """
    if min_length < 2:
        raise ValueError("min_length must be >= 2")
    bits = mask.bits if orientation == Orientation.HORIZONTAL else mask.bits.T
    positions, starts, ends = _runs(bits)
    keep = (ends - starts + 1) >= min_length

    clusters = []
    for pos, start, end in zip(positions[keep], starts[keep], ends[keep]):
        pos, start, end = int(pos), int(start), int(end)
        for cluster in reversed(clusters):
            if cluster["last"] < pos - merge_gap:
                continue
            if start <= cluster["end"] and end >= cluster["start"]:
                cluster["last"] = pos
                cluster["start"] = min(cluster["start"], start)
                cluster["end"] = max(cluster["end"], end)
                cluster["weight"] += end - start + 1
                cluster["moment"] += pos * (end - start + 1)
                break
        else:
            clusters.append({"last": pos, "start": start, "end": end,
                             "weight": end - start + 1,
                             "moment": pos * (end - start + 1)})

    segments = [
        LineSegment(orientation,
                    int(np.floor(cl["moment"] / cl["weight"] + 0.5)),
                    cl["start"], cl["end"])
        for cl in clusters]
    return sorted(segments, key=lambda seg: (seg.position, seg.start))


def find_contours(mask):
    """One contour per 8-connected component, longest perimeter first."""
    labels, count = ndimage.label(mask.bits, structure=EIGHT_CONNECTED)
    if count == 0:
        return []
    areas = np.bincount(labels.ravel(), minlength=count + 1)
    interior = ndimage.binary_erosion(mask.bits, structure=FOUR_CONNECTED,
                                      border_value=0)
    boundary = np.where(mask.bits & ~interior, labels, 0)
    perimeters = np.bincount(boundary.ravel(), minlength=count + 1)

    contours = []
    for idx, slc in enumerate(ndimage.find_objects(labels), start=1):
        ys, xs = slc
        bbox = Region(xs.start, ys.start, xs.stop - 1, ys.stop - 1)
        contours.append(Contour(bbox, int(areas[idx]), int(perimeters[idx])))
    contours.sort(key=lambda c: (-c.perimeter_length, c.bbox.y1, c.bbox.x1))
    return contours


def empty_runs(profile, gap_min):
    """Interior runs of zeros in a 1-D ink profile at least `gap_min` long."""
    ink = np.flatnonzero(profile > 0)
    if ink.size == 0:
        return []
    first, last = ink[0], ink[-1]
    inside = np.asarray(profile[first:last + 1]) == 0
    padded = np.pad(inside.astype(np.int8), 1)
    delta = np.diff(padded)
    starts = np.flatnonzero(delta == 1)
    ends = np.flatnonzero(delta == -1) - 1
    return [(int(first + s), int(first + e)) for s, e in zip(starts, ends)
            if e - s + 1 >= gap_min]
