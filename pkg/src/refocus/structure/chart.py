# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""Bar strips from axis-value coordinates, and subplot candidates from contours."""
import logging
import math

from ..errors import DetectionFailed, UnknownLabel
from ..imaging.raster import Region, union_all
from .binary import binarize, find_contours
from .layout import ChartKind, ChartLayout, subplot_id

logger = logging.getLogger(__name__)


def detect_subplot_candidates(raster, k, threshold=200, dedup_iou=0.9):
    """Top-k contours by perimeter, skipping near-duplicates of ones already kept."""
    if k < 1:
        raise ValueError("k must be >= 1")
    kept = []
    for contour in find_contours(binarize(raster, threshold)):
        if all(contour.bbox.iou(other.bbox) <= dedup_iou for other in kept):
            kept.append(contour)
            if len(kept) == k:
                break
    return kept


def subplot_layout(raster, k=10, threshold=200, dedup_iou=0.9):
    """Multi-subplot layout whose subplots are the indexed candidates."""
    candidates = detect_subplot_candidates(raster, k, threshold, dedup_iou)
    if not candidates:
        raise DetectionFailed("no subplot candidates found")
    subplots = [(subplot_id(ii), cand.bbox) for ii, cand in enumerate(candidates, 1)]
    return ChartLayout(ChartKind.MULTI_SUBPLOT,
                       plot_region=union_all(reg for _, reg in subplots),
                       subplots=subplots)


def infer_chart_layout(raster, kind, axis_entries, threshold=200):
    """
    Bar-chart layout from dataset-provided axis-value coordinates. The
    chart area is the largest ink component (axes with their bars) joined
    with every axis entry, which leaves a detached caption outside.
    """
    kind = ChartKind(kind)
    if kind == ChartKind.MULTI_SUBPLOT:
        raise ValueError("use subplot_layout for multi-subplot charts")
    axis_entries = [(label, reg.normalized()) for label, reg in axis_entries]
    if not axis_entries:
        raise DetectionFailed("bar charts need axis-value coordinates")
    contours = find_contours(binarize(raster, threshold))
    plot = union_all(reg for _, reg in axis_entries)
    if contours:
        largest = max(contours, key=lambda c: (c.bbox.area, -c.bbox.y1, -c.bbox.x1))
        plot = plot.union(largest.bbox)
    else:
        logger.warning("no ink found; chart area falls back to the axis entries")
    if kind == ChartKind.VERTICAL_BAR:
        axis_entries.sort(key=lambda e: e[1].center()[0])
    else:
        axis_entries.sort(key=lambda e: e[1].center()[1])
    return ChartLayout(kind, plot, axis_entries=axis_entries)


def _strip_bounds(centers, low, high):
    """Inclusive (start, end) per center, split at floor midpoints."""
    bounds = []
    for ii, center in enumerate(centers):
        if ii > 0:
            start = math.floor((centers[ii - 1] + center) / 2) + 1
        elif len(centers) > 1:
            start = math.floor(center - (centers[1] - center) / 2) + 1
        else:
            start = low
        if ii + 1 < len(centers):
            end = math.floor((center + centers[ii + 1]) / 2)
        elif len(centers) > 1:
            end = math.floor(center + (center - centers[ii - 1]) / 2)
        else:
            end = high
        start, end = max(low, start), min(high, end)
        bounds.append((start, max(start, end)))
    return bounds


def bar_regions_from_axis(layout, labels):
    """
    Full-height (vertical bars) or full-width (horizontal bars) strips around
    each requested axis entry, split midway between neighbouring entries.
    """
    if layout.kind == ChartKind.MULTI_SUBPLOT:
        raise ValueError("multi-subplot charts have no axis entries")
    entries = dict(layout.axis_entries)
    for label in labels:
        if label not in entries:
            raise UnknownLabel(label, layout.axis_labels)
    if not labels:
        return []

    plot = layout.plot_region.normalized()
    vertical = layout.kind == ChartKind.VERTICAL_BAR
    axis = 0 if vertical else 1
    ordered = sorted(layout.axis_entries, key=lambda e: e[1].center()[axis])
    centers = [reg.center()[axis] for _, reg in ordered]
    if vertical:
        bounds = _strip_bounds(centers, plot.x1, plot.x2)
    else:
        bounds = _strip_bounds(centers, plot.y1, plot.y2)

    strips = {}
    for (label, reg), (start, end) in zip(ordered, bounds):
        reg = reg.normalized()
        if vertical:
            strips[label] = Region(start, min(plot.y1, reg.y1), end, max(plot.y2, reg.y2))
        else:
            strips[label] = Region(min(plot.x1, reg.x1), start, max(plot.x2, reg.x2), end)
    return [strips[label] for label in labels]
