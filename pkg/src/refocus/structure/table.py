# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
Column and row recovery for rendered tables.

Ruled tables are read from their long horizontal and vertical rules; the
outer frame is the longest contour whose height matches the longest
vertical rule. Axes without rules fall back to valleys in the ink
projection profile, the gaps between text clusters.
"""
import logging

import numpy as np

from ..errors import DetectionFailed, LayoutMismatch
from ..imaging.raster import Region
from .binary import (Orientation, binarize, default_kernel_length, empty_runs,
                     extract_line_segments, find_contours, morph_open_lines)
from .layout import TableLayout, default_row_labels, disambiguate_names

logger = logging.getLogger(__name__)

# a rule must span at least this share of the longest rule in its direction
RULE_SHARE = 0.75
# and the longest rule must cover this share of the ink in that direction;
# shorter strokes belong to glyphs
RULE_SPAN = 0.5


def _longest(segments):
    return min(segments, key=lambda seg: (-seg.length, seg.position))


def _rules(mask, orientation, ink_extent, min_kernel, divisor, merge_gap):
    extent = mask.width if orientation == Orientation.HORIZONTAL else mask.height
    kernel = default_kernel_length(extent, min_kernel, divisor)
    opened = morph_open_lines(mask, orientation, kernel)
    segments = extract_line_segments(opened, orientation, kernel, merge_gap)
    if not segments:
        return [], None
    longest = _longest(segments)
    if longest.length < RULE_SPAN * ink_extent:
        return [], None
    rules = [seg for seg in segments if seg.length >= RULE_SHARE * longest.length]
    return rules, longest


def _frame_from_contours(mask, longest_vertical):
    tolerance = max(3, int(0.02 * longest_vertical.length))
    for contour in find_contours(mask):
        if abs(contour.bbox.height - longest_vertical.length) <= tolerance:
            return contour.bbox
    return None


def _rule_boundaries(rules, low, high, merge_gap):
    inner = sorted({seg.position for seg in rules
                    if low + merge_gap < seg.position < high - merge_gap})
    return [low] + inner + [high]


def _valley_boundaries(profile, low, high, separators, gap_min):
    """Boundaries at the midpoints of the `separators` widest empty runs."""
    valleys = empty_runs(profile, gap_min)
    if len(valleys) < separators:
        return None, valleys
    widest = sorted(valleys, key=lambda v: (-(v[1] - v[0]), v[0]))[:separators]
    widest.sort()
    mids = [(start + end + 1) // 2 for start, end in widest]
    return [low] + mids + [high], widest


def _pad_estimate(valleys):
    """Half the median gap between text clusters, or None without gaps."""
    if not valleys:
        return None
    widths = [end - start + 1 for start, end in valleys]
    return (int(np.median(widths)) + 1) // 2


def _edge_pad(ink, width, height):
    """Half the blank margin between the ink and the nearest image edge."""
    margin = min(ink.x1, ink.y1, width - 1 - ink.x2, height - 1 - ink.y2)
    return max(1, (margin + 1) // 2)


def infer_table_layout(raster, column_names, row_count, row_labels=None,
                       threshold=200, merge_gap=2, min_kernel=10,
                       kernel_divisor=20, gap_min=6):
    if not column_names:
        raise ValueError("column_names must be nonempty")
    if row_count < 1:
        raise ValueError("row_count must be >= 1")
    names = disambiguate_names(column_names)
    labels = list(row_labels) if row_labels is not None \
        else default_row_labels(row_count)
    if len(labels) != row_count:
        raise ValueError("row_labels must have row_count entries")

    mask = binarize(raster, threshold)
    if mask.count() == 0:
        raise DetectionFailed("no ink found in image")
    ys, xs = np.nonzero(mask.bits)
    ink = Region(int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max()))

    v_rules, longest_v = _rules(mask, Orientation.VERTICAL, ink.height, min_kernel,
                                kernel_divisor, merge_gap)
    h_rules, _ = _rules(mask, Orientation.HORIZONTAL, ink.width, min_kernel,
                        kernel_divisor, merge_gap)
    ruled_cols = len(v_rules) >= 2
    ruled_rows = len(h_rules) >= 2

    frame = None
    if ruled_cols and ruled_rows:
        frame = _frame_from_contours(mask, longest_v)
    if frame is None and (ruled_cols or ruled_rows):
        if ruled_cols and ruled_rows:
            logger.debug("no contour matches the longest rule; framing from rules")
        frame = Region(
            min(s.position for s in v_rules) if ruled_cols else ink.x1,
            min(s.position for s in h_rules) if ruled_rows else ink.y1,
            max(s.position for s in v_rules) if ruled_cols else ink.x2,
            max(s.position for s in h_rules) if ruled_rows else ink.y2)
    if frame is None:
        frame = ink
    sub = mask.bits[frame.y1:frame.y2 + 1, frame.x1:frame.x2 + 1]

    # columns
    col_valleys = []
    if ruled_cols:
        x_bounds = _rule_boundaries(v_rules, frame.x1, frame.x2, merge_gap)
    else:
        x_bounds, col_valleys = _valley_boundaries(
            sub.sum(axis=0), 0, sub.shape[1] - 1, len(names) - 1, gap_min)
        if x_bounds is None:
            raise LayoutMismatch(
                f"found {len(col_valleys) + 1} column clusters, "
                f"expected {len(names)}")
        x_bounds = [frame.x1 + b for b in x_bounds]

    # rows: a header strip is present when there is one strip more than rows
    if ruled_rows:
        y_bounds = _rule_boundaries(h_rules, frame.y1, frame.y2, merge_gap)
        row_valleys = []
    else:
        profile = sub.sum(axis=1)
        y_bounds, row_valleys = _valley_boundaries(
            profile, 0, sub.shape[0] - 1, row_count, gap_min)
        if y_bounds is None:
            y_bounds, row_valleys = _valley_boundaries(
                profile, 0, sub.shape[0] - 1, row_count - 1, gap_min)
        if y_bounds is None:
            raise LayoutMismatch(
                f"found {len(row_valleys) + 1} text lines, expected "
                f"{row_count} rows")
        y_bounds = [frame.y1 + b for b in y_bounds]

    if not ruled_cols or not ruled_rows:
        # borderless edges sit one cell padding outside the ink; text lines all
        # have the glyph height, so line gaps give the padding most exactly
        h, w = raster.height, raster.width
        pad = _pad_estimate(row_valleys) or _pad_estimate(col_valleys) or \
            _edge_pad(ink, w, h)
        pad_x = 0 if ruled_cols else pad
        pad_y = 0 if ruled_rows else pad
        x_bounds[0] = max(0, x_bounds[0] - pad_x)
        x_bounds[-1] = min(w - 1, x_bounds[-1] + pad_x)
        y_bounds[0] = max(0, y_bounds[0] - pad_y)
        y_bounds[-1] = min(h - 1, y_bounds[-1] + pad_y)
        frame = Region(x_bounds[0], y_bounds[0], x_bounds[-1], y_bounds[-1])

    if len(x_bounds) - 1 != len(names):
        raise LayoutMismatch(
            f"detected {len(x_bounds) - 1} columns, expected {len(names)}")
    strips = len(y_bounds) - 1
    if strips == row_count + 1:
        header = Region(frame.x1, y_bounds[0], frame.x2, y_bounds[1])
        y_bounds = y_bounds[1:]
    elif strips == row_count:
        header = None
    else:
        raise LayoutMismatch(f"detected {strips} row strips, expected "
                             f"{row_count} rows plus an optional header")

    columns = [(name, Region(x_bounds[ii], frame.y1, x_bounds[ii + 1], frame.y2))
               for ii, name in enumerate(names)]
    rows = [(label, Region(frame.x1, y_bounds[ii], frame.x2, y_bounds[ii + 1]))
            for ii, label in enumerate(labels)]
    logger.debug("table %s: %d columns, %d rows, ruled=%s/%s", frame,
                 len(columns), len(rows), ruled_cols, ruled_rows)
    return TableLayout(frame, columns, rows, header,
                       borderless=not (ruled_cols and ruled_rows))
