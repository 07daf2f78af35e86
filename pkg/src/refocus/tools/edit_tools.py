# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
The editing toolbox: highlight, keep-list mask and draw-box over the named
regions of a layout.

Surface names are what prompts advertise and what model pseudocode calls;
renaming one breaks previously recorded transcripts.
"""
import logging
from collections import namedtuple
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from ..errors import EmptyTargets, UnknownTarget
from ..imaging.raster import (Color, Region, composite_overlay_many,
                              draw_rect_outline, fill_opaque, restore_regions)
from ..structure.layout import TableLayout, TargetClass

logger = logging.getLogger(__name__)


class ToolId(str, Enum):
    HIGHLIGHT_COLUMNS = "highlight_columns"
    MASK_COLUMNS_KEEP = "mask_columns_keep"
    DRAW_COLUMNS = "draw_columns"
    HIGHLIGHT_ROWS = "highlight_rows"
    MASK_ROWS_KEEP = "mask_rows_keep"
    DRAW_ROWS = "draw_rows"
    HIGHLIGHT_BARS_X = "highlight_bars_x"
    MASK_BARS_X_KEEP = "mask_bars_x_keep"
    DRAW_BARS_X = "draw_bars_x"
    HIGHLIGHT_BARS_Y = "highlight_bars_y"
    MASK_BARS_Y_KEEP = "mask_bars_y_keep"
    DRAW_BARS_Y = "draw_bars_y"
    HIGHLIGHT_SUBPLOTS = "highlight_subplots"
    MASK_SUBPLOTS_KEEP = "mask_subplots_keep"
    DRAW_SUBPLOTS = "draw_subplots"

    @property
    def method(self):
        return self.value.split("_")[0]


ToolSpec = namedtuple("ToolSpec", ["surface_name", "tool", "target_class", "doc"])

_SUBJECTS = [
    (TargetClass.COLUMNS, "columns", "columns", "the columns"),
    (TargetClass.ROWS, "rows", "rows", "the rows"),
    (TargetClass.BARS_X, "x_values", "bars_x", "the bars at the given x-axis values"),
    (TargetClass.BARS_Y, "y_values", "bars_y", "the bars at the given y-axis values"),
    (TargetClass.SUBPLOTS, "subplots", "subplots", "the subplots"),
]

_METHOD_DOCS = {
    "highlight": "overlays a light red color on {}",
    "mask": "places a white mask over everything except {}",
    "draw": "draws a solid red bounding box around {}",
}


METHODS = ("highlight", "mask", "draw")


def _build_registry():
    specs = []
    for target_class, surface_part, id_part, what in _SUBJECTS:
        for method in METHODS:
            suffix = "_keep" if method == "mask" else ""
            tool = ToolId(f"{method}_{id_part}{suffix}")
            doc = _METHOD_DOCS[method].format(what) + " to focus on."
            specs.append(ToolSpec(f"focus_on_{surface_part}_with_{method}",
                                  tool, target_class, doc))
    return tuple(specs)


_REGISTRY = _build_registry()
_BY_SURFACE = {spec.surface_name: spec for spec in _REGISTRY}
_BY_TOOL = {spec.tool: spec for spec in _REGISTRY}


def tool_registry():
    return list(_REGISTRY)


def tool_by_surface_name(name):
    return _BY_SURFACE.get(name)


def tool_spec(tool):
    return _BY_TOOL[ToolId(tool)]


def tools_for_layout(layout, methods=METHODS):
    """Registry entries that apply to `layout`, limited to the enabled method families."""
    classes = layout.target_classes()
    return [spec for spec in _REGISTRY
            if spec.target_class in classes and spec.tool.method in methods]


@dataclass(frozen=True)
class ToolStyle:
    highlight: Color = Color(255, 0, 0, 50)
    mask: Color = Color(255, 255, 255)
    draw: Color = Color(255, 0, 0)
    thickness: int = 3
    methods: Tuple[str, ...] = METHODS

    @classmethod
    def from_config(cls, cfg):
        return cls(highlight=Color.from_seq(cfg.TOOLS.HIGHLIGHT_COLOR),
                   mask=Color.from_seq(cfg.TOOLS.MASK_COLOR),
                   draw=Color.from_seq(cfg.TOOLS.DRAW_COLOR),
                   thickness=cfg.TOOLS.DRAW_THICKNESS,
                   methods=tuple(cfg.TOOLS.METHODS))


@dataclass(frozen=True)
class EditRecord:
    tool: ToolId
    targets: Tuple[str, ...]
    affected_regions: Tuple[Region, ...]
    input_hash: str
    output_hash: str

    def to_dict(self):
        return {
            "tool": self.tool.value,
            "targets": list(self.targets),
            "affected_regions": [reg.to_dict() for reg in self.affected_regions],
            "input_hash": self.input_hash,
            "output_hash": self.output_hash,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(ToolId(data["tool"]), tuple(data["targets"]),
                   tuple(Region.from_dict(r) for r in data["affected_regions"]),
                   data["input_hash"], data["output_hash"])


def apply_tool(raster, layout, tool, targets, style=None):
    """Applies one tool to the named targets; returns the new image and its record."""
    style = style or ToolStyle()
    spec = tool_spec(tool)
    named = layout.named_regions(spec.target_class)
    targets = list(targets)
    if not targets:
        raise EmptyTargets(f"{spec.surface_name} needs at least one target")
    for target in targets:
        if target not in named:
            raise UnknownTarget(target, named.keys())
    focus = [named[target] for target in targets]

    method = spec.tool.method
    if method == "highlight":
        edited = composite_overlay_many(raster, focus, style.highlight)
    elif method == "draw":
        edited = raster
        for reg in focus:
            edited = draw_rect_outline(edited, reg, style.draw, style.thickness)
    else:
        edited = _mask_keep(raster, layout, named, set(targets), focus, style.mask)

    record = EditRecord(spec.tool, tuple(targets), tuple(focus),
                        raster.digest(), edited.digest())
    logger.debug("%s on %s", spec.surface_name, targets)
    return edited, record


def _mask_keep(raster, layout, named, keep, focus, color):
    complement = [reg for name, reg in named.items() if name not in keep]
    protected = list(focus)
    if isinstance(layout, TableLayout) and layout.header_region is not None:
        protected.append(layout.header_region)
    edited = raster
    for reg in complement:
        if reg.clamp(raster.width, raster.height) is not None:
            edited = fill_opaque(edited, reg, color)
    if edited is raster:
        return raster
    # kept regions may share boundary pixels with masked neighbours
    return restore_regions(edited, raster, protected)


def replay_edits(raster, layout, records, style=None):
    """Re-applies stored edit records; raises ValueError when a digest differs."""
    current = raster
    for record in records:
        if current.digest() != record.input_hash:
            raise ValueError(f"input digest mismatch before {record.tool.value}")
        current, redone = apply_tool(current, layout, record.tool,
                                     record.targets, style)
        if redone.output_hash != record.output_hash:
            raise ValueError(f"output digest mismatch after {record.tool.value}")
    return current
