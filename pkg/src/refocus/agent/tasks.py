# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

import logging

from ..config import get_config
from ..errors import SchemaError
from ..imaging.raster import read_png
from ..structure import (infer_chart_layout, infer_table_layout,
                         layout_from_dict, subplot_layout)
from ..structure.layout import ChartKind
from .loop import Task

logger = logging.getLogger(__name__)


def layout_for_item(item, raster, cfg):
    """The item's own layout, or one parsed from the image using its hints."""
    if item.layout is not None:
        return layout_from_dict(item.layout)
    parse = cfg.PARSE
    if item.columns is not None:
        if item.row_count is None:
            raise SchemaError(f"{item.id}: table items need row_count")
        return infer_table_layout(raster, item.columns, item.row_count, item.row_labels,
                                  threshold=parse.BINARIZE_THRESHOLD,
                                  merge_gap=parse.MERGE_GAP,
                                  min_kernel=parse.MIN_LINE_KERNEL,
                                  kernel_divisor=parse.LINE_KERNEL_DIVISOR,
                                  gap_min=parse.GAP_MIN)
    if item.chart_kind == ChartKind.MULTI_SUBPLOT:
        return subplot_layout(raster, parse.SUBPLOT_K, parse.BINARIZE_THRESHOLD,
                              parse.DEDUP_IOU)
    if item.chart_kind is not None:
        return infer_chart_layout(raster, item.chart_kind, item.axis_regions(),
                                  parse.BINARIZE_THRESHOLD)
    raise SchemaError(f"{item.id}: no layout and no structure hints")


def task_from_item(item, cfg=None):
    cfg = cfg or get_config()
    raster = read_png(item.image)
    layout = layout_for_item(item, raster, cfg)
    logger.debug("task %s: %s layout", item.id, type(layout).__name__)
    return Task(item.id, raster, item.question, layout, item.answer, item.source)
