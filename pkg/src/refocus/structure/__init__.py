# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

from .binary import (BinaryMask, Contour, LineSegment, Orientation, binarize,
                     extract_line_segments, find_contours, morph_open_lines)
from .chart import (bar_regions_from_axis, detect_subplot_candidates,
                    infer_chart_layout, subplot_layout)
from .layout import (ChartKind, ChartLayout, TableLayout, TargetClass,
                     layout_from_dict, layout_from_json, layout_to_json,
                     prompt_regions)
from .table import infer_table_layout
