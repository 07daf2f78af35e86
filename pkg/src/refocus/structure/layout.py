# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
Named-region maps for tables and charts.

The canonical JSON form maps every name to {"x1", "y1", "x2", "y2"}; the
same form is embedded in prompts and in collected focus areas.
"""
import json
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from ..errors import SchemaError, TargetClassMismatch
from ..imaging.raster import Region


class TargetClass(str, Enum):
    COLUMNS = "columns"
    ROWS = "rows"
    BARS_X = "bars_x"
    BARS_Y = "bars_y"
    SUBPLOTS = "subplots"


class ChartKind(str, Enum):
    HORIZONTAL_BAR = "horizontal_bar"
    VERTICAL_BAR = "vertical_bar"
    MULTI_SUBPLOT = "multi_subplot"


def disambiguate_names(names):
    """Suffixes repeated names with their ordinal: Wins, Wins#2, Wins#3."""
    seen = Counter()
    out = []
    for name in names:
        seen[name] += 1
        out.append(name if seen[name] == 1 else f"{name}#{seen[name]}")
    return out


def default_row_labels(count):
    return [f"row_{ii}" for ii in range(1, count + 1)]


def subplot_id(index):
    return f"subplot_{index}"


@dataclass(frozen=True)
class TableLayout:
    table_region: Region
    columns: Tuple[Tuple[str, Region], ...]
    rows: Tuple[Tuple[str, Region], ...]
    header_region: Optional[Region] = None
    borderless: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(tuple(c) for c in self.columns))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        _check_sorted(self.columns, lambda reg: reg.x1, "columns")
        _check_sorted(self.rows, lambda reg: reg.y1, "rows")
        for name, reg in self.columns + self.rows:
            if not self.table_region.contains(reg):
                raise ValueError(f"region {name!r} lies outside the table")
        names = [name for name, _ in self.columns]
        if len(set(names)) != len(names):
            raise ValueError("column names must be unique")

    def target_classes(self):
        return (TargetClass.COLUMNS, TargetClass.ROWS)

    @property
    def column_names(self):
        return [name for name, _ in self.columns]

    @property
    def row_labels(self):
        return [label for label, _ in self.rows]

    def named_regions(self, target_class):
        if target_class == TargetClass.COLUMNS:
            return OrderedDict(self.columns)
        if target_class == TargetClass.ROWS:
            return OrderedDict(self.rows)
        raise TargetClassMismatch(f"a table layout has no {target_class.value}")

    def to_dict(self):
        return {
            "type": "table",
            "table_region": self.table_region.to_dict(),
            "header_region": None if self.header_region is None
            else self.header_region.to_dict(),
            "columns": {name: reg.to_dict() for name, reg in self.columns},
            "rows": {label: reg.to_dict() for label, reg in self.rows},
            "borderless": self.borderless,
        }


@dataclass(frozen=True)
class ChartLayout:
    kind: ChartKind
    plot_region: Region
    axis_entries: Tuple[Tuple[str, Region], ...] = ()
    subplots: Tuple[Tuple[str, Region], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", ChartKind(self.kind))
        object.__setattr__(self, "axis_entries",
                           tuple(tuple(e) for e in self.axis_entries))
        object.__setattr__(self, "subplots", tuple(tuple(s) for s in self.subplots))
        is_bar = self.kind != ChartKind.MULTI_SUBPLOT
        if is_bar != bool(self.axis_entries):
            raise ValueError("axis entries are required for, and only for, bar charts")
        if (not is_bar) != bool(self.subplots):
            raise ValueError("subplots are required for, and only for, multi-subplot charts")

    def target_classes(self):
        if self.kind == ChartKind.VERTICAL_BAR:
            return (TargetClass.BARS_X,)
        if self.kind == ChartKind.HORIZONTAL_BAR:
            return (TargetClass.BARS_Y,)
        return (TargetClass.SUBPLOTS,)

    @property
    def axis_labels(self):
        return [label for label, _ in self.axis_entries]

    def named_regions(self, target_class):
        if target_class not in self.target_classes():
            raise TargetClassMismatch(
                f"a {self.kind.value} chart has no {target_class.value}")
        if target_class == TargetClass.SUBPLOTS:
            return OrderedDict(self.subplots)
        from .chart import bar_regions_from_axis
        labels = self.axis_labels
        return OrderedDict(zip(labels, bar_regions_from_axis(self, labels)))

    def to_dict(self):
        return {
            "type": "chart",
            "kind": self.kind.value,
            "plot_region": self.plot_region.to_dict(),
            "axis_entries": {label: reg.to_dict() for label, reg in self.axis_entries},
            "subplots": {sid: reg.to_dict() for sid, reg in self.subplots},
        }


def _check_sorted(named, key, what):
    keys = [key(reg) for _, reg in named]
    if any(b <= a for a, b in zip(keys, keys[1:])):
        raise ValueError(f"{what} must be strictly increasing in position")


def layout_to_json(layout, indent=None):
    return json.dumps(layout.to_dict(), indent=indent)


def layout_from_dict(data):
    try:
        if data["type"] == "table":
            header = data.get("header_region")
            return TableLayout(
                table_region=Region.from_dict(data["table_region"]),
                columns=[(k, Region.from_dict(v)) for k, v in data["columns"].items()],
                rows=[(k, Region.from_dict(v)) for k, v in data["rows"].items()],
                header_region=None if header is None else Region.from_dict(header),
                borderless=bool(data.get("borderless", False)))
        if data["type"] == "chart":
            return ChartLayout(
                kind=ChartKind(data["kind"]),
                plot_region=Region.from_dict(data["plot_region"]),
                axis_entries=[(k, Region.from_dict(v))
                              for k, v in data.get("axis_entries", {}).items()],
                subplots=[(k, Region.from_dict(v))
                          for k, v in data.get("subplots", {}).items()])
    except (KeyError, TypeError, ValueError) as err:
        raise SchemaError(f"invalid layout: {err}") from err
    raise SchemaError(f"unknown layout type {data.get('type')!r}")


def layout_from_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise SchemaError(f"layout is not JSON: {err}") from err
    return layout_from_dict(data)


def prompt_regions(layout):
    """The name -> bbox maps a model sees, keyed by target class."""
    out = OrderedDict()
    if isinstance(layout, TableLayout):
        out["columns"] = {name: reg.to_dict() for name, reg in layout.columns}
        out["rows"] = {label: reg.to_dict() for label, reg in layout.rows}
    elif layout.kind == ChartKind.MULTI_SUBPLOT:
        out["subplots"] = {sid: reg.to_dict() for sid, reg in layout.subplots}
    else:
        axis = "x_values" if layout.kind == ChartKind.VERTICAL_BAR else "y_values"
        out[axis] = {label: reg.to_dict() for label, reg in layout.axis_entries}
    return out
