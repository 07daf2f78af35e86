# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
Deterministic table and chart renderer whose layouts are exact by construction.

Table style ranges, frozen for the parsing acceptance corpus:
    background   light colors, luminance >= 215 (rows stripes 12 darker)
    text, rules  dark colors, luminance < 100
    border       on (1 px rules around every cell) or off
    margin       4..20 px between the table and the image edge
    padding      5..10 px between cell text and the cell edge
    scale        1 or 2 (glyphs are 5x7 times the scale)

A ruled table places rule i at x_i; column i spans [x_i, x_{i+1}] over the
full table height, header included. Borderless tables keep the same grid
with the rules left out, so adjacent cell texts are at least 2 * padding + 1
px apart.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..errors import SpecError
from ..imaging.raster import Color, Raster, Region, WHITE, union_all
from ..structure.layout import (ChartKind, ChartLayout, TableLayout,
                                default_row_labels, disambiguate_names,
                                subplot_id)
from .glyphs import draw_text, text_height, text_width

logger = logging.getLogger(__name__)

BLACK = Color(0, 0, 0)
BACKGROUNDS = (WHITE, Color(250, 248, 240), Color(240, 248, 255),
               Color(245, 245, 220), Color(248, 240, 250), Color(235, 245, 235))
INKS = (BLACK, Color(40, 40, 40), Color(20, 20, 80), Color(80, 20, 20))
BAR_COLORS = (Color(31, 119, 180), Color(214, 39, 40), Color(44, 160, 44),
              Color(148, 103, 189), Color(255, 127, 14))
MARGIN_RANGE = (4, 20)
PADDING_RANGE = (5, 10)
SCALES = (1, 2)
STRIPE_DELTA = 12

COLUMN_WORDS = ("Team", "Country", "City", "Name", "Year", "Score", "Wins",
                "Losses", "Points", "Rank", "Goals", "Club", "Player",
                "Height", "Region", "Total", "Games", "Seats", "Votes")
VALUE_WORDS = ("Belgium", "France", "Spain", "Italy", "Norway", "Peru",
               "Chile", "Kenya", "Japan", "Canada", "Brazil", "Egypt",
               "Poland", "Ghana", "Nepal", "Oslo", "Lima", "Rome", "Paris",
               "Madrid", "Tokyo", "Cairo", "Accra", "Quito", "Alpha", "Delta",
               "Omega", "Sigma", "United Kingdom", "New Zealand")


def _luma(color):
    return (299 * color.r + 587 * color.g + 114 * color.b + 500) // 1000


def _darken(color, delta):
    return Color(max(0, color.r - delta), max(0, color.g - delta),
                 max(0, color.b - delta))


def _canvas(width, height, color):
    arr = np.empty((height, width, 4), dtype=np.uint8)
    arr[:] = (color.r, color.g, color.b, 255)
    return arr


def _fill(arr, region, color):
    arr[region.y1:region.y2 + 1, region.x1:region.x2 + 1] = \
        (color.r, color.g, color.b, 255)


def _text_region(x, y, text, scale):
    return Region(x, y, x + text_width(text, scale) - 1, y + text_height(scale) - 1)


@dataclass(frozen=True)
class TableStyle:
    background: Color = WHITE
    border: bool = True
    margin: int = 10
    padding: int = 6
    scale: int = 1
    stripes: bool = False
    text_color: Color = BLACK
    rule_color: Color = BLACK

    def validate(self):
        if not MARGIN_RANGE[0] <= self.margin <= MARGIN_RANGE[1]:
            raise SpecError(f"margin {self.margin} outside {MARGIN_RANGE}")
        if not PADDING_RANGE[0] <= self.padding <= PADDING_RANGE[1]:
            raise SpecError(f"padding {self.padding} outside {PADDING_RANGE}")
        if self.scale not in SCALES:
            raise SpecError(f"scale must be one of {SCALES}")
        if _luma(self.background) < 215:
            raise SpecError("background is too dark")
        if _luma(self.text_color) >= 100 or _luma(self.rule_color) >= 100:
            raise SpecError("text and rules must be dark")

    @classmethod
    def random(cls, rng, border=None):
        return cls(background=BACKGROUNDS[rng.randint(len(BACKGROUNDS))],
                   border=bool(rng.randint(2)) if border is None else border,
                   margin=int(rng.randint(MARGIN_RANGE[0], MARGIN_RANGE[1] + 1)),
                   padding=int(rng.randint(PADDING_RANGE[0], PADDING_RANGE[1] + 1)),
                   scale=int(SCALES[rng.randint(len(SCALES))]),
                   stripes=bool(rng.randint(2)),
                   text_color=INKS[rng.randint(len(INKS))],
                   rule_color=INKS[rng.randint(len(INKS))])


@dataclass(frozen=True)
class TableSpec:
    column_names: Tuple[str, ...]
    cells: Tuple[Tuple[str, ...], ...]
    style: TableStyle = field(default_factory=TableStyle)
    seed: int = 0
    row_labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "column_names", tuple(self.column_names))
        object.__setattr__(self, "cells", tuple(tuple(row) for row in self.cells))
        if self.row_labels is not None:
            object.__setattr__(self, "row_labels", tuple(self.row_labels))

    def validate(self):
        if not self.column_names:
            raise SpecError("a table needs at least one column")
        if not self.cells:
            raise SpecError("a table needs at least one row")
        for ii, row in enumerate(self.cells):
            if len(row) != len(self.column_names):
                raise SpecError(f"row {ii} has {len(row)} cells, "
                                f"expected {len(self.column_names)}")
        if self.row_labels is not None and len(self.row_labels) != len(self.cells):
            raise SpecError("row_labels must have one entry per row")
        self.style.validate()

    @property
    def row_count(self):
        return len(self.cells)


@dataclass(frozen=True)
class ChartSpec:
    kind: ChartKind
    labels: Tuple[str, ...]
    values: Tuple[float, ...]
    seed: int = 0
    title: str = ""
    grid: Tuple[int, int] = (1, 1)
    panels: Tuple[Tuple[float, ...], ...] = ()
    panel_titles: Tuple[str, ...] = ()
    background: Color = WHITE
    bar_color: Color = BAR_COLORS[0]

    def __post_init__(self):
        object.__setattr__(self, "kind", ChartKind(self.kind))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "grid", tuple(self.grid))
        object.__setattr__(self, "panels",
                           tuple(tuple(float(v) for v in p) for p in self.panels))
        object.__setattr__(self, "panel_titles", tuple(self.panel_titles))

    def panel_series(self):
        """Values per subplot, in row-major grid order."""
        count = self.grid[0] * self.grid[1]
        return list(self.panels) if self.panels else [self.values] * count

    def validate(self):
        if not self.labels or len(self.labels) != len(self.values):
            raise SpecError("need one value per label and at least one label")
        series = [self.values]
        if self.kind == ChartKind.MULTI_SUBPLOT:
            rows, cols = self.grid
            if rows < 1 or cols < 1:
                raise SpecError("grid dimensions must be >= 1")
            series = self.panel_series()
            if len(series) != rows * cols:
                raise SpecError(f"{len(series)} panels for a {rows}x{cols} grid")
            if self.panel_titles and len(self.panel_titles) != rows * cols:
                raise SpecError("panel_titles must have one entry per panel")
            if any(not 1 <= len(p) <= PANEL_MAX_BARS for p in series):
                raise SpecError(f"panels hold 1..{PANEL_MAX_BARS} bars")
        for values in series:
            if not all(np.isfinite(v) and v >= 0 for v in values):
                raise SpecError("bar values must be finite and non-negative")
        if _luma(self.background) < 215 or _luma(self.bar_color) >= 200:
            raise SpecError("light background and dark bars required")


@dataclass(frozen=True)
class GroundTruth:
    layout: object
    text_regions: Tuple[Tuple[str, Region], ...] = ()
    mark_regions: Tuple[Tuple[str, Region], ...] = ()

    def to_dict(self):
        return {
            "layout": self.layout.to_dict(),
            "text_regions": [[name, reg.to_dict()] for name, reg in self.text_regions],
            "mark_regions": [[name, reg.to_dict()] for name, reg in self.mark_regions],
        }


def render_table(spec):
    spec.validate()
    style = spec.style
    scale, pad, margin = style.scale, style.padding, style.margin
    header = list(spec.column_names)
    grid = [header] + [list(row) for row in spec.cells]
    col_widths = [max(text_width(row[ii], scale) for row in grid) + 2 * pad
                  for ii in range(len(header))]
    row_height = text_height(scale) + 2 * pad

    xs = [margin]
    for width in col_widths:
        xs.append(xs[-1] + width + 1)
    ys = [margin]
    for _ in grid:
        ys.append(ys[-1] + row_height + 1)
    width, height = xs[-1] + 1 + margin, ys[-1] + 1 + margin
    arr = _canvas(width, height, style.background)

    if style.stripes:
        stripe = _darken(style.background, STRIPE_DELTA)
        for jj in range(2, len(grid), 2):
            _fill(arr, Region(xs[0], ys[jj], xs[-1], ys[jj + 1]), stripe)
    if style.border:
        for x in xs:
            _fill(arr, Region(x, ys[0], x, ys[-1]), style.rule_color)
        for y in ys:
            _fill(arr, Region(xs[0], y, xs[-1], y), style.rule_color)

    text_regions = []
    for jj, row in enumerate(grid):
        for ii, text in enumerate(row):
            if not text:
                continue
            x, y = xs[ii] + 1 + pad, ys[jj] + 1 + pad
            draw_text(arr, x, y, text, style.text_color, scale)
            text_regions.append((f"r{jj}c{ii}", _text_region(x, y, text, scale)))

    labels = list(spec.row_labels) if spec.row_labels is not None \
        else default_row_labels(spec.row_count)
    table = Region(xs[0], ys[0], xs[-1], ys[-1])
    columns = [(name, Region(xs[ii], ys[0], xs[ii + 1], ys[-1]))
               for ii, name in enumerate(disambiguate_names(header))]
    rows = [(label, Region(xs[0], ys[jj + 1], xs[-1], ys[jj + 2]))
            for jj, label in enumerate(labels)]
    layout = TableLayout(table, columns, rows, Region(xs[0], ys[0], xs[-1], ys[1]),
                         borderless=not style.border)
    return Raster.from_array(arr), GroundTruth(layout, tuple(text_regions))


# chart geometry
CHART_MARGIN = 10
AXIS_GAP = 4
VBAR_PLOT_HEIGHT = 120
HBAR_PLOT_WIDTH = 160
PANEL_WIDTH = 140
PANEL_HEIGHT = 100
PANEL_GAP = 16
PANEL_MAX_BARS = 20
BAR_SHARE = 0.6


def _bar_length(value, vmax, extent):
    return int(round(value / vmax * extent)) if vmax > 0 else 0


def _title_block(spec):
    """(top y of the chart body, title region or None)."""
    if not spec.title:
        return CHART_MARGIN, None
    region = _text_region(CHART_MARGIN, CHART_MARGIN, spec.title, 1)
    return region.y2 + 1 + 2 * AXIS_GAP, region


def _render_vbar(spec):
    th = text_height()
    top, title = _title_block(spec)
    slot = max(max(text_width(label) for label in spec.labels) + 6, 16)
    bar_w = max(2, int(slot * BAR_SHARE))
    ax0 = CHART_MARGIN
    ay0 = top + VBAR_PLOT_HEIGHT + AXIS_GAP
    xr = ax0 + AXIS_GAP + len(spec.labels) * slot + AXIS_GAP
    width = xr + CHART_MARGIN + 1
    if title is not None:
        width = max(width, title.x2 + CHART_MARGIN + 1)
    height = ay0 + AXIS_GAP + th + CHART_MARGIN + 1
    arr = _canvas(width, height, spec.background)

    vmax = max(spec.values)
    entries, marks = [], []
    for ii, (label, value) in enumerate(zip(spec.labels, spec.values)):
        sx = ax0 + AXIS_GAP + ii * slot
        bx = sx + (slot - bar_w) // 2
        length = _bar_length(value, vmax, VBAR_PLOT_HEIGHT)
        if length > 0:
            bar = Region(bx, ay0 - length, bx + bar_w - 1, ay0 - 1)
            _fill(arr, bar, spec.bar_color)
            marks.append((label, bar))
        lx = sx + (slot - text_width(label)) // 2
        draw_text(arr, lx, ay0 + AXIS_GAP, label, BLACK)
        entries.append((label, _text_region(lx, ay0 + AXIS_GAP, label, 1)))
    axes = Region(ax0, top, xr, ay0)
    _fill(arr, Region(ax0, top, ax0, ay0), BLACK)
    _fill(arr, Region(ax0, ay0, xr, ay0), BLACK)
    return arr, axes, entries, marks, title


def _render_hbar(spec):
    th = text_height()
    top, title = _title_block(spec)
    label_w = max(text_width(label) for label in spec.labels)
    slot = max(th + 6, 14)
    bar_h = max(2, int(slot * BAR_SHARE))
    ax0 = CHART_MARGIN + label_w + AXIS_GAP + 2
    yb = top + AXIS_GAP + len(spec.labels) * slot + AXIS_GAP
    xr = ax0 + HBAR_PLOT_WIDTH + AXIS_GAP
    width = xr + CHART_MARGIN + 1
    if title is not None:
        width = max(width, title.x2 + CHART_MARGIN + 1)
    height = yb + CHART_MARGIN + 1
    arr = _canvas(width, height, spec.background)

    vmax = max(spec.values)
    entries, marks = [], []
    for ii, (label, value) in enumerate(zip(spec.labels, spec.values)):
        sy = top + AXIS_GAP + ii * slot
        by = sy + (slot - bar_h) // 2
        length = _bar_length(value, vmax, HBAR_PLOT_WIDTH)
        if length > 0:
            bar = Region(ax0 + 1, by, ax0 + length, by + bar_h - 1)
            _fill(arr, bar, spec.bar_color)
            marks.append((label, bar))
        lx = ax0 - AXIS_GAP - text_width(label)
        ly = sy + (slot - th) // 2
        draw_text(arr, lx, ly, label, BLACK)
        entries.append((label, _text_region(lx, ly, label, 1)))
    axes = Region(ax0, top, xr, yb)
    _fill(arr, Region(ax0, top, ax0, yb), BLACK)
    _fill(arr, Region(ax0, yb, xr, yb), BLACK)
    return arr, axes, entries, marks, title


def _render_panels(spec):
    th = text_height()
    top, title = _title_block(spec)
    rows, cols = spec.grid
    cell_h = th + AXIS_GAP + PANEL_HEIGHT + PANEL_GAP
    width = CHART_MARGIN + cols * (PANEL_WIDTH + PANEL_GAP) - PANEL_GAP + CHART_MARGIN + 1
    if title is not None:
        width = max(width, title.x2 + CHART_MARGIN + 1)
    height = top + rows * cell_h - PANEL_GAP + CHART_MARGIN + 1
    arr = _canvas(width, height, spec.background)

    frames, texts, marks = [], [], []
    titles = spec.panel_titles or tuple(f"Panel {ii + 1}" for ii in range(rows * cols))
    for index, values in enumerate(spec.panel_series()):
        ri, ci = divmod(index, cols)
        px = CHART_MARGIN + ci * (PANEL_WIDTH + PANEL_GAP)
        ty = top + ri * cell_h
        py = ty + th + AXIS_GAP
        frame = Region(px, py, px + PANEL_WIDTH - 1, py + PANEL_HEIGHT - 1)
        draw_text(arr, px, ty, titles[index], BLACK)
        texts.append((titles[index], _text_region(px, ty, titles[index], 1)))
        for reg in (Region(px, py, frame.x2, py), Region(px, frame.y2, frame.x2, frame.y2),
                    Region(px, py, px, frame.y2), Region(frame.x2, py, frame.x2, frame.y2)):
            _fill(arr, reg, BLACK)
        slot = (PANEL_WIDTH - 8) // len(values)
        bar_w = max(1, int(slot * BAR_SHARE))
        vmax = max(values)
        for ii, value in enumerate(values):
            length = _bar_length(value, vmax, PANEL_HEIGHT - 20)
            if length > 0:
                bx = px + 4 + ii * slot + (slot - bar_w) // 2
                bar = Region(bx, frame.y2 - length, bx + bar_w - 1, frame.y2 - 1)
                _fill(arr, bar, spec.bar_color)
                marks.append((f"{subplot_id(index + 1)}:{ii}", bar))
        frames.append((subplot_id(index + 1), frame))
    return arr, frames, texts, marks, title


def render_chart(spec):
    spec.validate()
    if spec.kind == ChartKind.MULTI_SUBPLOT:
        arr, frames, texts, marks, title = _render_panels(spec)
        layout = ChartLayout(spec.kind, union_all(reg for _, reg in frames),
                             subplots=frames)
    else:
        render = _render_vbar if spec.kind == ChartKind.VERTICAL_BAR else _render_hbar
        arr, axes, entries, marks, title = render(spec)
        plot = axes.union(union_all(reg for _, reg in entries))
        layout = ChartLayout(spec.kind, plot, axis_entries=entries)
        texts = entries
    if title is not None:
        draw_text(arr, title.x1, title.y1, spec.title, BLACK)
        texts = [("title", title)] + list(texts)
    return Raster.from_array(arr), GroundTruth(layout, tuple(texts), tuple(marks))


def render(spec):
    return render_table(spec) if isinstance(spec, TableSpec) else render_chart(spec)


def _words(rng, pool, count):
    picks = rng.choice(len(pool), size=count, replace=count > len(pool))
    return [pool[ii] for ii in picks]


def random_table_spec(seed, border=None, max_columns=5, max_rows=8):
    """Word first column, integer or word cells elsewhere, at least two columns."""
    rng = np.random.RandomState(seed)
    ncols = int(rng.randint(2, max_columns + 1))
    nrows = int(rng.randint(2, max_rows + 1))
    names = _words(rng, COLUMN_WORDS, ncols)
    numeric = [False] + [bool(rng.randint(4)) for _ in range(ncols - 1)]
    cells = []
    for _ in range(nrows):
        cells.append(tuple(str(int(rng.randint(0, 1000))) if numeric[ii]
                           else _words(rng, VALUE_WORDS, 1)[0]
                           for ii in range(ncols)))
    return TableSpec(tuple(names), tuple(cells), TableStyle.random(rng, border), seed)


def random_chart_spec(seed, kind):
    rng = np.random.RandomState(seed)
    kind = ChartKind(kind)
    count = int(rng.randint(3, 8))
    labels = sorted(set(_words(rng, VALUE_WORDS[:28], count)),
                    key=lambda w: VALUE_WORDS.index(w))
    values = [float(rng.randint(1, 100)) for _ in labels]
    title = "Share by country" if rng.randint(2) else ""
    background = BACKGROUNDS[rng.randint(len(BACKGROUNDS))]
    bar_color = BAR_COLORS[rng.randint(len(BAR_COLORS))]
    if kind != ChartKind.MULTI_SUBPLOT:
        return ChartSpec(kind, labels, values, seed, title,
                         background=background, bar_color=bar_color)
    grid = (int(rng.randint(1, 3)), int(rng.randint(2, 4)))
    panels = [tuple(float(rng.randint(1, 100)) for _ in labels)
              for _ in range(grid[0] * grid[1])]
    return ChartSpec(kind, labels, values, seed, title, grid, tuple(panels),
                     background=background, bar_color=bar_color)


def make_corpus(n, seed, kinds=("table",)):
    """`n` rendered (raster, ground truth, spec) triples; a pure function of its arguments."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.RandomState(seed)
    corpus = []
    for ii in range(n):
        kind = kinds[ii % len(kinds)]
        sub_seed = int(rng.randint(2 ** 31 - 1))
        spec = random_table_spec(sub_seed) if kind == "table" \
            else random_chart_spec(sub_seed, kind)
        raster, truth = render(spec)
        corpus.append((raster, truth, spec))
    logger.debug("rendered %d fixtures from seed %d", n, seed)
    return corpus
