# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

import json
import os

import numpy as np
import pytest

from refocus.errors import SpecError
from refocus.structure import layout_from_dict
from refocus.synth import (TEAM_STANDINGS_ANSWER, ChartSpec, TableSpec, TableStyle,
                           export_fixtures, make_corpus, random_chart_spec,
                           render_chart, render_table, render_text, synth_questions,
                           team_standings_spec, text_height, text_width)
from refocus.imaging.raster import Color


def test_text_metrics():
    assert text_width("") == 0
    assert text_width("AB") == 11
    assert text_width("A B") == 14
    assert text_width("A", scale=2) == 10
    assert text_height(2) == 14
    assert render_text("I").shape == (7, 5)
    # lowercase draws with the uppercase glyph, unknown characters as '?'
    assert np.array_equal(render_text("a"), render_text("A"))
    assert np.array_equal(render_text("é"), render_text("?"))


def test_corpus_is_a_pure_function_of_its_arguments():
    kinds = ("table", "vertical_bar", "multi_subplot")
    first = [raster.digest() for raster, _, _ in make_corpus(6, 3, kinds)]
    second = [raster.digest() for raster, _, _ in make_corpus(6, 3, kinds)]
    assert first == second
    assert first != [raster.digest() for raster, _, _ in make_corpus(6, 4, kinds)]
    with pytest.raises(ValueError):
        make_corpus(0, 3)


def test_team_table_ground_truth(team_table):
    raster, truth = team_table
    layout = truth.layout
    assert layout.column_names == ["Team", "Country", "Wins", "Points"]
    assert len(layout.rows) == 6
    assert not layout.borderless
    assert layout.header_region.y1 == layout.table_region.y1
    assert raster.width == layout.table_region.x2 + 1 + 10
    # every cell's text sits inside its column and its row
    columns = [reg for _, reg in layout.columns]
    rows = [layout.header_region] + [reg for _, reg in layout.rows]
    for name, text in truth.text_regions:
        jj, ii = (int(part) for part in name[1:].split("c"))
        assert columns[ii].contains(text)
        assert rows[jj].contains(text)


def test_text_is_painted_in_the_ink_color():
    spec = TableSpec(("A",), (("B",),), TableStyle(text_color=Color(20, 20, 80)))
    raster, truth = render_table(spec)
    _, region = truth.text_regions[0]
    crop = raster.array()[region.y1:region.y2 + 1, region.x1:region.x2 + 1, :3]
    colors = {tuple(int(v) for v in px) for px in crop.reshape(-1, 3)}
    assert (20, 20, 80) in colors
    assert colors <= {(20, 20, 80), (255, 255, 255)}


def test_repeated_column_names_are_suffixed():
    _, truth = render_table(TableSpec(("Wins", "Wins"), (("1", "2"),)))
    assert truth.layout.column_names == ["Wins", "Wins#2"]


@pytest.mark.parametrize("spec", [
    TableSpec(("A", "B"), (("1",),)),
    TableSpec(("A",), ()),
    TableSpec(("A",), (("1",),), TableStyle(padding=4)),
    TableSpec(("A",), (("1",),), TableStyle(margin=21)),
    TableSpec(("A",), (("1",),), TableStyle(scale=3)),
    TableSpec(("A",), (("1",),), TableStyle(background=Color(90, 90, 90))),
    TableSpec(("A",), (("1",),), TableStyle(text_color=Color(200, 200, 200))),
    TableSpec(("A",), (("1",),), row_labels=("x", "y")),
])
def test_invalid_table_specs(spec):
    with pytest.raises(SpecError):
        render_table(spec)


@pytest.mark.parametrize("spec", [
    ChartSpec("vertical_bar", ["A", "B"], [1.]),
    ChartSpec("vertical_bar", [], []),
    ChartSpec("horizontal_bar", ["A"], [-1.]),
    ChartSpec("horizontal_bar", ["A"], [float("nan")]),
    ChartSpec("vertical_bar", ["A"], [1.], bar_color=Color(250, 250, 250)),
    ChartSpec("multi_subplot", ["A"], [1.], grid=(2, 2), panels=((1.,),)),
    ChartSpec("multi_subplot", ["A"], [1.], grid=(1, 2), panel_titles=("one",)),
    ChartSpec("multi_subplot", ["A"], [1.], grid=(0, 2)),
])
def test_invalid_chart_specs(spec):
    with pytest.raises(SpecError):
        render_chart(spec)


def test_vertical_bars_scale_with_their_values():
    raster, truth = render_chart(ChartSpec("vertical_bar", ["A", "B", "C"], [10, 20, 40]))
    heights = {label: bar.height for label, bar in truth.mark_regions}
    assert heights == {"A": 30, "B": 60, "C": 120}
    for _, bar in truth.mark_regions:
        assert truth.layout.plot_region.contains(bar)
        assert raster.pixel(bar.x1, bar.y1)[:3] == (31, 119, 180)


def test_zero_bars_are_not_drawn():
    _, truth = render_chart(ChartSpec("horizontal_bar", ["A", "B"], [0, 5]))
    assert [label for label, _ in truth.mark_regions] == ["B"]
    assert truth.layout.axis_labels == ["A", "B"]


def test_panels_hold_their_bars():
    spec = random_chart_spec(7, "multi_subplot")
    _, truth = render_chart(spec)
    frames = dict(truth.layout.subplots)
    assert len(frames) == spec.grid[0] * spec.grid[1]
    for name, bar in truth.mark_regions:
        assert frames[name.split(":")[0]].contains(bar)


def test_table_questions(team_table):
    questions = synth_questions(team_standings_spec())
    assert len(questions) == 18
    assert questions[0] == ("What is the Country of the Team Quick-Step?", "Belgium")
    assert ("What is the Wins of the Team Alpecin?", "8") in questions
    assert TEAM_STANDINGS_ANSWER == str(25 + 14 + 8)


def test_chart_questions():
    spec = ChartSpec("vertical_bar", ["A", "B"], [1.5, 2])
    assert synth_questions(spec) == [("What is the value for A?", "1.5"),
                                     ("What is the value for B?", "2")]
    panels = ChartSpec("multi_subplot", ["A", "B"], [1, 1], grid=(1, 2),
                       panels=((1, 5), (9, 2)))
    _, truth = render_chart(panels)
    assert synth_questions(panels, truth) == [
        ("Which label has the tallest bar in Panel 1?", "B"),
        ("Which label has the tallest bar in Panel 2?", "A")]


def test_export_fixtures(tmp_path):
    path = export_fixtures(str(tmp_path), 4, 9, ("table", "horizontal_bar"),
                           questions_per_image=2)
    assert path == os.path.join(str(tmp_path), "dataset.jsonl")
    items = [json.loads(line) for line in open(path)]
    assert len(items) == 8
    assert len({item["id"] for item in items}) == 8
    for item in items:
        assert (tmp_path / item["image"]).exists()
        assert item["source"] == "synth"
        if "columns" in item:
            assert item["row_count"] >= 2
        else:
            assert item["chart_kind"] == "horizontal_bar"
            assert item["axis_entries"]
    truth_files = sorted(os.listdir(tmp_path / "truth"))
    assert len(truth_files) == 4
    truth = json.loads((tmp_path / "truth" / truth_files[0]).read_text())
    assert layout_from_dict(truth["layout"]).column_names
    again = tmp_path / "again"
    export_fixtures(str(again), 4, 9, ("table", "horizontal_bar"), questions_per_image=2)
    assert (again / "dataset.jsonl").read_text() == open(path).read()


def test_single_cell_table():
    raster, truth = render_table(TableSpec(("A",), (("1",),)))
    assert len(truth.layout.columns) == len(truth.layout.rows) == 1
    (_, column), = truth.layout.columns
    assert column == truth.layout.table_region
    assert raster.digest() == render_table(TableSpec(("A",), (("1",),)))[0].digest()


def test_horizontal_entries_are_sorted_top_down():
    labels = ["Peru", "Chile", "Spain", "Italy", "Norway", "France", "Japan"]
    _, truth = render_chart(ChartSpec("horizontal_bar", labels, range(1, 8)))
    entries = truth.layout.axis_entries
    assert [label for label, _ in entries] == labels
    tops = [reg.y1 for _, reg in entries]
    assert tops == sorted(tops) and len(set(tops)) == 7


def test_subplot_frames_are_disjoint():
    _, truth = render_chart(ChartSpec("multi_subplot", ["A", "B"], [1, 2], grid=(2, 2)))
    frames = [reg for _, reg in truth.layout.subplots]
    assert len(frames) == 4
    for ii, a in enumerate(frames):
        for b in frames[ii + 1:]:
            assert a.iou(b) == 0.
