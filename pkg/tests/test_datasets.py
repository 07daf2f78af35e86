# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

import json
import os

import pytest
from pydantic import ValidationError

from refocus.agent import layout_for_item, task_from_item
from refocus.datasets import DatasetItem, load_dataset
from refocus.errors import SchemaError
from refocus.structure import layout_from_dict
from refocus.synth import export_fixtures


def _write_lines(path, rows):
    path.write_text("".join((row if isinstance(row, str) else json.dumps(row)) + "\n"
                            for row in rows))
    return str(path)


def test_item_aliases():
    item = DatasetItem.model_validate({"id": 7, "images": ["a.png", "b.png"],
                                       "query": "How many?", "answer": 2.0,
                                       "source": "v_bar", "unused": 1})
    assert item.id == "7"
    assert item.image == "a.png"
    assert item.question == "How many?"
    assert item.answer == "2"
    assert DatasetItem.model_validate({"id": "x", "image": "a.png", "question": "q",
                                       "answer": 3, "source": "synth"}).answer == "3"


@pytest.mark.parametrize("data", [
    {"id": "x", "image": "a.png", "question": "q", "source": "wtq"},
    {"id": "x", "image": "a.png", "source": "synth"},
    {"id": "x", "image": "a.png", "question": "q", "source": "synth", "columns": []},
    {"id": "x", "image": "a.png", "question": "q", "source": "synth", "row_count": 0},
    {"id": "x", "image": "a.png", "question": "q", "source": "synth",
     "row_count": 2, "row_labels": ["a"]},
    {"id": "x", "image": "a.png", "question": "q", "source": "synth",
     "chart_kind": "pie"},
])
def test_invalid_items(data):
    with pytest.raises(ValidationError):
        DatasetItem.model_validate(data)


def test_load_dataset_resolves_images(tmp_path, team_png):
    path = _write_lines(tmp_path / "data.jsonl", [
        {"id": "a", "image": os.path.basename(team_png), "question": "q?"},
        "",
        {"id": "b", "image": os.path.basename(team_png), "question": "q?",
         "source": "vtabfact", "answer": "True"},
    ])
    items = load_dataset(path, "vwtq")
    assert [item.id for item in items] == ["a", "b"]
    assert [item.source for item in items] == ["vwtq", "vtabfact"]
    assert items[0].image == os.path.abspath(team_png)


@pytest.mark.parametrize("rows, line", [
    ([{"id": "a", "image": "standings.png", "question": "q"}, "{not json"], 2),
    (["[1, 2]"], 1),
    ([{"id": "a", "image": "missing.png", "question": "q"}], 1),
    (["", {"id": "a", "image": "standings.png"}], 2),
])
def test_load_dataset_names_the_bad_line(tmp_path, team_png, rows, line):
    path = _write_lines(tmp_path / "data.jsonl", rows)
    with pytest.raises(SchemaError) as info:
        load_dataset(path, "synth")
    assert info.value.line == line


def test_table_task_from_hints(cfg, team_png, team_raster, team_layout):
    item = DatasetItem(id="t", image=team_png, question="q?", source="vwtq",
                       columns=["Team", "Country", "Wins", "Points"], row_count=6)
    task = task_from_item(item, cfg)
    assert task.layout == team_layout
    assert task.source == "vwtq"
    assert task.image.digest() == team_raster.digest()


def test_table_hints_need_row_count(cfg, team_png, team_raster):
    item = DatasetItem(id="t", image=team_png, question="q?", source="vwtq",
                       columns=["Team"])
    with pytest.raises(SchemaError):
        layout_for_item(item, team_raster, cfg)
    bare = DatasetItem(id="t", image=team_png, question="q?", source="synth")
    with pytest.raises(SchemaError):
        layout_for_item(bare, team_raster, cfg)


def test_serialized_layout_is_used_as_is(cfg, team_png, team_raster, team_layout):
    item = DatasetItem(id="t", image=team_png, question="q?", source="synth",
                       layout=team_layout.to_dict(), columns=["ignored"], row_count=1)
    assert layout_for_item(item, team_raster, cfg) == team_layout


@pytest.mark.parametrize("kind", ["vertical_bar", "horizontal_bar", "multi_subplot"])
def test_exported_charts_load_as_tasks(tmp_path, cfg, kind):
    path = export_fixtures(str(tmp_path), 3, 5, (kind,))
    items = load_dataset(path, "synth")
    assert len(items) == 3
    for item in items:
        task = task_from_item(item, cfg)
        fixture_id = item.id.rsplit("_q", 1)[0]
        truth = json.loads((tmp_path / "truth" / f"{fixture_id}.json").read_text())
        expected = layout_from_dict(truth["layout"])
        if kind == "multi_subplot":
            # smaller ink components fill the remaining candidate slots
            assert {reg for _, reg in expected.subplots} <= \
                {reg for _, reg in task.layout.subplots}
        else:
            assert task.layout == expected
        assert task.gold_answer == item.answer


def test_chart_item_with_query_alias(tmp_path, team_png):
    path = _write_lines(tmp_path / "charts.jsonl", [
        {"id": "f1", "images": [os.path.basename(team_png)],
         "query": "As of 2021, how many championship titles had Ferrari won?",
         "answer": "16", "source": "h_bar"}])
    (item,) = load_dataset(path, "charxiv")
    assert item.source == "h_bar" and item.answer == "16"
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    assert load_dataset(str(empty), "synth") == []
