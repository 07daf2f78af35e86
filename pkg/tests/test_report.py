# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

import json

import pytest

from refocus.actions import report
from refocus.agent import Task
from refocus.agent.loop import Episode, Turn


class FakeWriter:

    def __init__(self):
        self.scalars = {}
        self.texts = {}

    def add_scalar(self, tag, value, step):
        self.scalars[tag] = value

    def add_text(self, tag, text, step):
        self.texts[tag] = text


def _episode(task, turns, state="answered", reason=None):
    episode = Episode(task)
    episode.turns = turns
    episode.state = state
    episode.reason = reason
    return episode


@pytest.fixture
def episodes(team_raster, team_layout):
    def task(source):
        return Task(source, team_raster, "Q?", team_layout, "1", source)
    edit = Turn("x", "edit", edit_records=["record"])
    answer = Turn("ANSWER: 1", "answer")
    return [
        _episode(task("vwtq"), [edit, answer]),
        _episode(task("vwtq"), [answer]),
        _episode(task("vwtq"), [edit, edit], "failed", "max_turns"),
        _episode(task("vtabfact"), [], "failed", "transport"),
    ]


def test_report_per_source(episodes):
    run = report(episodes, [True, False, False, False], meta={"model": "m"})
    assert list(run.per_source) == ["vtabfact", "vwtq"]
    vwtq = run.per_source["vwtq"].to_dict()
    assert vwtq["count"] == 3 and vwtq["correct"] == 1
    assert vwtq["accuracy"] == pytest.approx(1 / 3)
    assert vwtq["edit_rate"] == pytest.approx(2 / 3)
    assert vwtq["mean_turns"] == pytest.approx(5 / 3)
    assert vwtq["failure_counts"] == {"max_turns": 1}
    overall = run.overall.to_dict()
    assert overall["count"] == 4
    assert overall["failures"] == {"max_turns": .25, "transport": .25}
    assert run.accuracy == .25
    assert run.failed == 2


def test_report_serializes(episodes):
    run = report(episodes, [True] * 4, meta={"git_sha": None})
    data = json.loads(run.to_json())
    assert data["schema_version"] == 1
    assert data["meta"] == {"git_sha": None}
    lines = run.to_text().splitlines()
    assert lines[0].split() == ["source", "n", "acc", "edit", "turns", "failures"]
    assert lines[-1].startswith("all")
    assert "transport=1" in lines[2]


def test_report_logs_scalars(episodes):
    writer = FakeWriter()
    report(episodes, [True, True, False, False]).log_to(writer)
    assert writer.scalars["all/accuracy"] == .5
    assert writer.scalars["vtabfact/edit_rate"] == 0.
    assert "vwtq" in writer.texts["report"]


def test_empty_and_misaligned():
    empty = report([], [])
    assert empty.overall.to_dict()["accuracy"] == 0.
    assert empty.per_source == {}
    with pytest.raises(ValueError):
        report([], [True])
