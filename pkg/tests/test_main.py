# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

import json
import os

import pytest

from refocus.actions import read_records
from refocus.imaging.raster import Raster, read_png, write_png
from refocus.main import main
from refocus.structure import layout_from_json, layout_to_json
from refocus.synth import TEAM_STANDINGS_QUESTION

from conftest import TEAM_SCRIPT

COLUMNS = ["--columns", "Team", "Country", "Wins", "Points", "--rows", "6"]


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for var in ("REFOCUS_API_BASE", "REFOCUS_MODEL"):
        monkeypatch.delenv(var, raising=False)


@pytest.fixture
def dataset(tmp_path, team_png, team_layout):
    def write(questions):
        rows = [{"id": f"q{ii}", "image": os.path.basename(team_png), "question": q,
                 "answer": "47", "layout": team_layout.to_dict()}
                for ii, q in enumerate(questions)]
        path = tmp_path / "data.jsonl"
        path.write_text("".join(json.dumps(row) + "\n" for row in rows))
        return str(path)
    return write


def test_detect_prints_the_layout(capsys, team_png, team_layout):
    assert main(["detect", team_png] + COLUMNS) == 0
    assert layout_from_json(capsys.readouterr().out) == team_layout


def test_detect_failure_is_fatal(capsys, tmp_path):
    blank = str(tmp_path / "blank.png")
    write_png(Raster.blank(50, 50), blank)
    assert main(["detect", blank, "--columns", "a", "b", "--rows", "2"]) == 2
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "DetectionFailed" in captured.err


def test_edit_writes_the_image(capsys, tmp_path, team_png, team_layout):
    layout = tmp_path / "layout.json"
    layout.write_text(layout_to_json(team_layout))
    out = str(tmp_path / "edited.png")
    assert main(["edit", team_png, str(layout), "focus_on_columns_with_highlight",
                 "Wins", "-o", out]) == 0
    assert capsys.readouterr().out.strip() == out
    wins = dict(team_layout.columns)["Wins"]
    assert read_png(out).pixel(wins.x1 + 2, wins.y1 + 2) == (255, 205, 205, 255)
    assert main(["edit", team_png, str(layout), "focus_on_rows_with_draw",
                 "row_9", "-o", out]) == 2
    assert "UnknownTarget" in capsys.readouterr().err


def test_run_with_script(capsys, tmp_path, team_png):
    argv = ["run", team_png, "--question", TEAM_STANDINGS_QUESTION, "--answer", "47",
            "--script", TEAM_SCRIPT, "--save"] + COLUMNS + \
        ["--opts", "OUTPUT_DIR", str(tmp_path), "EXP_NAME", "single"]
    assert main(argv) == 0
    assert capsys.readouterr().out.strip() == "FINAL ANSWER: 47"
    saved = os.listdir(tmp_path / "single" / "episodes")
    assert saved == ["cli.json"]


def test_run_without_answer_is_partial(capsys, team_png):
    argv = ["run", team_png, "--question", "Who came last?", "--script", TEAM_SCRIPT] + \
        COLUMNS
    assert main(argv) == 1
    assert capsys.readouterr().out == ""


def test_bench_reports(capsys, tmp_path, dataset):
    path = dataset([TEAM_STANDINGS_QUESTION, "Who came last?"])
    argv = ["bench", path, "--script", TEAM_SCRIPT,
            "--opts", "OUTPUT_DIR", str(tmp_path / "out"), "EXP_NAME", "bench"]
    assert main(argv) == 1
    result = json.loads(capsys.readouterr().out)
    assert result["overall"]["count"] == 2
    assert result["overall"]["correct"] == 1
    assert result["overall"]["failure_counts"] == {"replay_miss": 1}
    assert result["per_source"]["synth"]["edit_rate"] == .5
    logdir = tmp_path / "out" / "bench"
    assert json.loads((logdir / "report.json").read_text()) == result
    assert (logdir / "config.yaml").exists()
    assert sorted(os.listdir(logdir / "episodes")) == ["q0.json", "q1.json"]


def test_bench_all_answered(capsys, tmp_path, dataset):
    path = dataset([TEAM_STANDINGS_QUESTION])
    argv = ["bench", path, "--script", TEAM_SCRIPT,
            "--opts", "OUTPUT_DIR", str(tmp_path / "out")]
    assert main(argv) == 0
    assert json.loads(capsys.readouterr().out)["overall"]["accuracy"] == 1.


def test_collect_writes_records(capsys, tmp_path, dataset):
    path = dataset([TEAM_STANDINGS_QUESTION])
    argv = ["collect", path, "--script", TEAM_SCRIPT,
            "--opts", "OUTPUT_DIR", str(tmp_path / "out"), "EXP_NAME", "vcot"]
    assert main(argv) == 0
    output = capsys.readouterr().out.strip()
    assert output == str(tmp_path / "out" / "vcot" / "vcot.jsonl")
    records = read_records(output)
    assert len(records) == 1
    assert records[0].answer == "47"
    assert len(records[0].focus_areas) == 3


def test_render_synth(capsys, tmp_path):
    out = str(tmp_path / "synth")
    assert main(["render-synth", out, "--num", "2", "--seed", "3",
                 "--kinds", "table", "vertical_bar"]) == 0
    path = capsys.readouterr().out.strip()
    assert path == os.path.join(out, "dataset.jsonl")
    assert len(open(path).read().splitlines()) == 2


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["edit", "a.png", "layout.json", "zoom_in", "Wins", "-o", "b.png"])
    assert info.value.code == 2


def test_detect_subplots(capsys, tmp_path):
    from refocus.synth import ChartSpec, render_chart
    raster, truth = render_chart(ChartSpec("multi_subplot", ["A", "B"], [1, 2], grid=(2, 2)))
    path = str(tmp_path / "panels.png")
    write_png(raster, path)
    assert main(["detect", path, "--chart", "multi_subplot"]) == 0
    layout = layout_from_json(capsys.readouterr().out)
    assert len(layout.subplots) >= 4
    assert {reg for _, reg in truth.layout.subplots} <= {reg for _, reg in layout.subplots}


def test_collect_question_answer_format(capsys, tmp_path, dataset):
    path = dataset([TEAM_STANDINGS_QUESTION])
    argv = ["collect", path, "--script", TEAM_SCRIPT, "--format", "qa",
            "--opts", "OUTPUT_DIR", str(tmp_path / "out"), "EXP_NAME", "qa"]
    assert main(argv) == 0
    output = capsys.readouterr().out.strip()
    assert output == str(tmp_path / "out" / "qa" / "qa.jsonl")
    (row,) = [json.loads(line) for line in open(output)]
    assert row == {"id": "q0", "query": TEAM_STANDINGS_QUESTION, "answer": "47",
                   "source": "synth", "images": [row["images"][0]]}
