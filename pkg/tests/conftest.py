# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

import os

import pytest

from refocus.config import get_config
from refocus.imaging.raster import write_png
from refocus.llm import ScriptedClient
from refocus.synth import (TEAM_STANDINGS_ANSWER, TEAM_STANDINGS_QUESTION,
                           render_table, team_standings_spec)

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
TEAM_SCRIPT = os.path.join(FIXTURE_DIR, "team_standings_script.json")


@pytest.fixture
def cfg():
    cfg = get_config()
    cfg.AGENT.NUM_WORKERS = 2
    return cfg


@pytest.fixture(scope="session")
def team_table():
    """(raster, ground truth) of the rendered standings table."""
    return render_table(team_standings_spec())


@pytest.fixture
def team_raster(team_table):
    return team_table[0]


@pytest.fixture
def team_layout(team_table):
    return team_table[1].layout


@pytest.fixture
def team_png(tmp_path, team_raster):
    path = str(tmp_path / "standings.png")
    write_png(team_raster, path)
    return path


@pytest.fixture
def team_script_client():
    return ScriptedClient.from_file(TEAM_SCRIPT)


@pytest.fixture
def team_task(team_raster, team_layout):
    from refocus.agent import Task
    return Task("standings", team_raster, TEAM_STANDINGS_QUESTION, team_layout,
                TEAM_STANDINGS_ANSWER, "synth")
