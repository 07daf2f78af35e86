# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

import pytest

from refocus.actions import (ScoreConfig, default_score_config, normalize, score,
                             score_config_for, score_episode)
from refocus.actions.scoring import parse_number
from refocus.agent import run
from refocus.errors import JudgeUnavailable
from refocus.llm import ChatClient, ScriptedClient


class CannedJudge(ChatClient):

    def __init__(self, reply):
        self.reply = reply
        self.prompts = []

    def complete(self, request):
        self.prompts.append(request.messages[-1].text)
        return self.reply


@pytest.mark.parametrize("text, expected", [
    ("  Quick-Step ", "quick-step"),
    ("1,450", "1450"),
    ("12,34", "12,34"),
    ("45%", "45"),
    ("$3.5", "3.5"),
    ("United   Kingdom", "united kingdom"),
])
def test_normalize(text, expected):
    assert normalize(text) == expected


def test_parse_number():
    assert parse_number("1,450") == 1450.
    assert parse_number("-2.5e3") == -2500.
    assert parse_number(".5") == .5
    assert parse_number("about 3") is None


@pytest.mark.parametrize("prediction, gold, expected", [
    ("47", "47", True),
    ("Belgium", "belgium", True),
    ("46", "47", False),
    (None, "47", False),
])
def test_exact_match(prediction, gold, expected):
    assert score(prediction, gold) is expected


@pytest.mark.parametrize("prediction, gold, expected", [
    ("24.75", "25", True),
    ("26.25", "25", True),
    ("26.3", "25", False),
    ("0", "0", True),
    ("0.01", "0", False),
    ("1,000", "1000", True),
    ("Peru", "peru", True),
])
def test_relaxed_numeric(prediction, gold, expected):
    assert score(prediction, gold, ScoreConfig("numeric_relaxed", 0.05)) is expected


def test_verdicts():
    cfg = ScoreConfig(verdicts=True)
    assert score("Yes.", "entailed", cfg)
    assert score("false", "Refuted", cfg)
    assert not score("true", "refuted", cfg)


def test_external_judge():
    judge = CannedJudge("YES, same meaning")
    cfg = ScoreConfig("external_judge", judge=judge)
    assert score("forty-seven", "47", cfg, question="Total wins?")
    assert "Total wins?" in judge.prompts[0]
    assert not score("x", "47", ScoreConfig("external_judge", judge=CannedJudge("no")))
    with pytest.raises(JudgeUnavailable):
        score("x", "47", ScoreConfig("external_judge"))


def test_invalid_score_config():
    with pytest.raises(ValueError):
        ScoreConfig("fuzzy")
    with pytest.raises(ValueError):
        ScoreConfig("numeric_relaxed", tolerance=1.5)


def test_default_modes_per_source():
    assert default_score_config("charxiv").mode == "numeric_relaxed"
    assert default_score_config("synth").mode == "numeric_relaxed"
    assert default_score_config("vtabfact").verdicts
    assert default_score_config("vwtq") == ScoreConfig("exact_normalized")


def test_score_config_follows_run_config(cfg):
    assert score_config_for(cfg, "h_bar").mode == "numeric_relaxed"
    cfg.EVAL.SCORE_MODE = "exact_normalized"
    assert score_config_for(cfg, "h_bar").mode == "exact_normalized"
    assert score_config_for(cfg, "vtabfact").verdicts
    cfg.LLM.JUDGE = True
    judge = CannedJudge("YES")
    assert score_config_for(cfg, "vwtq", judge).judge is judge


def test_score_episode(team_task, team_script_client, cfg):
    episode = run(team_task, team_script_client, cfg)
    assert score_episode(episode, cfg)
    wrong = run(team_task, ScriptedClient(
        {team_task.question: {"turns": ["ANSWER: 40"], "hinted": []}}), cfg)
    assert not score_episode(wrong, cfg)
    cfg.AGENT.MAX_TURNS = 1
    unanswered = run(team_task, ScriptedClient(
        {team_task.question: {"turns": ["thinking"], "hinted": []}}), cfg)
    assert not unanswered.answered
    assert not score_episode(unanswered, cfg)


def test_spec_examples():
    relaxed = ScoreConfig("numeric_relaxed", 0.05)
    assert score("24.75", "24.75")
    assert score("16", "16", relaxed)
    assert score("99", "100", relaxed)
    # case and spacing of the prediction never matter for exact matching
    assert score("  QUICK-step\t", "Quick-Step") == score("Quick-Step", "Quick-Step")
