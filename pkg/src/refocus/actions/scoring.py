# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""Answer scoring: normalized exact match, relaxed numeric match, or a model judge."""
import logging
import re
from dataclasses import dataclass, field
from typing import Optional

from ..agent.loop import CHART_SOURCES
from ..errors import JudgeUnavailable
from ..llm.client import ChatMessage, ChatRequest

logger = logging.getLogger(__name__)

MODES = ("exact_normalized", "numeric_relaxed", "external_judge")

_THOUSANDS_RE = re.compile(r"(?<=\d),(?=\d{3}(?!\d))")
_NUMBER_RE = re.compile(r"[-+]?(\d+\.?\d*|\.\d+)(e[-+]?\d+)?")
_VERDICTS = {
    "entailed": "entailed", "true": "entailed", "yes": "entailed",
    "supported": "entailed", "refuted": "refuted", "false": "refuted",
    "no": "refuted",
}

JUDGE_PROMPT = """You grade answers to questions about tables and charts.
Question: {question}
Gold answer: {gold}
Predicted answer: {prediction}
Reply with YES if the predicted answer means the same as the gold answer, otherwise reply with NO."""


@dataclass(frozen=True)
class ScoreConfig:
    mode: str = "exact_normalized"
    tolerance: float = 0.05
    verdicts: bool = False
    judge: Optional[object] = field(default=None, compare=False, repr=False)
    judge_model: str = "gpt-4o-2024-05-13"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown score mode {self.mode!r}")
        if self.mode == "numeric_relaxed" and not 0 < self.tolerance < 1:
            raise ValueError("tolerance must be in (0, 1)")


def normalize(text):
    text = _THOUSANDS_RE.sub("", str(text))
    text = text.replace("%", "").replace("$", "")
    return " ".join(text.lower().split())


def parse_number(text):
    text = normalize(text)
    if not _NUMBER_RE.fullmatch(text):
        return None
    return float(text)


def _verdict(text):
    text = normalize(text).rstrip(".")
    return _VERDICTS.get(text, text)


def score(prediction, gold, cfg=None, question=""):
    """True when `prediction` counts as `gold`; a missing prediction never does."""
    cfg = cfg or ScoreConfig()
    if prediction is None:
        return False
    if cfg.mode == "external_judge":
        return _judge(prediction, gold, cfg, question)
    if cfg.verdicts:
        return _verdict(prediction) == _verdict(gold)
    if cfg.mode == "numeric_relaxed":
        pred, ref = parse_number(prediction), parse_number(gold)
        if pred is not None and ref is not None:
            if ref == 0:
                return pred == 0
            return abs(pred - ref) <= cfg.tolerance * abs(ref)
    return normalize(prediction) == normalize(gold)


def _judge(prediction, gold, cfg, question):
    if cfg.judge is None:
        raise JudgeUnavailable("external_judge scoring needs a chat client")
    prompt = JUDGE_PROMPT.format(question=question, gold=gold, prediction=prediction)
    request = ChatRequest((ChatMessage.user(prompt),), 0., 8, cfg.judge_model)
    reply = cfg.judge.complete(request)
    logger.debug("judge said %r for %r vs %r", reply, prediction, gold)
    return reply.strip().upper().startswith("YES")


def default_score_config(source, tolerance=0.05):
    if source in CHART_SOURCES or source == "synth":
        return ScoreConfig("numeric_relaxed", tolerance)
    if source == "vtabfact":
        return ScoreConfig("exact_normalized", verdicts=True)
    return ScoreConfig("exact_normalized")


def score_config_for(cfg, source, judge=None):
    """ScoreConfig for one source under the run config."""
    if cfg.LLM.JUDGE or cfg.EVAL.SCORE_MODE == "external_judge":
        return ScoreConfig("external_judge", judge=judge, judge_model=cfg.LLM.MODEL_NAME)
    if cfg.EVAL.SCORE_MODE == "auto":
        return default_score_config(source, cfg.EVAL.TOLERANCE)
    return ScoreConfig(cfg.EVAL.SCORE_MODE, cfg.EVAL.TOLERANCE,
                       verdicts=source == "vtabfact")


def score_episode(episode, cfg, judge=None):
    task = episode.task
    if task.gold_answer is None or not episode.answered:
        return False
    return score(episode.final_answer, task.gold_answer,
                 score_config_for(cfg, task.source, judge), task.question)
