# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
The edit-and-reason loop: prompt, read the model's thought and pseudocode,
apply the edits to the current image, show the result, repeat until the
model answers or the turn budget runs out.
"""
import json
import logging
import re
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import List, Optional

from ..config import get_config
from ..errors import (RefocusError, ReplayMiss, TransportError,
                      TurnLimitExceeded)
from ..imaging.raster import Raster
from ..llm.client import ChatMessage, ChatRequest, ImagePart
from ..structure.layout import ChartLayout, TableLayout
from ..tools.edit_tools import METHODS, EditRecord, ToolStyle, apply_tool
from ..tools.toolcall import ANSWER_RE, ToolCall, extract_calls, validate_calls
from . import prompts

logger = logging.getLogger(__name__)

TABLE_SOURCES = ("vwtq", "vwtq_syn", "vtabfact")
CHART_SOURCES = ("charxiv", "h_bar", "v_bar")
SOURCES = TABLE_SOURCES + CHART_SOURCES + ("synth",)

FINAL_ANSWER_RE = re.compile(r"FINAL ANSWER\s*:")
TERMINATE = "TERMINATE"


def extract_final_answer(text):
    """
    Text after the last "FINAL ANSWER:" (else the last "ANSWER:"), cut at
    "TERMINATE", with trailing punctuation removed. None when no marker.
    """
    matches = list(FINAL_ANSWER_RE.finditer(text)) or list(ANSWER_RE.finditer(text))
    if not matches:
        return None
    tail = text[matches[-1].end():]
    cut = tail.find(TERMINATE)
    if cut >= 0:
        tail = tail[:cut]
    return tail.strip().rstrip(".,;:!").strip()


@dataclass
class Task:
    id: str
    image: Raster
    question: str
    layout: object
    gold_answer: Optional[str] = None
    source: str = "synth"

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValueError(f"unknown source tag {self.source!r}")
        if self.source in TABLE_SOURCES and not isinstance(self.layout, TableLayout):
            raise ValueError(f"{self.source} tasks need a table layout")
        if self.source in CHART_SOURCES and not isinstance(self.layout, ChartLayout):
            raise ValueError(f"{self.source} tasks need a chart layout")


@dataclass
class Turn:
    assistant_text: str
    kind: str  # answer | edit | repair | noop
    calls: List[ToolCall] = field(default_factory=list)
    edit_records: List[EditRecord] = field(default_factory=list)
    observation: Optional[Raster] = None
    diagnostics: List[str] = field(default_factory=list)

    @property
    def affected_regions(self):
        return [reg for record in self.edit_records for reg in record.affected_regions]


@dataclass
class Episode:
    task: Task
    max_turns: int = 5
    turns: List[Turn] = field(default_factory=list)
    state: str = "running"  # running | answered | failed
    final_answer: Optional[str] = None
    raw_answer_text: Optional[str] = None
    reason: Optional[str] = None
    messages: List[ChatMessage] = field(default_factory=list, repr=False)
    style: ToolStyle = field(default_factory=ToolStyle, repr=False)

    @property
    def task_id(self):
        return self.task.id

    @property
    def source(self):
        return self.task.source

    @property
    def running(self):
        return self.state == "running"

    @property
    def answered(self):
        return self.state == "answered"

    @property
    def edited(self):
        return any(turn.edit_records for turn in self.turns)

    @property
    def current_image(self):
        for turn in reversed(self.turns):
            if turn.observation is not None:
                return turn.observation
        return self.task.image

    def images(self):
        """Every distinct raster the episode references, by digest."""
        out = {self.task.image.digest(): self.task.image}
        for turn in self.turns:
            if turn.observation is not None:
                out[turn.observation.digest()] = turn.observation
        return out

    def fail(self, reason):
        self.state = "failed"
        self.reason = reason
        logger.info("episode %s failed: %s", self.task_id, reason)

    def to_dict(self):
        def ref(raster):
            return None if raster is None else f"{raster.digest()}.png"
        return {
            "task_id": self.task.id,
            "source": self.task.source,
            "question": self.task.question,
            "gold_answer": self.task.gold_answer,
            "image": ref(self.task.image),
            "turns": [{
                "kind": turn.kind,
                "assistant_text": turn.assistant_text,
                "calls": [call.to_dict() for call in turn.calls],
                "edit_records": [rec.to_dict() for rec in turn.edit_records],
                "observation": ref(turn.observation),
                "diagnostics": list(turn.diagnostics),
            } for turn in self.turns],
            "status": {"state": self.state, "final_answer": self.final_answer,
                       "raw_answer_text": self.raw_answer_text,
                       "reason": self.reason},
            "edited": self.edited,
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)


def build_initial_prompt(task, send_layout=True, hint=None, methods=METHODS):
    return [
        ChatMessage.system(prompts.system_prompt(task.layout, methods)),
        ChatMessage.user(ImagePart(task.image),
                         prompts.request_prompt(task.question, task.layout,
                                                send_layout, hint)),
    ]


def start_episode(task, max_turns=5, style=None, send_layout=True, hint=None):
    style = style or ToolStyle()
    return Episode(task, max_turns=max_turns, style=style,
                   messages=build_initial_prompt(task, send_layout, hint, style.methods))


def _apply_calls(episode, calls):
    image = episode.current_image
    records = []
    for call in calls:
        image, record = apply_tool(image, episode.task.layout, call.tool,
                                   call.targets, episode.style)
        records.append(record)
    return image, records


def step(episode, assistant_text):
    """Consumes one assistant message; mutates and returns `episode`."""
    if not episode.running:
        raise ValueError(f"episode {episode.task_id} is {episode.state}")
    if len(episode.turns) >= episode.max_turns:
        raise TurnLimitExceeded(f"{episode.task_id}: {episode.max_turns} turns used")
    episode.messages.append(ChatMessage.assistant(assistant_text))

    if ANSWER_RE.search(assistant_text):
        if not extract_final_answer(assistant_text):
            episode.turns.append(Turn(assistant_text, "noop",
                                      diagnostics=["the answer marker was followed by no answer"]))
            episode.messages.append(ChatMessage.user(
                prompts.REASK_PROMPT.format(question=episode.task.question)))
            return episode
        episode.turns.append(Turn(assistant_text, "answer"))
        episode.state = "answered"
        episode.final_answer = extract_final_answer(assistant_text)
        episode.raw_answer_text = assistant_text
        return episode

    report = extract_calls(assistant_text)
    diagnostics = [d.message for d in report.diagnostics]
    error = None
    if report.errors:
        error = report.error_text()
    elif report.calls:
        try:
            calls = validate_calls(report, episode.task.layout, episode.style.methods)
            image, records = _apply_calls(episode, calls)
        except RefocusError as err:
            error = f"Error: {err}"
            diagnostics.append(str(err))

    question = episode.task.question
    if error is not None:
        repaired_before = bool(episode.turns) and episode.turns[-1].kind == "repair"
        if repaired_before:
            episode.turns.append(Turn(assistant_text, "noop", diagnostics=diagnostics))
            episode.messages.append(ChatMessage.user(prompts.NO_ACTION_PROMPT))
        else:
            episode.turns.append(Turn(assistant_text, "repair", diagnostics=diagnostics))
            episode.messages.append(ChatMessage.user(
                prompts.REPAIR_PROMPT.format(errors=error)))
    elif report.calls:
        episode.turns.append(Turn(assistant_text, "edit", calls, records, image,
                                  diagnostics))
        episode.messages.append(ChatMessage.user(
            prompts.OBSERVATION_PROMPT, ImagePart(image),
            prompts.REASK_PROMPT.format(question=question)))
    else:
        episode.turns.append(Turn(assistant_text, "noop", diagnostics=diagnostics))
        episode.messages.append(ChatMessage.user(prompts.NO_ACTION_PROMPT))
    return episode


def run(task, client, cfg=None, hint=None):
    """Runs one episode to an answer or a failure; never raises for transport trouble."""
    cfg = cfg or get_config()
    episode = start_episode(task, cfg.AGENT.MAX_TURNS, ToolStyle.from_config(cfg),
                            cfg.AGENT.SEND_LAYOUT, hint)
    while episode.running:
        if len(episode.turns) >= episode.max_turns:
            episode.fail("max_turns")
            break
        request = ChatRequest(tuple(episode.messages), cfg.LLM.TEMPERATURE,
                              cfg.LLM.MAX_OUTPUT_TOKENS, cfg.LLM.MODEL_NAME)
        try:
            text = client.complete(request)
        except TransportError as err:
            logger.warning("%s: %s", task.id, err)
            episode.fail("transport")
            break
        except ReplayMiss as err:
            logger.warning("%s: %s", task.id, err)
            episode.fail("replay_miss")
            break
        step(episode, text)
    logger.debug("episode %s: %s after %d turns", task.id, episode.state,
                 len(episode.turns))
    return episode


def edit_rate(episodes):
    """Fraction of edited episodes per source tag; tags without episodes are absent."""
    totals = Counter()
    edited = defaultdict(int)
    for episode in episodes:
        totals[episode.source] += 1
        edited[episode.source] += int(episode.edited)
    return {tag: edited[tag] / count for tag, count in totals.items()}
