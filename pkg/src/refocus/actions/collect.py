# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
Visual chain-of-thought collection. Each item is run once; a wrong answer
gets a second run with the gold answer as a hint; items still wrong are
dropped. Kept episodes are reduced to one record with the field names of
the published VCoT JSONL format; the same records can be written as plain
chain-of-thought or question-answer rows for comparison training sets.
"""
import json
import logging
import os
from typing import List

from pydantic import BaseModel, ValidationError, model_validator

from ..agent.runner import run_batch
from ..agent.tasks import task_from_item
from ..errors import RefocusError, SchemaError
from ..imaging.raster import Region, write_png
from ..utils.io_utils import append_jsonl
from .scoring import score_episode

logger = logging.getLogger(__name__)

FOCUS_MARKER = "The areas to focus on in the image have bounding box coordinates: "
VCOT_TEMPLATE = "{response0} " + FOCUS_MARKER + "{areas}. Looking at these areas, {response1}"
COT_TEMPLATE = "{response0} {response1}"


def format_vcot_input(response0, focus_areas, response1):
    areas = json.dumps([reg.to_dict() for reg in focus_areas])
    return VCOT_TEMPLATE.format(response0=response0, areas=areas, response1=response1)


def format_cot_input(response0, response1):
    """The same reasoning with the focus-area sentence left out."""
    return COT_TEMPLATE.format(response0=response0, response1=response1)


def parse_focus_areas(vcot_input):
    """Recovers the focus areas embedded by format_vcot_input."""
    start = vcot_input.find(FOCUS_MARKER)
    if start < 0:
        raise ValueError("no focus areas in vcot_input")
    areas, _ = json.JSONDecoder().raw_decode(vcot_input, start + len(FOCUS_MARKER))
    return [Region.from_dict(area) for area in areas]


class QARecord(BaseModel):
    id: str
    query: str
    answer: str
    source: str
    images: List[str]


class CoTRecord(QARecord):
    cot_input: str


class VCoTRecord(QARecord):
    response0: str
    edited_images: List[str]
    response1: str
    focus_areas: List[dict]
    vcot_input: str
    cot_input: str

    @model_validator(mode="before")
    @classmethod
    def _default_cot(cls, data):
        if isinstance(data, dict) and "cot_input" not in data \
                and "response0" in data and "response1" in data:
            data = dict(data, cot_input=format_cot_input(data["response0"],
                                                         data["response1"]))
        return data

    @model_validator(mode="after")
    def _consistent(self):
        if bool(self.focus_areas) != bool(self.edited_images):
            raise ValueError("focus_areas must be nonempty exactly when edited_images is")
        regions = [Region.from_dict(area) for area in self.focus_areas]
        if self.vcot_input != format_vcot_input(self.response0, regions, self.response1):
            raise ValueError("vcot_input does not embed response0, focus_areas "
                             "and response1 in order")
        if self.cot_input != format_cot_input(self.response0, self.response1):
            raise ValueError("cot_input does not join response0 and response1")
        return self


# training-set flavours one collection run can be exported as
EXPORT_FORMATS = {"vcot": VCoTRecord, "cot": CoTRecord, "qa": QARecord}


def _image_ref(raster):
    return f"images/{raster.digest()}.png"


def record_from_episode(episode):
    """Reduces an answered episode: last editing turn, then the answering turn."""
    editing = [turn for turn in episode.turns if turn.edit_records]
    focus_turn = editing[-1] if editing else episode.turns[0]
    focus_areas = []
    for reg in focus_turn.affected_regions:
        if reg not in focus_areas:
            focus_areas.append(reg)
    edited_images = [_image_ref(focus_turn.observation)] if editing else []
    response0 = focus_turn.assistant_text
    response1 = episode.raw_answer_text
    task = episode.task
    return VCoTRecord(
        id=task.id, query=task.question, answer=task.gold_answer,
        source=task.source, images=[_image_ref(task.image)],
        response0=response0, edited_images=edited_images, response1=response1,
        focus_areas=[reg.to_dict() for reg in focus_areas],
        vcot_input=format_vcot_input(response0, focus_areas, response1),
        cot_input=format_cot_input(response0, response1))


def _save_images(episode, out_dir):
    image_dir = os.path.join(out_dir, "images")
    os.makedirs(image_dir, exist_ok=True)
    for digest, raster in episode.images().items():
        path = os.path.join(image_dir, f"{digest}.png")
        if not os.path.exists(path):
            write_png(raster, path)


def collect_vcot(items, client, cfg, out_dir=None, return_episodes=False):
    """
    Returns the kept records in item order. With `return_episodes` also
    returns the first-run and hinted-run episodes for reporting.
    """
    tasks = []
    for item in items:
        if item.answer is None:
            raise SchemaError(f"{item.id}: collection needs gold answers")
        try:
            tasks.append(task_from_item(item, cfg))
        except RefocusError as err:
            logger.warning("skipping %s: %s", item.id, err)

    first = run_batch(tasks, client, cfg, desc="collect")
    kept = {}
    retry = []
    for episode in first:
        if score_episode(episode, cfg, client):
            kept[episode.task_id] = episode
        elif episode.reason in ("transport", "replay_miss"):
            logger.warning("skipping %s after %s failure", episode.task_id, episode.reason)
        else:
            retry.append(episode.task)

    first_correct = len(kept)
    hinted = run_batch(retry, client, cfg, desc="collect (hinted)",
                       hints={task.id: task.gold_answer for task in retry})
    for episode in hinted:
        if score_episode(episode, cfg, client):
            kept[episode.task_id] = episode

    records = []
    for task in tasks:
        episode = kept.get(task.id)
        if episode is None:
            continue
        if out_dir is not None:
            _save_images(episode, out_dir)
        records.append(record_from_episode(episode))
    logger.info("kept %d of %d items (%d first try, %d hinted)", len(records),
                len(tasks), first_correct, len(kept) - first_correct)
    if return_episodes:
        return records, first, hinted
    return records


def _export_model(fmt):
    if fmt not in EXPORT_FORMATS:
        raise ValueError(f"unknown record format {fmt!r}; expected one of "
                         f"{', '.join(EXPORT_FORMATS)}")
    return EXPORT_FORMATS[fmt]


def write_records(records, path, append=False, fmt="vcot"):
    """
    One validated record per line. `fmt` picks the fields written: "vcot"
    (everything), "cot" (reasoning without focus areas) or "qa" (question
    and answer only).
    """
    model = _export_model(fmt)
    rows = [model.model_validate(rec.model_dump()).model_dump() for rec in records]
    if not append and os.path.exists(path):
        os.remove(path)
    if rows:
        append_jsonl(rows, path)
    elif not append:
        open(path, "w").close()


def read_records(path, fmt="vcot"):
    model = _export_model(fmt)
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                records.append(model.model_validate_json(line))
            except ValidationError as err:
                raise SchemaError(str(err).replace("\n", " "), lineno) from err
    return records
