# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
JSONL question sets.

One object per line:
    id            string (numbers are converted)
    image         path relative to the JSONL file; `images` (a list) is
                  accepted too and its first entry used
    question      string; `query` is accepted as an alias
    answer        gold answer, optional; numbers are converted to text
    source        vwtq | vwtq_syn | vtabfact | charxiv | h_bar | v_bar | synth;
                  defaults to the tag passed to load_dataset
    columns       table column names, in order          (tables)
    row_count     number of data rows                   (tables)
    row_labels    optional row names                    (tables)
    chart_kind    horizontal_bar | vertical_bar | multi_subplot   (charts)
    axis_entries  {label: [x1, y1, x2, y2]} axis-value boxes      (bar charts)
    layout        a full serialized layout, used as-is when present
Blank lines are skipped.
"""
import json
import logging
import os
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from ..agent.loop import SOURCES
from ..errors import SchemaError
from ..imaging.raster import Region
from ..structure.layout import ChartKind

logger = logging.getLogger(__name__)


class DatasetItem(BaseModel):
    model_config = ConfigDict(extra="ignore", frozen=True)

    id: str
    image: str
    question: str
    answer: Optional[str] = None
    source: str
    columns: Optional[List[str]] = None
    row_count: Optional[int] = None
    row_labels: Optional[List[str]] = None
    chart_kind: Optional[ChartKind] = None
    axis_entries: Optional[Dict[str, Tuple[int, int, int, int]]] = None
    layout: Optional[dict] = None

    @model_validator(mode="before")
    @classmethod
    def _aliases(cls, data):
        if not isinstance(data, dict):
            return data
        data = dict(data)
        if "question" not in data and "query" in data:
            data["question"] = data["query"]
        if "image" not in data and data.get("images"):
            data["image"] = data["images"][0]
        if isinstance(data.get("id"), int):
            data["id"] = str(data["id"])
        answer = data.get("answer")
        if isinstance(answer, (int, float)) and not isinstance(answer, bool):
            data["answer"] = f"{answer:g}" if isinstance(answer, float) else str(answer)
        return data

    @field_validator("source")
    @classmethod
    def _known_source(cls, value):
        if value not in SOURCES:
            raise ValueError(f"unknown source {value!r}")
        return value

    @model_validator(mode="after")
    def _hints_consistent(self):
        if self.columns is not None and not self.columns:
            raise ValueError("columns must be nonempty")
        if self.row_count is not None and self.row_count < 1:
            raise ValueError("row_count must be >= 1")
        if self.row_labels is not None and self.row_count is not None \
                and len(self.row_labels) != self.row_count:
            raise ValueError("row_labels must have row_count entries")
        return self

    def axis_regions(self):
        return [(label, Region(*box)) for label, box in (self.axis_entries or {}).items()]


def load_dataset(path, source_tag):
    """Reads and validates every item; raises SchemaError naming the bad line."""
    base = os.path.dirname(os.path.abspath(path))
    items = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
                if not isinstance(data, dict):
                    raise SchemaError("item is not a JSON object", lineno)
                data.setdefault("source", source_tag)
                item = DatasetItem.model_validate(data)
            except json.JSONDecodeError as err:
                raise SchemaError(f"invalid JSON: {err.msg}", lineno) from err
            except ValidationError as err:
                raise SchemaError(str(err).replace("\n", " "), lineno) from err
            image = os.path.join(base, item.image)
            if not os.path.exists(image):
                raise SchemaError(f"image not found: {item.image}", lineno)
            items.append(item.model_copy(update={"image": image}))
    logger.info("loaded %d items from %s", len(items), path)
    return items
