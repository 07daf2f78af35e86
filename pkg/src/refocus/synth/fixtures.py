# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""Question generation for rendered fixtures, the worked standings table, and export."""
import json
import logging
import os

import numpy as np

from ..imaging.raster import write_png
from ..structure.layout import ChartKind
from ..utils.io_utils import write_json
from .render import TableSpec, TableStyle, make_corpus

logger = logging.getLogger(__name__)

TEAM_STANDINGS_QUESTION = "What is the total number of wins by teams from Belgium?"
TEAM_STANDINGS_ANSWER = "47"


def team_standings_spec():
    """Season standings: the Belgian teams are rows 1, 3 and 5 and win 25 + 14 + 8."""
    cells = (
        ("Quick-Step", "Belgium", "25", "1450"),
        ("Jumbo-Visma", "Netherlands", "19", "1320"),
        ("Lotto-Soudal", "Belgium", "14", "980"),
        ("Ineos", "United Kingdom", "12", "1105"),
        ("Alpecin", "Belgium", "8", "760"),
        ("Bahrain", "Bahrain", "10", "890"),
    )
    return TableSpec(("Team", "Country", "Wins", "Points"), cells,
                     TableStyle(padding=6, margin=10))


def _format_value(value):
    return f"{value:g}"


def synth_questions(spec, truth=None):
    """
    Lookup questions with gold answers. Tables ask for every non-key cell by
    the first-column value of its row; bar charts ask for each bar's value;
    multi-subplot charts ask for the tallest bar of each panel.
    """
    if isinstance(spec, TableSpec):
        key = spec.column_names[0]
        out = []
        for row in spec.cells:
            for name, cell in zip(spec.column_names[1:], row[1:]):
                out.append((f"What is the {name} of the {key} {row[0]}?", cell))
        return out
    if spec.kind == ChartKind.MULTI_SUBPLOT:
        titles = [name for name, _ in truth.text_regions if name != "title"] \
            if truth is not None else []
        out = []
        for index, values in enumerate(spec.panel_series()):
            title = titles[index] if index < len(titles) else f"Panel {index + 1}"
            best = spec.labels[int(np.argmax(values))]
            out.append((f"Which label has the tallest bar in {title}?", best))
        return out
    return [(f"What is the value for {label}?", _format_value(value))
            for label, value in zip(spec.labels, spec.values)]


def _hints(spec, truth):
    if isinstance(spec, TableSpec):
        return {"columns": list(spec.column_names), "row_count": spec.row_count}
    hints = {"chart_kind": spec.kind.value}
    if spec.kind != ChartKind.MULTI_SUBPLOT:
        hints["axis_entries"] = {label: [reg.x1, reg.y1, reg.x2, reg.y2]
                                 for label, reg in truth.layout.axis_entries}
    return hints


def export_fixtures(out_dir, n, seed, kinds=("table",), questions_per_image=1):
    """
    Writes `images/<id>.png`, `truth/<id>.json` and a `dataset.jsonl` whose
    items load with `load_dataset(path, "synth")`. Returns the dataset path.
    """
    os.makedirs(os.path.join(out_dir, "images"), exist_ok=True)
    rng = np.random.RandomState(seed)
    lines = []
    for ii, (raster, truth, spec) in enumerate(make_corpus(n, seed, kinds)):
        fixture_id = f"synth_{seed}_{ii:04d}"
        write_png(raster, os.path.join(out_dir, "images", fixture_id + ".png"))
        write_json(truth.to_dict(), os.path.join(out_dir, "truth", fixture_id + ".json"))
        pool = synth_questions(spec, truth)
        picks = rng.choice(len(pool), size=min(questions_per_image, len(pool)),
                           replace=False)
        for qq, pick in enumerate(sorted(int(p) for p in picks)):
            question, answer = pool[pick]
            item = {"id": f"{fixture_id}_q{qq}",
                    "image": f"images/{fixture_id}.png",
                    "question": question, "answer": answer, "source": "synth"}
            item.update(_hints(spec, truth))
            lines.append(json.dumps(item, ensure_ascii=False))
    path = os.path.join(out_dir, "dataset.jsonl")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("".join(line + "\n" for line in lines))
    logger.info("exported %d fixtures, %d questions to %s", n, len(lines), out_dir)
    return path
