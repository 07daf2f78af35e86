# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""Prompt text for the edit-and-reason loop. Changing any of it invalidates replay stores."""
import json

from ..structure.layout import TableLayout, prompt_regions
from ..tools.edit_tools import METHODS, tools_for_layout
from ..tools.toolcall import ToolCall, render_call

SYSTEM_PROMPT = """You are a helpful multimodal AI assistant.
You answer questions about a structured image (a table or a chart) and you may edit the image to focus on the parts that matter.
For each turn, you should first do a "THOUGHT", based on the images and text you see.
If an edit helps, write Python-style pseudocode that calls the editing functions listed below; the harness runs those calls on the current image and shows you the result.
Only the listed functions are available. Pass the image, a list of names to focus on, and the bounding-box map.
Edits accumulate: every call applies to the latest edited image.

Available functions:
{tools}

Example:
```python
{example}
```

If you think you get the answer to the intial user request, you can reply with "ANSWER: <your answer>" and ends with "TERMINATE".
Please extract the final answer in FINAL ANSWER: <final answer> and ends with TERMINATE."""

REQUEST_PROMPT = """Here is the image and the question.
Question: {question}
{regions}"""

REGIONS_PROMPT = "The bounding boxes of the {kind} you can refer to, as x1, y1, x2, y2 pixel coordinates:\n{regions}"

OBSERVATION_PROMPT = "Execution success. The output is as follows."

REASK_PROMPT = """Answer the question {question}. You can turn the image into text and answer with step of thinking.

Reply with ANSWER: <your answer>

Please extract the final answer in FINAL ANSWER: <final answer> and ends with TERMINATE."""

NO_ACTION_PROMPT = """No editing function was called and no answer was given.
Either call one of the listed editing functions, or reply with ANSWER: <your answer>.

Please extract the final answer in FINAL ANSWER: <final answer> and ends with TERMINATE."""

REPAIR_PROMPT = """The code could not be executed.
{errors}
Fix the call and try again, or reply with ANSWER: <your answer>."""

HINT_PROMPT = "The correct answer is {gold}. Explain and refocus accordingly."


def tool_listing(layout, methods=METHODS):
    return "\n".join(f"- {spec.surface_name}(image, names, bounding_boxes): {spec.doc}"
                     for spec in tools_for_layout(layout, methods))


def example_call(layout, methods=METHODS):
    spec = tools_for_layout(layout, methods)[0]
    named = layout.named_regions(spec.target_class)
    return render_call(ToolCall(spec.tool, tuple(list(named)[:2])))


def system_prompt(layout, methods=METHODS):
    return SYSTEM_PROMPT.format(tools=tool_listing(layout, methods),
                                example=example_call(layout, methods))


def regions_text(layout):
    kind = "columns and rows" if isinstance(layout, TableLayout) else \
        " and ".join(k.replace("_", " ") for k in prompt_regions(layout))
    regions = json.dumps(prompt_regions(layout))
    return REGIONS_PROMPT.format(kind=kind, regions=regions)


def request_prompt(question, layout, send_layout=True, hint=None):
    text = REQUEST_PROMPT.format(
        question=question, regions=regions_text(layout) if send_layout else "")
    if hint is not None:
        text = text.rstrip("\n") + "\n" + HINT_PROMPT.format(gold=hint)
    return text
