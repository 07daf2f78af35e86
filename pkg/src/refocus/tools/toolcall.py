# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
Reads tool calls out of model pseudocode without executing anything.

Only statements shaped like

    [name =] surface_name(image, ["target", ...][, bboxes])

are recognised; identifiers in the first and third argument slots are
ignored because the harness supplies the image and the region map. The
scanner is a single regex tokenizer pass plus a forward-only matcher, so
any input is processed in linear time.
"""
import difflib
import json
import re
from collections import namedtuple
from dataclasses import dataclass, field
from typing import List, Tuple

from ..errors import EmptyTargets, ToolCallError, UnknownTarget
from .edit_tools import METHODS, ToolId, tool_registry, tool_spec

ANSWER_RE = re.compile(r"\bANSWER\s*:")

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<str>"(?:[^"\\\n]|\\.)*"|'(?:[^'\\\n]|\\.)*')
  | (?P<punct>[()\[\],=;])
  | (?P<other>.)
""", re.VERBOSE)
_ESCAPE_RE = re.compile(r"\\(u[0-9a-fA-F]{4}|.)", re.DOTALL)
_ESCAPES = {"n": "\n", "t": "\t", "r": "\r"}

_BBOX_NAMES = {
    "columns": "columns_bbox",
    "rows": "rows_bbox",
    "bars_x": "x_values_bbox",
    "bars_y": "y_values_bbox",
    "subplots": "subplots_bbox",
}

Token = namedtuple("Token", ["kind", "text", "start", "end"])
Diagnostic = namedtuple("Diagnostic", ["severity", "message", "span"])


@dataclass(frozen=True)
class ToolCall:
    tool: ToolId
    targets: Tuple[str, ...]
    raw_span: Tuple[int, int] = (0, 0)

    @property
    def surface_name(self):
        return tool_spec(self.tool).surface_name

    def to_dict(self):
        return {"tool": self.surface_name, "targets": list(self.targets)}


@dataclass
class ParseReport:
    calls: List[ToolCall] = field(default_factory=list)
    ignored_statements: int = 0
    diagnostics: List[Diagnostic] = field(default_factory=list)

    @property
    def errors(self):
        return [d for d in self.diagnostics if d.severity == "error"]

    def error_text(self):
        """Diagnostics as sent back to the model."""
        return "\n".join(f"Error: {d.message}" for d in self.errors)


def _unescape(body):
    def repl(match):
        esc = match.group(1)
        if esc.startswith("u") and len(esc) == 5:
            return chr(int(esc[1:], 16))
        return _ESCAPES.get(esc, esc)
    return _ESCAPE_RE.sub(repl, body)


def _tokenize(source):
    return [Token(m.lastgroup, m.group(), m.start(), m.end())
            for m in _TOKEN_RE.finditer(source) if m.lastgroup != "ws"]


class _CallMatcher:
    """Forward-only matcher over the token list."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def _peek(self):
        while self.pos < len(self.tokens) and self.tokens[self.pos].kind == "nl":
            self.pos += 1
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self, kind, text=None):
        tok = self._peek()
        if tok is None or tok.kind != kind or (text is not None and tok.text != text):
            return None
        self.pos += 1
        return tok

    def match(self, start):
        """Returns (targets, end_offset, end_index) or None; `start` indexes '('."""
        self.pos = start
        if not self._take("punct", "(") or not self._take("ident"):
            return None
        if not self._take("punct", ",") or not self._take("punct", "["):
            return None
        targets = []
        while True:
            tok = self._take("str")
            if tok is None:
                break
            targets.append(_unescape(tok.text[1:-1]))
            if not self._take("punct", ","):
                break
        if not self._take("punct", "]"):
            return None
        if self._take("punct", ",") and not self._take("ident"):
            return None
        close = self._take("punct", ")")
        if close is None:
            return None
        return targets, close.end, self.pos


def _count_ignored(source, covered):
    # `covered` spans are disjoint and in source order
    ignored = 0
    offset = 0
    jj = 0
    for line in source.split("\n"):
        end = offset + len(line)
        while jj < len(covered) and covered[jj][1] <= offset:
            jj += 1
        text = line.strip()
        if text and not text.startswith("```") and \
                not (jj < len(covered) and covered[jj][0] < end + 1):
            ignored += 1
        offset = end + 1
    return ignored


def extract_calls(source, registry=None):
    """Scans `source` (prose and fenced blocks alike) for registered tool calls."""
    surface = {spec.surface_name: spec for spec in (registry or tool_registry())}
    tokens = _tokenize(source)
    matcher = _CallMatcher(tokens)
    report = ParseReport()
    covered = []

    ii = 0
    while ii < len(tokens):
        tok = tokens[ii]
        nxt = tokens[ii + 1] if ii + 1 < len(tokens) else None
        if tok.kind != "ident" or nxt is None or nxt.text != "(":
            ii += 1
            continue
        span_start = tok.start
        if ii >= 2 and tokens[ii - 1].text == "=" and tokens[ii - 2].kind == "ident":
            span_start = tokens[ii - 2].start
        matched = matcher.match(ii + 1)
        spec = surface.get(tok.text)

        if matched is None:
            if spec is not None:
                span = (tok.start, nxt.end)
                report.diagnostics.append(Diagnostic(
                    "error", f"could not parse the call to {tok.text}; expected "
                    f"{render_call(ToolCall(spec.tool, ('...',)))}", span))
                covered.append(span)
            ii += 1
            continue

        targets, end, next_index = matched
        span = (span_start, end)
        covered.append(span)
        if spec is None:
            known = difflib.get_close_matches(tok.text, list(surface), n=1)
            hint = f" (did you mean {known[0]}?)" if known else ""
            report.diagnostics.append(Diagnostic(
                "error", f"unknown function {tok.text}{hint}", span))
        elif not targets:
            report.diagnostics.append(Diagnostic(
                "error", f"{tok.text} needs at least one target", span))
        else:
            report.calls.append(ToolCall(spec.tool, tuple(targets), span))
        ii = next_index

    if report.calls and ANSWER_RE.search(source):
        report.diagnostics.append(Diagnostic(
            "warning", "an answer was given; tool calls in the same message "
            "were not executed", (0, len(source))))
        report.calls = []
    report.ignored_statements = _count_ignored(source, covered)
    return report


def _resolve(target, available):
    if target in available:
        return target
    folded = target.casefold()
    for name in available:
        if name.casefold() == folded:
            return name
    squeezed = " ".join(target.split()).casefold()
    for name in available:
        if " ".join(name.split()).casefold() == squeezed:
            return name
    close = difflib.get_close_matches(target, list(available), n=1)
    raise UnknownTarget(target, available, close[0] if close else None)


def validate_calls(report, layout, methods=METHODS):
    """
    Checks every call against `layout` and returns the calls with targets
    rewritten to the layout's own spelling. Calls from a method family not
    in `methods` are refused.
    """
    if report.errors:
        raise ToolCallError(report.error_text())
    validated = []
    for call in report.calls:
        spec = tool_spec(call.tool)
        if call.tool.method not in methods:
            enabled = ", ".join(f"focus_on_..._with_{m}" for m in methods)
            raise ToolCallError(f"{spec.surface_name} is not available in this run; "
                                f"use {enabled}")
        available = list(layout.named_regions(spec.target_class))
        if not call.targets:
            raise EmptyTargets(f"{spec.surface_name} needs at least one target")
        targets = tuple(_resolve(t, available) for t in call.targets)
        validated.append(ToolCall(call.tool, targets, call.raw_span))
    return validated


def render_call(call):
    spec = tool_spec(call.tool)
    quoted = ", ".join(json.dumps(t, ensure_ascii=False) for t in call.targets)
    bbox = _BBOX_NAMES[spec.target_class.value]
    return f"image = {spec.surface_name}(image, [{quoted}], {bbox})"


def render_calls(calls):
    return "\n".join(render_call(call) for call in calls)
