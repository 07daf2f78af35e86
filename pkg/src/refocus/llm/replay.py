# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
Offline backends: a fingerprint-keyed replay store and question-keyed scripts.

Fingerprint canonicalization: the request becomes a JSON object with keys
sorted, compact separators and non-ASCII kept as UTF-8; every image part is
replaced by {"type": "image", "sha256": <digest of its PNG bytes>}; the
SHA-256 of that UTF-8 text is the fingerprint.
"""
import hashlib
import json
import logging
import os
import threading

from ..errors import ReplayMiss, SchemaError, StorageError
from ..imaging.raster import save_png
from .client import ChatClient, ImagePart, Role

logger = logging.getLogger(__name__)

HINT_MARKER = "The correct answer is"


def _part_to_canonical(part):
    if isinstance(part, ImagePart):
        return {"type": "image",
                "sha256": hashlib.sha256(save_png(part.image)).hexdigest()}
    return {"type": "text", "text": part.text}


def canonical_request(request):
    payload = {
        "model": request.model_name,
        "temperature": request.temperature,
        "max_output_tokens": request.max_output_tokens,
        "messages": [{"role": m.role.value,
                      "parts": [_part_to_canonical(p) for p in m.parts]}
                     for m in request.messages],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False)


def fingerprint(request):
    return hashlib.sha256(canonical_request(request).encode("utf-8")).hexdigest()


class ReplayStore:
    """JSONL file of {"fingerprint", "response"} lines; appends are serialized."""

    def __init__(self, path=None):
        self.path = path
        self._responses = {}
        self._lock = threading.Lock()
        if path and os.path.exists(path):
            self._load(path)

    def _load(self, path):
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    entry = json.loads(line)
                    self._responses[entry["fingerprint"]] = entry["response"]
                except (json.JSONDecodeError, KeyError, TypeError) as err:
                    raise SchemaError(f"bad replay entry: {err}", lineno) from err
        logger.info("loaded %d recorded responses from %s", len(self._responses), path)

    def __len__(self):
        return len(self._responses)

    def __contains__(self, key):
        return key in self._responses

    def lookup(self, request):
        key = fingerprint(request)
        try:
            return self._responses[key]
        except KeyError:
            raise ReplayMiss(key) from None

    def record(self, request, response):
        key = fingerprint(request)
        line = json.dumps({"fingerprint": key, "response": response},
                          ensure_ascii=False)
        with self._lock:
            if self.path:
                try:
                    with open(self.path, "a", encoding="utf-8") as fh:
                        fh.write(line + "\n")
                except OSError as err:
                    raise StorageError(f"cannot append to {self.path}: {err}") from err
            self._responses[key] = response
        return key


class ReplayClient(ChatClient):

    def __init__(self, store):
        self.store = store

    def complete(self, request):
        return self.store.lookup(request)


class RecordingClient(ChatClient):
    """Forwards to `inner` and records every exchange into `store`."""

    def __init__(self, inner, store):
        self.inner = inner
        self.store = store

    def complete(self, request):
        response = self.inner.complete(request)
        self.store.record(request, response)
        return response


def load_script(path):
    """
    A script file is a JSON list of {"question", "turns", "hinted"} objects;
    `hinted` is optional and answers the rerun that carries the gold hint.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            entries = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise SchemaError(f"cannot read script {path}: {err}") from err
    script = {}
    for ii, entry in enumerate(entries):
        try:
            script[entry["question"]] = {"turns": list(entry["turns"]),
                                         "hinted": list(entry.get("hinted", []))}
        except (KeyError, TypeError) as err:
            raise SchemaError(f"script entry {ii}: {err}") from err
    return script


class ScriptedClient(ChatClient):
    """
    Canned turns keyed by question text. The turn index is the number of
    assistant messages already in the request, so one client serves any
    number of concurrent episodes. Past the end of a script the last turn
    repeats.
    """

    def __init__(self, script, hint_marker=HINT_MARKER):
        self.script = dict(script)
        self.hint_marker = hint_marker

    @classmethod
    def from_file(cls, path):
        return cls(load_script(path))

    def _find(self, prompt):
        # longest key wins when one question contains another
        matches = [q for q in self.script if q in prompt]
        return max(matches, key=len) if matches else None

    def complete(self, request):
        users = [m for m in request.messages if m.role == Role.USER]
        prompt = users[0].text if users else ""
        question = self._find(prompt)
        if question is None:
            raise ReplayMiss(fingerprint(request))
        entry = self.script[question]
        turns = entry["hinted"] if self.hint_marker in prompt and entry["hinted"] \
            else entry["turns"]
        if not turns:
            raise ReplayMiss(fingerprint(request))
        index = sum(1 for m in request.messages if m.role == Role.ASSISTANT)
        return turns[min(index, len(turns) - 1)]
