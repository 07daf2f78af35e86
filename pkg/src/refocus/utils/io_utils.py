# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

import json
import os
import threading

import numpy as np

from ..errors import StorageError

_APPEND_LOCK = threading.Lock()


def ensure_json_serializable(value):
    """
    Recursively ensures all values passed in are json serializable
    """
    if isinstance(value, np.ndarray):
        return value.tolist()
    elif isinstance(value, (np.float32, np.float64, np.floating)):
        return float(value)
    elif isinstance(value, (np.uint8, np.int32, np.int64, np.integer)):
        return int(value)
    elif isinstance(value, dict):
        return {k: ensure_json_serializable(v) for k, v in value.items()}
    elif isinstance(value, (list, tuple)):
        return [ensure_json_serializable(element) for element in value]
    else:
        return value


def write_json(data, path, indent=2):
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(ensure_json_serializable(data), fh, indent=indent,
                      ensure_ascii=False)
            fh.write("\n")
    except OSError as err:
        raise StorageError(f"cannot write {path}: {err}") from err


def append_jsonl(rows, path):
    """Appends one JSON object per line; concurrent callers are serialized."""
    lines = "".join(json.dumps(ensure_json_serializable(row), ensure_ascii=False) + "\n"
                    for row in rows)
    with _APPEND_LOCK:
        try:
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(lines)
        except OSError as err:
            raise StorageError(f"cannot append to {path}: {err}") from err


def safe_filename(name):
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in str(name))
