# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

from .config import CfgNode

_C = CfgNode()

_C.EXP_NAME = "debug"
_C.OUTPUT_DIR = "./output"
_C.SEED = 0

# ---------------------------------------------------------------------------- #
# Structure parsing
# ---------------------------------------------------------------------------- #
_C.PARSE = CfgNode()
_C.PARSE.BINARIZE_THRESHOLD = 200  # ink is darker than this luminance
_C.PARSE.MERGE_GAP = 2  # px between parallel rules merged into one
_C.PARSE.MIN_LINE_KERNEL = 10
_C.PARSE.LINE_KERNEL_DIVISOR = 20  # kernel = max(MIN_LINE_KERNEL, extent / this)
_C.PARSE.GAP_MIN = 6  # empty columns that make a borderless valley
_C.PARSE.SUBPLOT_K = 10
_C.PARSE.DEDUP_IOU = 0.9

# ---------------------------------------------------------------------------- #
# Editing tools
# ---------------------------------------------------------------------------- #
_C.TOOLS = CfgNode()
_C.TOOLS.HIGHLIGHT_COLOR = [255, 0, 0, 50]
_C.TOOLS.MASK_COLOR = [255, 255, 255]
_C.TOOLS.DRAW_COLOR = [255, 0, 0]
_C.TOOLS.DRAW_THICKNESS = 3
# method families offered to the model; a subset runs the single-tool ablations
_C.TOOLS.METHODS = ["highlight", "mask", "draw"]

# ---------------------------------------------------------------------------- #
# Model endpoint
# ---------------------------------------------------------------------------- #
_C.LLM = CfgNode()
_C.LLM.BACKEND = "openai"  # replay, script
_C.LLM.API_BASE = "https://api.openai.com/v1"
_C.LLM.MODEL_NAME = "gpt-4o-2024-05-13"
_C.LLM.TEMPERATURE = 0.
_C.LLM.MAX_OUTPUT_TOKENS = 1024
_C.LLM.TIMEOUT = 120.
_C.LLM.MAX_ATTEMPTS = 3
_C.LLM.REPLAY_STORE = ""
_C.LLM.RECORD = False  # append live responses to REPLAY_STORE
_C.LLM.SCRIPT = ""  # question-keyed canned turns, for offline runs
_C.LLM.JUDGE = False  # score with the model instead of string rules

# ---------------------------------------------------------------------------- #
# Edit-and-reason loop
# ---------------------------------------------------------------------------- #
_C.AGENT = CfgNode()
_C.AGENT.MAX_TURNS = 5
_C.AGENT.NUM_WORKERS = 4
_C.AGENT.SAVE_IMAGES = True
_C.AGENT.SEND_LAYOUT = True  # embed the region map as JSON in the first prompt

# ---------------------------------------------------------------------------- #
# Scoring
# ---------------------------------------------------------------------------- #
_C.EVAL = CfgNode()
_C.EVAL.SCORE_MODE = "auto"  # per-source default
_C.EVAL.TOLERANCE = 0.05

# ---------------------------------------------------------------------------- #
# Synthetic fixtures
# ---------------------------------------------------------------------------- #
_C.SYNTH = CfgNode()
_C.SYNTH.NUM = 20
_C.SYNTH.KINDS = ["table", "horizontal_bar", "vertical_bar", "multi_subplot"]
