# adapted from fvcore.common.config.py
# Copyright (c) Facebook, Inc. and its affiliates. All Rights Reserved.
import os
from yacs.config import CfgNode as YacsNode

from ..errors import ConfigError

BASE_KEY = "_BASE_"

# environment variables win over files and flags
ENV_OVERRIDES = {
    "REFOCUS_API_BASE": "LLM.API_BASE",
    "REFOCUS_MODEL": "LLM.MODEL_NAME",
}
API_KEY_VARS = ("REFOCUS_API_KEY", "OPENAI_API_KEY")


def get_config():
    from .defaults import _C
    return _C.clone()


def get_api_key():
    """Credentials are only ever read from the environment."""
    for var in API_KEY_VARS:
        value = os.environ.get(var)
        if value:
            return value
    return None


class CfgNode(YacsNode):
    """
    Extended version of :class:`yacs.config.CfgNode`.
    It contains the following extra features:
    1. The :meth:`merge_from_file` method supports the "_BASE_" key,
       which allows the new CfgNode to inherit all the attributes from the
       base configuration file.
    2. :meth:`merge_from_env` applies the documented environment overrides.
    """

    @classmethod
    def load_yaml_with_base(cls, filename):
        """
        Just like `yaml.load(open(filename))`, but inherit attributes from its
            `_BASE_`.
        Args:
            filename (str): the file name of the current config. Relative
                `_BASE_` paths resolve against its directory.
        Returns:
            (dict): the loaded yaml
        """
        with open(filename, "r") as f:
            cfg = cls.load_cfg(f)

        def merge_a_into_b(a, b):
            for k, v in a.items():
                if isinstance(v, dict) and k in b:
                    if not isinstance(b[k], dict):
                        raise ConfigError(f"Cannot inherit key '{k}' from base!")
                    merge_a_into_b(v, b[k])
                else:
                    b[k] = v

        if BASE_KEY in cfg:
            base_cfg_file = os.path.expanduser(cfg[BASE_KEY])
            if not os.path.isabs(base_cfg_file):
                base_cfg_file = os.path.join(os.path.dirname(filename), base_cfg_file)
            base_cfg = cls.load_yaml_with_base(base_cfg_file)
            del cfg[BASE_KEY]

            merge_a_into_b(cfg, base_cfg)
            return base_cfg
        return cfg

    def merge_from_file(self, cfg_filename):
        loaded_cfg = self.load_yaml_with_base(cfg_filename)
        loaded_cfg = type(self)(loaded_cfg)
        self.merge_from_other_cfg(loaded_cfg)

    def merge_from_env(self, environ=None):
        environ = os.environ if environ is None else environ
        pairs = []
        for var, key in ENV_OVERRIDES.items():
            if environ.get(var):
                pairs += [key, environ[var]]
        if pairs:
            self.merge_from_list(pairs)


def _check(condition, message):
    if not condition:
        raise ConfigError(message)


def validate_config(cfg):
    """Enforces the documented ranges; raises ConfigError on the first violation."""
    _check(1 <= cfg.PARSE.BINARIZE_THRESHOLD <= 255,
           "PARSE.BINARIZE_THRESHOLD must be in 1..255")
    _check(cfg.PARSE.MERGE_GAP >= 0, "PARSE.MERGE_GAP must be >= 0")
    _check(cfg.PARSE.MIN_LINE_KERNEL >= 2, "PARSE.MIN_LINE_KERNEL must be >= 2")
    _check(cfg.PARSE.GAP_MIN >= 1, "PARSE.GAP_MIN must be >= 1")
    _check(cfg.PARSE.SUBPLOT_K >= 1, "PARSE.SUBPLOT_K must be >= 1")
    _check(0 < cfg.PARSE.DEDUP_IOU <= 1, "PARSE.DEDUP_IOU must be in (0, 1]")
    _check(len(cfg.TOOLS.HIGHLIGHT_COLOR) == 4, "TOOLS.HIGHLIGHT_COLOR is RGBA")
    for name in ("HIGHLIGHT_COLOR", "MASK_COLOR", "DRAW_COLOR"):
        _check(all(0 <= ch <= 255 for ch in cfg.TOOLS[name]),
               f"TOOLS.{name} channels must be in 0..255")
    _check(cfg.TOOLS.DRAW_THICKNESS >= 1, "TOOLS.DRAW_THICKNESS must be >= 1")
    _check(len(cfg.TOOLS.METHODS) >= 1 and
           set(cfg.TOOLS.METHODS) <= {"highlight", "mask", "draw"},
           "TOOLS.METHODS must be a nonempty subset of highlight, mask, draw")
    _check(cfg.LLM.BACKEND in ("openai", "replay", "script"),
           f"invalid LLM.BACKEND {cfg.LLM.BACKEND}")
    _check(cfg.LLM.TEMPERATURE >= 0, "LLM.TEMPERATURE must be >= 0")
    _check(cfg.LLM.MAX_OUTPUT_TOKENS >= 1, "LLM.MAX_OUTPUT_TOKENS must be >= 1")
    _check(cfg.LLM.TIMEOUT > 0, "LLM.TIMEOUT must be > 0")
    _check(cfg.LLM.MAX_ATTEMPTS >= 1, "LLM.MAX_ATTEMPTS must be >= 1")
    _check(cfg.AGENT.MAX_TURNS >= 1, "AGENT.MAX_TURNS must be >= 1")
    _check(cfg.AGENT.NUM_WORKERS >= 1, "AGENT.NUM_WORKERS must be >= 1")
    _check(cfg.EVAL.SCORE_MODE in ("auto", "exact_normalized", "numeric_relaxed",
                                   "external_judge"),
           f"invalid EVAL.SCORE_MODE {cfg.EVAL.SCORE_MODE}")
    _check(0 < cfg.EVAL.TOLERANCE < 1, "EVAL.TOLERANCE must be in (0, 1)")
    _check(cfg.SYNTH.NUM >= 1, "SYNTH.NUM must be >= 1")
    return cfg
