# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.
"""Picks the chat backend a config asks for."""

import logging

from ..config import get_api_key
from ..errors import ConfigError
from .client import OpenAIChatClient
from .replay import RecordingClient, ReplayClient, ReplayStore, ScriptedClient

logger = logging.getLogger(__name__)


def build_client(cfg):
    backend = cfg.LLM.BACKEND
    logger.info("building %s chat backend", backend)
    if backend == "script":
        if not cfg.LLM.SCRIPT:
            raise ConfigError("LLM.BACKEND=script needs LLM.SCRIPT")
        return ScriptedClient.from_file(cfg.LLM.SCRIPT)
    if backend == "replay":
        if not cfg.LLM.REPLAY_STORE:
            raise ConfigError("LLM.BACKEND=replay needs LLM.REPLAY_STORE")
        return ReplayClient(ReplayStore(cfg.LLM.REPLAY_STORE))
    client = OpenAIChatClient.from_config(cfg, get_api_key())
    if cfg.LLM.RECORD:
        if not cfg.LLM.REPLAY_STORE:
            raise ConfigError("LLM.RECORD needs LLM.REPLAY_STORE")
        client = RecordingClient(client, ReplayStore(cfg.LLM.REPLAY_STORE))
    return client
