# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""Talks to the configured endpoint; run with REFOCUS_LIVE_TEST=1 and an API key set."""
import os

import pytest

from refocus.agent import Task, run_batch
from refocus.config import get_api_key
from refocus.llm import build_client
from refocus.synth import make_corpus, synth_questions

pytestmark = [
    pytest.mark.live,
    pytest.mark.skipif(os.environ.get("REFOCUS_LIVE_TEST") != "1",
                       reason="set REFOCUS_LIVE_TEST=1 to call the endpoint"),
]


def test_synth_tables_live(cfg):
    if get_api_key() is None:
        pytest.skip("no API key in the environment")
    cfg.merge_from_env()
    tasks = []
    for ii, (raster, truth, spec) in enumerate(make_corpus(5, 0, ("table",))):
        question, answer = synth_questions(spec)[0]
        tasks.append(Task(f"live_{ii}", raster, question, truth.layout, answer, "synth"))
    episodes = run_batch(tasks, build_client(cfg), cfg)
    assert not [ep for ep in episodes if ep.reason == "transport"]
    assert any(ep.edited for ep in episodes)
