# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

from .loop import (CHART_SOURCES, SOURCES, TABLE_SOURCES, Episode, Task, Turn,
                   build_initial_prompt, edit_rate, extract_final_answer, run,
                   start_episode, step)
from .runner import run_batch, save_episode
from .tasks import layout_for_item, task_from_item
