# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""Concurrent episodes and their on-disk form."""
import logging
import os
from concurrent.futures import ThreadPoolExecutor

from ..config import get_config
from ..imaging.raster import write_png
from ..utils.io_utils import safe_filename, write_json
from ..utils.misc_utils import tqdm
from .loop import run

logger = logging.getLogger(__name__)


def run_batch(tasks, client, cfg=None, hints=None, desc="episodes"):
    """
    Runs every task with up to AGENT.NUM_WORKERS episodes in flight.
    `hints` optionally maps task id to a gold answer for the hint line.
    Results come back in task order.
    """
    cfg = cfg or get_config()
    tasks = list(tasks)
    hints = hints or {}

    def _one(task):
        return run(task, client, cfg, hint=hints.get(task.id))

    with ThreadPoolExecutor(max_workers=cfg.AGENT.NUM_WORKERS) as pool:
        episodes = list(tqdm(pool.map(_one, tasks), total=len(tasks), desc=desc))
    return episodes


def save_episode(episode, out_dir, save_images=True):
    """
    Writes `<out_dir>/episodes/<task id>.json`; images go to
    `<out_dir>/images/<digest>.png`, matching the references in the JSON.
    """
    image_dir = os.path.join(out_dir, "images")
    if save_images:
        os.makedirs(image_dir, exist_ok=True)
        for digest, raster in episode.images().items():
            path = os.path.join(image_dir, f"{digest}.png")
            if not os.path.exists(path):
                write_png(raster, path)
    path = os.path.join(out_dir, "episodes", safe_filename(episode.task_id) + ".json")
    write_json(episode.to_dict(), path)
    return path
