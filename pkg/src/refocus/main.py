# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
Command-line entry point. Payloads (layouts, answers, reports, paths) go to
stdout; logs and progress go to stderr. Exit codes: 0 success, 1 some items
failed, 2 usage or fatal error.
"""
import json
import logging
import os
import sys

from pydantic import ValidationError
from tensorboardX import SummaryWriter

from .actions import collect_vcot, report, score_episode, write_records
from .agent import run, run_batch, save_episode, task_from_item
from .agent.tasks import layout_for_item
from .config import get_config, validate_config
from .config.arguments import parse_opt
from .datasets import DatasetItem, load_dataset
from .errors import RefocusError, SchemaError
from .imaging.raster import read_png, write_png
from .llm import build_client
from .structure import layout_from_json, layout_to_json
from .synth import export_fixtures
from .tools import ToolStyle, apply_tool, tool_by_surface_name
from .utils.misc_utils import git_sha, setup_logging

logger = logging.getLogger("refocus")

EXIT_OK, EXIT_PARTIAL, EXIT_FATAL = 0, 1, 2


def _flag_overrides(args):
    pairs = []
    if getattr(args, "replay", None):
        pairs += ["LLM.BACKEND", "replay", "LLM.REPLAY_STORE", args.replay]
    if getattr(args, "script", None):
        pairs += ["LLM.BACKEND", "script", "LLM.SCRIPT", args.script]
    if getattr(args, "record", False):
        pairs += ["LLM.RECORD", True]
    if getattr(args, "k", None) is not None:
        pairs += ["PARSE.SUBPLOT_K", args.k]
    return pairs


def setup(args):
    """defaults < config file < flags and --opts < environment."""
    cfg = get_config()
    if args.config_file:
        cfg.merge_from_file(args.config_file)
    cfg.merge_from_list(args.opts)
    cfg.merge_from_list(_flag_overrides(args))
    cfg.merge_from_env()
    validate_config(cfg)
    cfg.freeze()
    return cfg


def _open_writer(cfg):
    logdir = os.path.join(cfg.OUTPUT_DIR, cfg.EXP_NAME)
    writer = SummaryWriter(logdir=logdir)
    logger.info("log files saved to %s", writer.file_writer.get_logdir())
    with open(os.path.join(logdir, "config.yaml"), "w") as fh:
        fh.write(cfg.dump())
    # get and save the version of the code being run
    sha = git_sha()
    if sha is not None:
        writer.add_text("git_sha", sha)
    return writer, logdir, sha


def _item_from_args(args, question=""):
    data = {"id": "cli", "image": args.image, "question": question,
            "answer": getattr(args, "answer", None),
            "source": getattr(args, "source", "synth"),
            "columns": args.columns, "row_count": args.rows,
            "row_labels": args.row_labels, "chart_kind": args.chart}
    if args.axis_entries:
        try:
            data["axis_entries"] = json.loads(args.axis_entries)
        except json.JSONDecodeError as err:
            raise SchemaError(f"--axis_entries is not JSON: {err.msg}") from err
    if args.layout:
        with open(args.layout, "r", encoding="utf-8") as fh:
            data["layout"] = json.load(fh)
    try:
        return DatasetItem.model_validate({k: v for k, v in data.items() if v is not None})
    except ValidationError as err:
        raise SchemaError(str(err).replace("\n", " ")) from err


def cmd_detect(args, cfg):
    item = _item_from_args(args)
    layout = layout_for_item(item, read_png(args.image), cfg)
    print(layout_to_json(layout, indent=2))
    return EXIT_OK


def cmd_edit(args, cfg):
    raster = read_png(args.image)
    with open(args.layout, "r", encoding="utf-8") as fh:
        layout = layout_from_json(fh.read())
    spec = tool_by_surface_name(args.tool)
    edited, record = apply_tool(raster, layout, spec.tool, args.targets,
                                ToolStyle.from_config(cfg))
    write_png(edited, args.output)
    logger.info("%s -> %s", record.input_hash[:12], record.output_hash[:12])
    print(args.output)
    return EXIT_OK


def cmd_run(args, cfg):
    task = task_from_item(_item_from_args(args, args.question), cfg)
    episode = run(task, build_client(cfg), cfg)
    if args.save:
        path = save_episode(episode, os.path.join(cfg.OUTPUT_DIR, cfg.EXP_NAME),
                            cfg.AGENT.SAVE_IMAGES)
        logger.info("episode saved to %s", path)
    if not episode.answered:
        logger.error("no answer: %s", episode.reason)
        return EXIT_PARTIAL
    if task.gold_answer is not None:
        logger.info("correct: %s", score_episode(episode, cfg))
    print(f"FINAL ANSWER: {episode.final_answer}")
    return EXIT_OK


def _load_items(args):
    items = load_dataset(args.dataset, args.source)
    if args.limit is not None:
        items = items[:args.limit]
    return items


def cmd_bench(args, cfg):
    items = _load_items(args)
    tasks = []
    for item in items:
        try:
            tasks.append(task_from_item(item, cfg))
        except (RefocusError, ValueError) as err:
            logger.warning("skipping %s: %s", item.id, err)
    client = build_client(cfg)
    writer, logdir, sha = _open_writer(cfg)
    episodes = run_batch(tasks, client, cfg, desc="bench")
    scores = [score_episode(episode, cfg, client) for episode in episodes]
    for episode in episodes:
        save_episode(episode, logdir, cfg.AGENT.SAVE_IMAGES)
    meta = {"exp_name": cfg.EXP_NAME, "dataset": args.dataset,
            "model": cfg.LLM.MODEL_NAME, "backend": cfg.LLM.BACKEND,
            "git_sha": sha, "skipped": len(items) - len(tasks)}
    result = report(episodes, scores, meta)
    with open(os.path.join(logdir, "report.json"), "w") as fh:
        fh.write(result.to_json() + "\n")
    result.log_to(writer)
    writer.close()
    logger.info("\n%s", result.to_text())
    print(result.to_json())
    return EXIT_PARTIAL if result.failed or meta["skipped"] else EXIT_OK


def cmd_collect(args, cfg):
    items = _load_items(args)
    client = build_client(cfg)
    writer, logdir, sha = _open_writer(cfg)
    records, first, hinted = collect_vcot(items, client, cfg, out_dir=logdir,
                                          return_episodes=True)
    output = args.output or os.path.join(logdir, f"{args.format}.jsonl")
    write_records(records, output, fmt=args.format)
    first_scores = [score_episode(episode, cfg, client) for episode in first]
    result = report(first, first_scores, {"exp_name": cfg.EXP_NAME, "git_sha": sha,
                                          "kept": len(records),
                                          "hinted": len(hinted)})
    result.log_to(writer)
    writer.add_scalar("collect/kept", len(records), 0)
    writer.close()
    logger.info("wrote %d records to %s", len(records), output)
    print(output)
    broken = [ep for ep in first + hinted if ep.reason in ("transport", "replay_miss")]
    return EXIT_PARTIAL if broken or len(first) < len(items) else EXIT_OK


def cmd_render_synth(args, cfg):
    kinds = tuple(args.kinds or cfg.SYNTH.KINDS)
    num = args.num if args.num is not None else cfg.SYNTH.NUM
    seed = args.seed if args.seed is not None else cfg.SEED
    path = export_fixtures(args.out_dir, num, seed, kinds, args.questions_per_image)
    print(path)
    return EXIT_OK


COMMANDS = {
    "detect": cmd_detect,
    "edit": cmd_edit,
    "run": cmd_run,
    "bench": cmd_bench,
    "collect": cmd_collect,
    "render-synth": cmd_render_synth,
}


def main(argv=None):
    args = parse_opt(argv)
    setup_logging(args.verbose)
    try:
        cfg = setup(args)
        return COMMANDS[args.command](args, cfg)
    except (RefocusError, ValueError, OSError) as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_FATAL
