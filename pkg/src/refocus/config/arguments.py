# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.


import argparse

from ..structure.layout import ChartKind
from ..tools.edit_tools import tool_registry


def _common_parser():
    parser = argparse.ArgumentParser(add_help=False)
    add_arg = parser.add_argument
    add_arg('--config_file', type=str, default="")
    add_arg('-v', '--verbose', action="store_true", help="debug logging on stderr")
    add_arg(
        "--opts",
        help="Modify config options by adding 'KEY VALUE' pairs at the end of the command. ",
        default=[],
        nargs=argparse.REMAINDER,
    )
    return parser


def _backend_parser():
    parser = argparse.ArgumentParser(add_help=False)
    add_arg = parser.add_argument
    add_arg('--replay', type=str, default=None, metavar="STORE",
            help="answer from a recorded JSONL store instead of the endpoint")
    add_arg('--script', type=str, default=None, metavar="FILE",
            help="answer from question-keyed canned turns")
    add_arg('--record', action="store_true",
            help="append live responses to LLM.REPLAY_STORE")
    return parser


def _add_structure_hints(parser):
    add_arg = parser.add_argument
    add_arg('--columns', nargs="+", default=None, help="table column names, in order")
    add_arg('--rows', type=int, default=None, help="number of table data rows")
    add_arg('--row_labels', nargs="+", default=None)
    add_arg('--chart', type=str, default=None,
            choices=[kind.value for kind in ChartKind])
    add_arg('--axis_entries', type=str, default=None,
            help='JSON object {"label": [x1, y1, x2, y2], ...}')
    add_arg('--layout', type=str, default=None,
            help="serialized layout JSON file, used instead of parsing")


def get_parser():
    common = _common_parser()
    backend = _backend_parser()
    parser = argparse.ArgumentParser(
        prog="refocus",
        description="Edit-and-reason question answering over tables and charts.")
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", parents=[common],
                            help="print the layout parsed from an image")
    detect.add_argument('image')
    _add_structure_hints(detect)
    detect.add_argument('--k', type=int, default=None,
                        help="subplot candidates (default PARSE.SUBPLOT_K)")

    edit = sub.add_parser("edit", parents=[common], help="apply one editing tool")
    add_arg = edit.add_argument
    add_arg('image')
    add_arg('layout', help="layout JSON file, as printed by detect")
    add_arg('tool', choices=[spec.surface_name for spec in tool_registry()])
    add_arg('targets', nargs="+")
    add_arg('-o', '--output', type=str, required=True)

    run = sub.add_parser("run", parents=[common, backend],
                         help="answer one question about one image")
    run.add_argument('image')
    run.add_argument('--question', type=str, required=True)
    run.add_argument('--answer', type=str, default=None,
                     help="gold answer, scored when given")
    run.add_argument('--source', type=str, default="synth")
    run.add_argument('--save', action="store_true",
                     help="write the episode under OUTPUT_DIR/EXP_NAME")
    _add_structure_hints(run)

    bench = sub.add_parser("bench", parents=[common, backend],
                           help="run and score a dataset")
    bench.add_argument('dataset', help="JSONL question set")
    bench.add_argument('--source', type=str, default="synth",
                       help="source tag for items that carry none")
    bench.add_argument('--limit', type=int, default=None)

    collect = sub.add_parser("collect", parents=[common, backend],
                             help="collect visual chain-of-thought records")
    collect.add_argument('dataset', help="JSONL question set with gold answers")
    collect.add_argument('--source', type=str, default="synth")
    collect.add_argument('--limit', type=int, default=None)
    collect.add_argument('-o', '--output', type=str, default=None,
                         help="records JSONL (default OUTPUT_DIR/EXP_NAME/<format>.jsonl)")
    collect.add_argument('--format', type=str, default="vcot", choices=["vcot", "cot", "qa"],
                         help="vcot: full records; cot: without focus areas; qa: question and answer")

    synth = sub.add_parser("render-synth", parents=[common],
                           help="render synthetic fixtures with ground truth")
    synth.add_argument('out_dir')
    synth.add_argument('--num', type=int, default=None, help="default SYNTH.NUM")
    synth.add_argument('--seed', type=int, default=None, help="default SEED")
    synth.add_argument('--kinds', nargs="+", default=None,
                       choices=["table"] + [kind.value for kind in ChartKind])
    synth.add_argument('--questions_per_image', type=int, default=1)

    return parser


def parse_opt(argv=None):
    args = get_parser().parse_args(argv)
    return args
