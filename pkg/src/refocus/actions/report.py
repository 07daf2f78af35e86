# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""Run statistics: per-source accuracy, edit rate, turns and failures."""
import json
from collections import Counter, OrderedDict
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


@dataclass
class SourceStats:
    count: int = 0
    correct: int = 0
    edited: int = 0
    turns: int = 0
    failures: Counter = field(default_factory=Counter)

    def add(self, episode, correct):
        self.count += 1
        self.correct += int(bool(correct))
        self.edited += int(episode.edited)
        self.turns += len(episode.turns)
        if not episode.answered:
            self.failures[episode.reason or "unknown"] += 1

    def to_dict(self):
        return {
            "count": self.count,
            "correct": self.correct,
            "accuracy": self.correct / self.count if self.count else 0.,
            "edit_rate": self.edited / self.count if self.count else 0.,
            "mean_turns": self.turns / self.count if self.count else 0.,
            "failures": {reason: n / self.count for reason, n in sorted(self.failures.items())},
            "failure_counts": dict(sorted(self.failures.items())),
        }


@dataclass
class RunReport:
    overall: SourceStats
    per_source: "OrderedDict[str, SourceStats]"
    meta: dict = field(default_factory=dict)

    @property
    def accuracy(self):
        return self.overall.to_dict()["accuracy"]

    @property
    def failed(self):
        return sum(self.overall.failures.values())

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "overall": self.overall.to_dict(),
            "per_source": {src: stats.to_dict() for src, stats in self.per_source.items()},
            "meta": dict(self.meta),
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)

    def to_text(self):
        header = f"{'source':<10} {'n':>5} {'acc':>7} {'edit':>7} {'turns':>6}  failures"
        lines = [header, "-" * len(header)]
        rows = list(self.per_source.items()) + [("all", self.overall)]
        for source, stats in rows:
            data = stats.to_dict()
            failures = ", ".join(f"{k}={v}" for k, v in data["failure_counts"].items()) or "-"
            lines.append(f"{source:<10} {data['count']:>5} {data['accuracy']:>7.3f} "
                         f"{data['edit_rate']:>7.3f} {data['mean_turns']:>6.2f}  {failures}")
        return "\n".join(lines)

    def log_to(self, writer, step=0):
        """Writes scalars and the text table to a tensorboardX SummaryWriter."""
        for source, stats in list(self.per_source.items()) + [("all", self.overall)]:
            data = stats.to_dict()
            for key in ("accuracy", "edit_rate", "mean_turns"):
                writer.add_scalar(f"{source}/{key}", data[key], step)
        writer.add_text("report", "    " + self.to_text().replace("\n", "\n    "), step)


def report(episodes, scores, meta=None):
    """`scores` is aligned with `episodes`: one boolean per episode."""
    episodes, scores = list(episodes), list(scores)
    if len(episodes) != len(scores):
        raise ValueError("episodes and scores must be aligned")
    overall = SourceStats()
    per_source = OrderedDict()
    for episode, correct in zip(episodes, scores):
        overall.add(episode, correct)
        per_source.setdefault(episode.source, SourceStats()).add(episode, correct)
    return RunReport(overall, OrderedDict(sorted(per_source.items())), dict(meta or {}))
