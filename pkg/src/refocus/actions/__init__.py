# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

from .collect import (EXPORT_FORMATS, CoTRecord, QARecord, VCoTRecord, collect_vcot,
                      format_cot_input, format_vcot_input, parse_focus_areas,
                      read_records, record_from_episode, write_records)
from .report import RunReport, SourceStats, report
from .scoring import (ScoreConfig, default_score_config, normalize, score,
                      score_config_for, score_episode)
