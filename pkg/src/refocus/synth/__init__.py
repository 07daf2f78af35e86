# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

from .fixtures import (TEAM_STANDINGS_ANSWER, TEAM_STANDINGS_QUESTION,
                       export_fixtures, synth_questions, team_standings_spec)
from .glyphs import draw_text, render_text, text_height, text_width
from .render import (ChartSpec, GroundTruth, TableSpec, TableStyle, make_corpus,
                     random_chart_spec, random_table_spec, render, render_chart,
                     render_table)
