# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

from .edit_tools import (METHODS, EditRecord, ToolId, ToolSpec, ToolStyle, apply_tool,
                         replay_edits, tool_by_surface_name, tool_registry,
                         tool_spec, tools_for_layout)
from .toolcall import (ANSWER_RE, Diagnostic, ParseReport, ToolCall,
                       extract_calls, render_call, render_calls,
                       validate_calls)
