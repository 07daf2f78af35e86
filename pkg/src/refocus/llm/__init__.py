# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

from .build import build_client
from .client import (ChatClient, ChatMessage, ChatRequest, ImagePart,
                     OpenAIChatClient, Role, TextPart, image_data_url,
                     request_to_wire)
from .replay import (HINT_MARKER, RecordingClient, ReplayClient, ReplayStore,
                     ScriptedClient, canonical_request, fingerprint,
                     load_script)
