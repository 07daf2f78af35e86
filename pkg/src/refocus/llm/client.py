# Copyright 2022 Yahoo, Licensed under the terms of the Apache License, Version 2.0.
# See LICENSE file in project root for terms.

"""
Chat messages with image parts, and the networked OpenAI-compatible client.

Images travel as `data:image/png;base64,...` URLs inside `image_url` content
parts, the shape every OpenAI-compatible chat/completions server accepts.
"""
import base64
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple, Union

import openai

from ..errors import AuthError, TransportError
from ..imaging.raster import Raster, save_png

logger = logging.getLogger(__name__)


class Role(str, Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


@dataclass(frozen=True)
class TextPart:
    text: str


@dataclass(frozen=True)
class ImagePart:
    image: Raster


Part = Union[TextPart, ImagePart]


@dataclass(frozen=True)
class ChatMessage:
    role: Role
    parts: Tuple[Part, ...]

    def __post_init__(self):
        object.__setattr__(self, "role", Role(self.role))
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise ValueError("a message needs at least one part")
        if self.role == Role.SYSTEM and \
                any(isinstance(p, ImagePart) for p in self.parts):
            raise ValueError("system messages are text-only")

    @classmethod
    def system(cls, text):
        return cls(Role.SYSTEM, (TextPart(text),))

    @classmethod
    def user(cls, *parts):
        return cls(Role.USER, tuple(TextPart(p) if isinstance(p, str) else p
                                    for p in parts))

    @classmethod
    def assistant(cls, text):
        return cls(Role.ASSISTANT, (TextPart(text),))

    @property
    def text(self):
        return "\n".join(p.text for p in self.parts if isinstance(p, TextPart))

    @property
    def images(self):
        return [p.image for p in self.parts if isinstance(p, ImagePart)]


@dataclass(frozen=True)
class ChatRequest:
    messages: Tuple[ChatMessage, ...]
    temperature: float = 0.
    max_output_tokens: int = 1024
    model_name: str = "gpt-4o-2024-05-13"
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "messages", tuple(self.messages))
        if not self.messages:
            raise ValueError("a request needs at least one message")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be >= 1")


def image_data_url(raster):
    return "data:image/png;base64," + base64.b64encode(save_png(raster)).decode("ascii")


def message_to_wire(message):
    if message.role == Role.SYSTEM or all(isinstance(p, TextPart) for p in message.parts):
        return {"role": message.role.value, "content": message.text}
    content = []
    for part in message.parts:
        if isinstance(part, TextPart):
            content.append({"type": "text", "text": part.text})
        else:
            content.append({"type": "image_url",
                            "image_url": {"url": image_data_url(part.image)}})
    return {"role": message.role.value, "content": content}


def request_to_wire(request):
    return {
        "model": request.model_name,
        "temperature": request.temperature,
        "max_tokens": request.max_output_tokens,
        "messages": [message_to_wire(m) for m in request.messages],
    }


class ChatClient:
    """Anything that turns a ChatRequest into assistant text. Must be thread-safe."""

    def complete(self, request):
        raise NotImplementedError


class OpenAIChatClient(ChatClient):
    """
    Speaks chat/completions through the `openai` SDK, whose built-in retry
    applies exponential backoff to connection errors, timeouts, 429 and 5xx.
    """

    def __init__(self, api_base, api_key, timeout=120., max_attempts=3):
        if not api_key:
            raise AuthError("no API key; set REFOCUS_API_KEY or OPENAI_API_KEY")
        self.api_base = api_base
        self._client = openai.OpenAI(base_url=api_base, api_key=api_key,
                                     timeout=timeout,
                                     max_retries=max(0, max_attempts - 1))

    @classmethod
    def from_config(cls, cfg, api_key):
        return cls(cfg.LLM.API_BASE, api_key, cfg.LLM.TIMEOUT, cfg.LLM.MAX_ATTEMPTS)

    def complete(self, request):
        try:
            completion = self._client.chat.completions.create(**request_to_wire(request))
        except (openai.AuthenticationError, openai.PermissionDeniedError) as err:
            raise AuthError(f"endpoint rejected credentials: {err}") from err
        except (openai.APIConnectionError, openai.RateLimitError,
                openai.InternalServerError) as err:
            raise TransportError(f"{type(err).__name__}: {err}") from err
        except openai.APIStatusError as err:
            raise TransportError(f"HTTP {err.status_code}: {err}") from err
        if not completion.choices:
            raise TransportError("response carried no choices")
        text = completion.choices[0].message.content or ""
        logger.debug("%s returned %d chars", request.model_name, len(text))
        return text
