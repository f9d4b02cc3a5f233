"""Prompt rendering, chat-completion transports, and response parsing."""

from .context import ParentInfo, PromptContext, Strategy
from .templates import render_prompt
from .parsing import MalformedResponse, ParsedResponse, parse_response
from .transport import (
    LiveTransport,
    RecordingTransport,
    ReplayTransport,
    ScriptedTransport,
    request_digest,
)
from .gateway import Gateway

__all__ = [
    "Strategy",
    "ParentInfo",
    "PromptContext",
    "render_prompt",
    "ParsedResponse",
    "MalformedResponse",
    "parse_response",
    "request_digest",
    "LiveTransport",
    "ReplayTransport",
    "RecordingTransport",
    "ScriptedTransport",
    "Gateway",
]
