"""Front door for prompting: render, digest, complete, parse."""

from __future__ import annotations

from .context import PromptContext, Strategy
from .parsing import MalformedResponse, ParsedResponse, parse_response
from .templates import render_prompt
from .transport import request_digest


class Gateway:
    """Binds a transport to the prompt templates and response parser."""

    def __init__(self, transport, temperature: float = 1.0, parents_k: int = 2):
        self.transport = transport
        self.temperature = temperature
        self.parents_k = parents_k

    def complete_raw(self, strategy: Strategy, context: PromptContext) -> str:
        """Render the prompt and return the raw completion text."""
        k = self.parents_k if strategy in (Strategy.E1, Strategy.E2) else None
        messages = render_prompt(strategy, context, k=k)
        digest = request_digest(strategy.value, messages, self.temperature)
        return self.transport.complete(digest, messages, self.temperature)

    def generate(
        self, strategy: Strategy, context: PromptContext
    ) -> ParsedResponse | MalformedResponse:
        """Full generation cycle: prompt, complete, parse."""
        return parse_response(self.complete_raw(strategy, context))
