"""Parse a raw completion into thought / key parameters / code.

Lenient by design: extra prose around the sections is tolerated and a missing
[KEY PARAMETERS] section yields an empty string.  A missing code block or a
block without a function definition is fatal -- the code is the genotype --
and reported as a :class:`MalformedResponse` value rather than an exception,
so the parser is total over arbitrary text.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass

_SECTION_RE = {
    "thought": re.compile(
        r"\[Thought\][ \t]*:?[ \t]*(.*?)(?=\n\s*\[|\n\s*```|\Z)", re.S | re.I
    ),
    "key_params": re.compile(
        r"\[KEY PARAMETERS\][ \t]*:?[ \t]*(.*?)(?=\n\s*\[|\n\s*```|\Z)", re.S | re.I
    ),
}
_FENCE_RE = re.compile(r"```(?:[A-Za-z0-9_+-]*)\n(.*?)```", re.S)
_DEF_RE = re.compile(r"^def\s+([A-Za-z_]\w*)\s*\(", re.M)


@dataclass(frozen=True)
class ParsedResponse:
    thought: str
    key_params: str
    code: str
    entry: str


@dataclass(frozen=True)
class MalformedResponse:
    reason: str


def _detect_entry(code: str) -> str | None:
    names: list[str] = []
    try:
        module = ast.parse(code)
    except (SyntaxError, ValueError):
        names = _DEF_RE.findall(code)
    else:
        names = [
            node.name
            for node in module.body
            if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef))
        ]
    if not names:
        return None
    for name in names:
        if name.endswith("_v2"):
            return name
    return names[-1]


def parse_response(raw: str) -> ParsedResponse | MalformedResponse:
    if not isinstance(raw, str) or not raw.strip():
        return MalformedResponse("empty response")
    fence = _FENCE_RE.search(raw)
    if fence is None:
        return MalformedResponse("no fenced code block")
    code = fence.group(1).strip()
    if not code:
        return MalformedResponse("empty code block")
    entry = _detect_entry(code)
    if entry is None:
        return MalformedResponse("code block contains no function definition")
    thought_match = _SECTION_RE["thought"].search(raw)
    params_match = _SECTION_RE["key_params"].search(raw)
    return ParsedResponse(
        thought=thought_match.group(1).strip() if thought_match else "",
        key_params=params_match.group(1).strip() if params_match else "",
        code=code,
        entry=entry,
    )
