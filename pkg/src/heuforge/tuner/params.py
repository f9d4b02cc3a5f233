"""Locate tunable numeric literals and rewrite them in place.

The primary path binds the names mentioned in a response's key-parameters
section to simple ``name = <number>`` assignments; when that yields nothing,
every such assignment at module level or directly in a function body counts.
Only the literal token is ever rewritten, so substitution can never change
the normalized structure of the candidate.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass

_IDENT_RE = re.compile(r"[A-Za-z_]\w*")


@dataclass(frozen=True)
class ParamSpec:
    name: str
    value: float
    is_int: bool
    lineno: int  # 1-based, span of the (possibly sign-prefixed) literal
    col: int
    end_col: int

    @property
    def position(self) -> tuple[int, int]:
        return (self.lineno, self.col)


def _literal_value(node: ast.expr):
    """(value, is_int) for a numeric literal, folding a leading sign."""
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _literal_value(node.operand)
        if inner is None:
            return None
        value, is_int = inner
        return (-value if isinstance(node.op, ast.USub) else value, is_int)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        if isinstance(node.value, bool):
            return None
        return (float(node.value), isinstance(node.value, int))
    return None


def _collect_assignments(module: ast.Module) -> list[ParamSpec]:
    bodies: list[list[ast.stmt]] = [module.body]
    for node in ast.walk(module):
        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
            bodies.append(node.body)
    specs: list[ParamSpec] = []
    seen: set[str] = set()
    for body in bodies:
        for stmt in body:
            if not isinstance(stmt, ast.Assign) or len(stmt.targets) != 1:
                continue
            target = stmt.targets[0]
            if not isinstance(target, ast.Name):
                continue
            literal = _literal_value(stmt.value)
            if literal is None:
                continue
            if stmt.value.lineno != stmt.value.end_lineno:
                continue  # multi-line literal spans are not rewritable
            if target.id in seen:
                continue  # the first binding is the initial value
            value, is_int = literal
            seen.add(target.id)
            specs.append(
                ParamSpec(
                    name=target.id,
                    value=value,
                    is_int=is_int,
                    lineno=stmt.value.lineno,
                    col=stmt.value.col_offset,
                    end_col=stmt.value.end_col_offset,
                )
            )
    specs.sort(key=lambda s: s.position)
    return specs


def identify_params(code: str, key_params_text: str = "") -> list[ParamSpec]:
    """Tunable constants of a candidate, ordered by source position.

    Never raises on odd inputs: an unparseable candidate or one without
    numeric assignments simply yields an empty list (tuning is skipped).
    """
    try:
        module = ast.parse(code)
    except (SyntaxError, ValueError):
        return []
    candidates = _collect_assignments(module)
    if key_params_text:
        named = set(_IDENT_RE.findall(key_params_text))
        matched = [spec for spec in candidates if spec.name in named]
        if matched:
            return matched
    return candidates


def _format_value(value: float, is_int: bool) -> str:
    if is_int:
        return str(int(round(value)))
    return repr(float(value))


def substitute(code: str, specs: list[ParamSpec], values: tuple[float, ...] | list[float]) -> str:
    """Rewrite each spec's literal span with the corresponding value.

    Integer-born parameters stay integers so indexing and range arithmetic in
    the candidate keep working.
    """
    if len(specs) != len(values):
        raise ValueError("one value per parameter spec required")
    lines = code.splitlines(keepends=True)
    for spec, value in sorted(
        zip(specs, values), key=lambda pair: pair[0].position, reverse=True
    ):
        row = lines[spec.lineno - 1]
        lines[spec.lineno - 1] = (
            row[: spec.col] + _format_value(value, spec.is_int) + row[spec.end_col :]
        )
    return "".join(lines)
