"""Render the seven chat prompts.

The rendered structure is pinned by golden-file tests; placeholders are
substituted verbatim and the insight block is appended only when an insight is
actually present.
"""

from __future__ import annotations

from ..errors import ArityError
from .context import (
    CROSSOVER_STRATEGIES,
    MUTATION_STRATEGIES,
    ParentInfo,
    PromptContext,
    Strategy,
)

ENGINEER_SYSTEM = (
    "You are an expert algorithm engineer. Design efficient heuristic functions. "
    "Output your algorithm description inside a brace, then implement it in Python."
)

ANALYST_SYSTEM = (
    "You are an expert in the domain of optimization heuristics. Identify the "
    "mechanisms responsible for the performance gap and explain why it is "
    "effective in two paragraphs."
)

_FORMAT_BLOCK = (
    "You must strictly follow this output format:\n"
    "- [Thought]: Summarize in exactly 2 sentences: the core idea.\n"
    "- [KEY PARAMETERS]: {params_line}\n"
    "- [Code]: Complete executable Python code in a code block. Include all imports."
)

_PARAMS_DEFAULT = "List a moderate number of tunable parameters and their roles."
_PARAMS_CROSSOVER = (
    "List a moderate number of tunable parameters and their roles "
    "(avoid too many hardcoded values)."
)
_PARAMS_REFINE = "List the key controllable factors and their roles (for downstream optimization)."

_TASK_LINES = {
    Strategy.E1: "Create a new algorithm that has a totally different form from the given ones.",
    Strategy.E2: (
        "Identify the common backbone idea in these algorithms, then create a new "
        "algorithm motivated from it but with a different form."
    ),
    Strategy.M1: (
        "Create a new algorithm that has a different form but can be a modified "
        "version of the provided one."
    ),
    Strategy.M2: (
        "Identify the main scoring components and create a new algorithm with "
        "different configurations or score function."
    ),
}

_M3_TASK = (
    "Identify the main components in the function below. Analyze whether any "
    "components can be overfit to specific instances. Simplify or optimize the "
    "components to enhance generalization. Provide the different revised code, "
    "keeping the function name, inputs, and outputs unchanged."
)


def _code_block(code: str) -> str:
    return f"```python\n{code.strip()}\n```"


def _score(value: float) -> str:
    return format(value, ".6g")


def _header(context: PromptContext) -> str:
    return (
        f"Problem Description: {context.problem_desc}\n"
        f"Function Signature: {context.func_name}\n"
        "Goal: Design a novel heuristic algorithm.\n"
    )


def _parents_block(parents: list[ParentInfo]) -> str:
    lines = [f"I have {len(parents)} existing algorithms:"]
    for i, parent in enumerate(parents, start=1):
        lines.append(f"No.{i} algorithm:")
        lines.append(parent.thought.strip())
        lines.append("Code:")
        lines.append(_code_block(parent.code))
    return "\n".join(lines)


def _insight_block(context: PromptContext, include_neighbor: bool) -> str:
    lines = []
    if context.local_insight:
        lines.append(context.local_insight.strip())
    if include_neighbor and context.neighbor_insight:
        lines.append(context.neighbor_insight.strip())
    if not lines:
        return ""
    return "\n\nContextual Insight:\n" + "\n".join(lines)


def render_prompt(
    strategy: Strategy, context: PromptContext, k: int | None = None
) -> list[dict[str, str]]:
    """Ordered chat messages (system + user) for a strategy and context."""
    if strategy in CROSSOVER_STRATEGIES:
        want = k if k is not None else 2
        if len(context.parents) != want:
            raise ArityError(
                f"{strategy.value} needs {want} parents, got {len(context.parents)}"
            )
        fmt = _FORMAT_BLOCK.format(params_line=_PARAMS_CROSSOVER)
        user = (
            _header(context)
            + "\n"
            + _parents_block(context.parents)
            + "\n\n"
            + f"Task: Implement as a function named {context.func_name}_v2 with the same signature.\n"
            + _TASK_LINES[strategy]
            + "\n\n"
            + fmt
            + _insight_block(context, include_neighbor=True)
        )
        return [
            {"role": "system", "content": ENGINEER_SYSTEM},
            {"role": "user", "content": user},
        ]

    if strategy in MUTATION_STRATEGIES:
        if len(context.parents) != 1:
            raise ArityError(f"{strategy.value} needs exactly 1 parent, got {len(context.parents)}")
        parent = context.parents[0]
        if strategy is Strategy.M3:
            body = "Current algorithm Code:\n" + _code_block(parent.code)
            task = (
                f"Task: Implement as a function named {context.func_name}_v2 "
                "with the same signature.\n\n" + _M3_TASK
            )
            params_line = _PARAMS_DEFAULT
            include_neighbor = False
        else:
            body = (
                "Current algorithm:\n"
                + parent.thought.strip()
                + "\nCode:\n"
                + _code_block(parent.code)
            )
            task = (
                f"Task: Implement as a function named {context.func_name}_v2 "
                "with the same signature.\n" + _TASK_LINES[strategy]
            )
            params_line = _PARAMS_REFINE if strategy is Strategy.M2 else _PARAMS_DEFAULT
            include_neighbor = strategy is Strategy.M1
        user = (
            _header(context)
            + "\n"
            + body
            + "\n\n"
            + task
            + "\n\n"
            + _FORMAT_BLOCK.format(params_line=params_line)
            + _insight_block(context, include_neighbor=include_neighbor)
        )
        return [
            {"role": "system", "content": ENGINEER_SYSTEM},
            {"role": "user", "content": user},
        ]

    if strategy is Strategy.INSIGHT:
        if len(context.parents) != 2:
            raise ArityError("INSIGHT needs a best/worst pair")
        best, worst = context.parents
        user = (
            f"High Performance (Score: {_score(best.objective)}):\n"
            + _code_block(best.code)
            + "\n\n"
            + f"Low Performance (Score: {_score(worst.objective)}):\n"
            + _code_block(worst.code)
            + "\n\n"
            + "Instruction:\n"
            + ANALYST_SYSTEM
        )
        return [
            {"role": "system", "content": ANALYST_SYSTEM},
            {"role": "user", "content": user},
        ]

    if strategy is Strategy.RESET:
        if context.global_elite is None:
            raise ArityError("RESET needs the global elite")
        elite = context.global_elite
        user = (
            f"Reference Elite (Score: {_score(elite.objective)}):\n"
            + _code_block(elite.code)
            + "\n\n"
            + "Instruction:\n"
            + "You are an expert in the domain of optimization heuristics. Extract "
            + "domain insights from the Elite solution provided above, then create a "
            + "structurally novel and advanced algorithm. Output the design rationale "
            + f"followed by the implementation of {context.func_name}_v2.\n\n"
            + _FORMAT_BLOCK.format(params_line=_PARAMS_DEFAULT)
        )
        return [
            {"role": "system", "content": ENGINEER_SYSTEM},
            {"role": "user", "content": user},
        ]

    raise ArityError(f"unknown strategy {strategy!r}")
