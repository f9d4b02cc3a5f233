"""Parse heuristic source into a normalized, ordered label tree.

Normalization rules:

* comments and blank lines vanish with parsing; import statements, decorators,
  docstrings and type annotations are dropped outright;
* identifiers (variables, parameters, function/class names) become
  occurrence-ordered placeholders ``VAR0, VAR1, ...`` -- numbering restarts for
  each top-level function, and nested scopes resolve free names lexically so a
  closure keeps the placeholder of the variable it captures;
* numeric literals (including sign-prefixed ones) collapse to ``NUM``, strings
  and bytes to ``STR``; booleans keep their value, which is a control-flow fact
  rather than a tunable constant;
* attribute and keyword-argument names are preserved verbatim: renaming a
  library call is a genuine structural change, unlike renaming a local.
"""

from __future__ import annotations

import ast
from functools import lru_cache

from ..errors import ParseError

_NUM = "NUM"
_STR = "STR"


class NormalizedTree:
    """Ordered rooted label tree in preorder layout (root at index 0).

    ``labels[i]`` is the node label and ``children[i]`` the ordered child
    indices of node ``i``.  Instances are immutable, hashable and compare
    structurally.
    """

    __slots__ = ("labels", "children", "_hash")

    def __init__(self, labels: tuple[str, ...], children: tuple[tuple[int, ...], ...]):
        if not labels:
            raise ValueError("a normalized tree has at least one node")
        self.labels = labels
        self.children = children
        self._hash = hash((labels, children))

    @property
    def root(self) -> int:
        return 0

    @property
    def size(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NormalizedTree)
            and self.labels == other.labels
            and self.children == other.children
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"NormalizedTree(size={self.size})"

    def pretty(self) -> str:
        """Indented one-node-per-line rendering, useful in test failures."""
        lines: list[str] = []

        def walk(i: int, depth: int) -> None:
            lines.append("  " * depth + self.labels[i])
            for c in self.children[i]:
                walk(c, depth + 1)

        walk(0, 0)
        return "\n".join(lines)


class _Scope:
    """One lexical name table. Top-level scopes own a placeholder counter;
    nested scopes share the enclosing function's counter."""

    __slots__ = ("table", "counter")

    def __init__(self, counter: list[int]):
        self.table: dict[str, str] = {}
        self.counter = counter


class _Builder:
    def __init__(self) -> None:
        self.labels: list[str] = []
        self.children: list[list[int]] = []
        self._scopes = [_Scope([0])]

    # -- scope handling -----------------------------------------------------

    def _push_scope(self, fresh_counter: bool) -> None:
        counter = [0] if fresh_counter else self._scopes[-1].counter
        self._scopes.append(_Scope(counter))

    def _pop_scope(self) -> None:
        self._scopes.pop()

    def _placeholder(self, name: str) -> str:
        for scope in reversed(self._scopes):
            if name in scope.table:
                return scope.table[name]
        scope = self._scopes[-1]
        tag = f"VAR{scope.counter[0]}"
        scope.counter[0] += 1
        scope.table[name] = tag
        return tag

    # -- node emission ------------------------------------------------------

    def _emit(self, label: str) -> int:
        self.labels.append(label)
        self.children.append([])
        return len(self.labels) - 1

    def _attach(self, parent: int, child: int | None) -> None:
        if child is not None:
            self.children[parent].append(child)

    # -- visitors -----------------------------------------------------------

    def build(self, node: ast.AST) -> int | None:
        if isinstance(node, (ast.Import, ast.ImportFrom)):
            return None
        if isinstance(node, ast.expr_context):
            return None

        if isinstance(node, ast.Module):
            idx = self._emit("Module")
            for stmt in _strip_docstring(node.body):
                self._attach(idx, self.build(stmt))
            return idx

        if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
            return self._build_function(node)

        if isinstance(node, ast.ClassDef):
            label = f"ClassDef:{self._placeholder(node.name)}"
            idx = self._emit(label)
            for base in node.bases:
                self._attach(idx, self.build(base))
            for kw in node.keywords:
                self._attach(idx, self.build(kw))
            self._push_scope(fresh_counter=False)
            for stmt in _strip_docstring(node.body):
                self._attach(idx, self.build(stmt))
            self._pop_scope()
            return idx

        if isinstance(node, ast.Lambda):
            idx = self._emit("Lambda")
            self._push_scope(fresh_counter=False)
            self._attach(idx, self.build(node.args))
            self._attach(idx, self.build(node.body))
            self._pop_scope()
            return idx

        if isinstance(node, ast.Name):
            return self._emit(self._placeholder(node.id))

        if isinstance(node, ast.arg):
            return self._emit(self._placeholder(node.arg))

        if isinstance(node, ast.Attribute):
            idx = self._emit(f"Attribute:{node.attr}")
            self._attach(idx, self.build(node.value))
            return idx

        if isinstance(node, ast.keyword):
            label = f"keyword:{node.arg}" if node.arg is not None else "keyword:**"
            idx = self._emit(label)
            self._attach(idx, self.build(node.value))
            return idx

        if isinstance(node, ast.Constant):
            return self._emit(_constant_label(node.value))

        if isinstance(node, ast.UnaryOp) and _is_signed_number(node):
            return self._emit(_NUM)

        if isinstance(node, (ast.Global, ast.Nonlocal)):
            idx = self._emit(type(node).__name__)
            for name in node.names:
                self._attach(idx, self._emit(self._placeholder(name)))
            return idx

        if isinstance(node, ast.AnnAssign):
            # keep target and value, drop the annotation
            idx = self._emit("AnnAssign")
            self._attach(idx, self.build(node.target))
            if node.value is not None:
                self._attach(idx, self.build(node.value))
            return idx

        if isinstance(node, (ast.operator, ast.boolop, ast.cmpop, ast.unaryop)):
            return self._emit(type(node).__name__)

        if isinstance(node, ast.alias):
            return None

        # generic structural node: label by kind, recurse into AST children
        idx = self._emit(type(node).__name__)
        for child in ast.iter_child_nodes(node):
            self._attach(idx, self.build(child))
        return idx

    def _build_function(self, node: ast.FunctionDef | ast.AsyncFunctionDef) -> int:
        label = f"FunctionDef:{self._placeholder(node.name)}"
        idx = self._emit(label)
        # a function defined at module level restarts placeholder numbering;
        # nested defs keep counting within their enclosing function
        self._push_scope(fresh_counter=len(self._scopes) == 1)
        args_idx = self._emit("arguments")
        self._attach(idx, args_idx)
        a = node.args
        for arg in [*a.posonlyargs, *a.args]:
            self._attach(args_idx, self.build(arg))
        if a.vararg is not None:
            self._attach(args_idx, self.build(a.vararg))
        for arg in a.kwonlyargs:
            self._attach(args_idx, self.build(arg))
        if a.kwarg is not None:
            self._attach(args_idx, self.build(a.kwarg))
        for default in [*a.defaults, *[d for d in a.kw_defaults if d is not None]]:
            self._attach(args_idx, self.build(default))
        for stmt in _strip_docstring(node.body):
            self._attach(idx, self.build(stmt))
        self._pop_scope()
        return idx

    def finish(self, root: int) -> NormalizedTree:
        order: list[int] = []
        remap: dict[int, int] = {}

        def walk(i: int) -> None:
            remap[i] = len(order)
            order.append(i)
            for c in self.children[i]:
                walk(c)

        walk(root)
        labels = tuple(self.labels[i] for i in order)
        kids = tuple(tuple(remap[c] for c in self.children[i]) for i in order)
        return NormalizedTree(labels, kids)


def _strip_docstring(body: list[ast.stmt]) -> list[ast.stmt]:
    if (
        body
        and isinstance(body[0], ast.Expr)
        and isinstance(body[0].value, ast.Constant)
        and isinstance(body[0].value.value, str)
    ):
        return body[1:]
    return body


def _constant_label(value) -> str:
    if isinstance(value, bool):  # bool is a subclass of int, test it first
        return f"Bool:{value}"
    if isinstance(value, (int, float, complex)):
        return _NUM
    if isinstance(value, (str, bytes)):
        return _STR
    if value is None:
        return "NoneLit"
    if value is Ellipsis:
        return "EllipsisLit"
    return type(value).__name__


def _is_signed_number(node: ast.UnaryOp) -> bool:
    return isinstance(node.op, (ast.USub, ast.UAdd)) and (
        isinstance(node.operand, ast.Constant)
        and isinstance(node.operand.value, (int, float, complex))
        and not isinstance(node.operand.value, bool)
    )


@lru_cache(maxsize=8192)
def normalize(source: str) -> NormalizedTree:
    """Parse ``source`` and return its normalized tree.

    Deterministic for a given source.  Raises :class:`ParseError` when the
    source does not parse; callers treat that as a discarded candidate.
    """
    try:
        module = ast.parse(source)
    except (SyntaxError, ValueError) as exc:
        raise ParseError(f"candidate source does not parse: {exc}") from exc
    builder = _Builder()
    root = builder.build(module)
    assert root is not None
    return builder.finish(root)
