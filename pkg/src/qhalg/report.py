"""Rendering of report trees: JSON (stable keys) and an indented text form."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .exactlin import Mod


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Mod):
        return str(x)
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def dumps(tree) -> str:
    return json.dumps(jsonable(tree), indent=2, sort_keys=True) + "\n"


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _scalar(v) -> str:
    if v is True:
        return "yes"
    if v is False:
        return "no"
    if v is None:
        return "-"
    return str(v)


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _matrix(v) -> bool:
    return isinstance(v, list) and v and all(_flat(r) for r in v)


def render_human(tree, indent: int = 0) -> str:
    lines: list[str] = []
    _render(jsonable(tree), indent, lines)
    return "\n".join(lines) + "\n"


def _render(node, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(node, dict):
        for k, v in node.items():
            if isinstance(v, dict) and v:
                lines.append(f"{pad}{k}:")
                _render(v, indent + 1, lines)
            elif _flat(v):
                lines.append(f"{pad}{k}: [{', '.join(_scalar(x) for x in v)}]")
            elif _matrix(v):
                lines.append(f"{pad}{k}:")
                for row in v:
                    lines.append(f"{pad}  [{', '.join(_scalar(x) for x in row)}]")
            elif isinstance(v, list):
                lines.append(f"{pad}{k}:")
                for i, item in enumerate(v):
                    lines.append(f"{pad}  - #{i + 1}")
                    _render(item, indent + 2, lines)
            else:
                lines.append(f"{pad}{k}: {_scalar(v) if v != {} else '{}'}")
    elif isinstance(node, list):
        for item in node:
            _render(item, indent, lines)
    else:
        lines.append(f"{pad}{_scalar(node)}")


def render_selftest_human(rep: dict) -> str:
    lines = [f"selftest over {rep['field']} (seed {rep['seed']})"]
    for c in rep["criteria"]:
        lines.append(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['id']}. {c['title']}")
    lines.append(f"{rep['passed']}/{rep['total']} criteria passed")
    return "\n".join(lines) + "\n"


def emit(tree, fmt: str, human=None) -> str:
    if fmt == "json":
        return dumps(tree)
    return human(tree) if human else render_human(tree)
