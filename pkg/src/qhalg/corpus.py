"""The built-in test corpus of small basic algebras, as quiver specs."""

from __future__ import annotations

from .exactlin import Field
from .quiver import build_path_algebra, parse_spec

SPECS = {
    "k": """
algebra k
vertices 1
""",
    "kxk": """
algebra kxk
vertices 1 2
""",
    "A2": """
algebra A2
vertices 1 2
arrow a : 1 -> 2
""",
    "A3_ba": """
# the linear quiver 1 -> 2 -> 3 with the composite killed
algebra A3_ba
vertices 1 2 3
arrow a : 1 -> 2
arrow b : 2 -> 3
relation b.a
""",
    "square": """
# commutative square
algebra square
vertices 1 2 3 4
arrow a : 1 -> 2
arrow b : 1 -> 3
arrow c : 2 -> 4
arrow d : 3 -> 4
relation c.a - d.b
""",
    "dual2": """
algebra dual2
vertices 1
arrow x : 1 -> 1
relation x.x
""",
    "trunc3": """
algebra trunc3
vertices 1
arrow x : 1 -> 1
relation x.x.x
""",
}

CORPUS_NAMES = list(SPECS)

# algebras whose declaration order is quasi-hereditary (directed quivers)
DIRECTED = ["k", "kxk", "A2", "A3_ba", "square"]


def corpus_algebra(name: str, field: Field | None = None):
    return build_path_algebra(parse_spec(SPECS[name], field), apply_order=True)


def corpus(field: Field | None = None) -> dict:
    return {name: corpus_algebra(name, field) for name in CORPUS_NAMES}
