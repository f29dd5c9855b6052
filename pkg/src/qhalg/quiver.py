"""Quivers with relations: the line-oriented spec format and path algebras.

A path is stored as ``(source, arrows)`` where ``arrows`` is a tuple of
arrow indices in traversal order.  Labels print in function order, so the
path "first a, then b" is written ``b.a``; the trivial path at vertex ``v``
is written ``e_v``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .exactlin import QQ, Echelon, Field, ScalarParseError, field_from_tag

DEFAULT_DEGREE_BOUND = 64


class SpecError(ValueError):
    """Malformed spec text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


class InfiniteDimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    label: str
    source: int
    target: int


@dataclass
class Quiver:
    vertices: list[str]
    arrows: list[Arrow] = field(default_factory=list)

    def vertex_index(self, label: str) -> int:
        return self.vertices.index(label)

    def arrow_index(self, label: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.label == label:
                return i
        raise KeyError(label)

    # paths --------------------------------------------------------------

    def target(self, path) -> int:
        src, arrows = path
        return self.arrows[arrows[-1]].target if arrows else src

    def concat(self, p, q):
        """Path "first p, then q", or None when not composable."""
        if self.target(p) != q[0]:
            return None
        return (p[0], p[1] + q[1])

    def path_label(self, path) -> str:
        src, arrows = path
        if not arrows:
            return f"e_{self.vertices[src]}"
        return ".".join(self.arrows[a].label for a in reversed(arrows))

    def paths_up_to(self, length: int) -> list:
        layer = [(v, ()) for v in range(len(self.vertices))]
        out = list(layer)
        for _ in range(length):
            nxt = []
            for p in layer:
                t = self.target(p)
                for ai, a in enumerate(self.arrows):
                    if a.source == t:
                        nxt.append((p[0], p[1] + (ai,)))
            out.extend(nxt)
            layer = nxt
            if not layer:
                break
        return out


def path_key(path):
    return (len(path[1]), path[1], path[0])


@dataclass
class Relation:
    terms: list  # (coefficient, path)
    line: int = 0

    @property
    def source(self) -> int:
        return self.terms[0][1][0]


@dataclass
class QuiverSpec:
    name: str
    quiver: Quiver
    relations: list[Relation]
    field: Field
    order: list[str] | None = None


_ARROW_RE = re.compile(r"^arrow\s+(\S+?)\s*:\s*(\S+)\s*->\s*(\S+)\s*$")
_LABEL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


def _split_terms(body: str):
    """Split ``body`` into signed term strings at top-level + and binary -."""
    terms, cur, sign = [], [], 1
    i = 0
    while i < len(body):
        ch = body[i]
        binary_minus = (
            ch == "-" and cur and "".join(cur).strip()
            and i + 1 < len(body) and body[i + 1].isspace() and body[i - 1].isspace()
        )
        if ch == "+" or binary_minus:
            terms.append((sign, "".join(cur)))
            cur, sign = [], (1 if ch == "+" else -1)
        else:
            cur.append(ch)
        i += 1
    terms.append((sign, "".join(cur)))
    return terms


def parse_spec(text: str, field_override: Field | None = None) -> QuiverSpec:
    name = "unnamed"
    fld: Field | None = None
    vertices: list[str] | None = None
    arrows: list[tuple[str, str, str, int]] = []
    raw_relations: list[tuple[str, int, int]] = []
    order = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        col = len(line) - len(line.lstrip()) + 1
        head, _, rest = stripped.partition(" ")
        rest = rest.strip()
        if head == "algebra":
            if not rest or " " in rest:
                raise SpecError("expected `algebra <name>`", lineno, col)
            name = rest
        elif head == "field":
            try:
                fld = field_from_tag(rest)
            except (ScalarParseError, ValueError) as exc:
                raise SpecError(str(exc), lineno, col + len(head) + 1) from exc
        elif head == "vertices":
            if vertices is not None:
                raise SpecError("vertices declared twice", lineno, col)
            vertices = rest.split()
            if not vertices:
                raise SpecError("no vertices declared", lineno, col)
            if len(set(vertices)) != len(vertices):
                raise SpecError("duplicate vertex label", lineno, col)
        elif head == "arrow":
            m = _ARROW_RE.match(stripped)
            if not m:
                raise SpecError("expected `arrow <label> : <src> -> <dst>`", lineno, col)
            label = m.group(1)
            if not _LABEL_RE.match(label):
                raise SpecError(f"bad arrow label {label!r}", lineno, col + 6)
            if label in seen:
                raise SpecError(f"duplicate arrow label {label!r}", lineno, col + 6)
            seen.add(label)
            arrows.append((label, m.group(2), m.group(3), lineno))
        elif head == "relation":
            if not rest:
                raise SpecError("empty relation", lineno, col)
            raw_relations.append((rest, lineno, col + len(head) + 1))
        elif head == "order":
            order = rest.split()
        else:
            raise SpecError(f"unknown directive {head!r}", lineno, col)

    if vertices is None:
        raise SpecError("missing `vertices` line")
    if field_override is not None:
        fld = field_override
    fld = fld or QQ
    q = Quiver(list(vertices))
    for label, s, t, lineno in arrows:
        for v in (s, t):
            if v not in vertices:
                raise SpecError(f"arrow {label!r} uses undeclared vertex {v!r}", lineno, 1)
        q.arrows.append(Arrow(label, vertices.index(s), vertices.index(t)))

    relations = [_parse_relation(body, lineno, col, q, fld) for body, lineno, col in raw_relations]
    if order is not None:
        if sorted(order) != sorted(vertices) or len(set(order)) != len(order):
            raise SpecError("`order` must be a permutation of the vertices")
    return QuiverSpec(name, q, relations, fld, order)


def _parse_relation(body: str, lineno: int, col: int, q: Quiver, fld: Field) -> Relation:
    terms = []
    for sign, term in _split_terms(body):
        term = term.strip()
        if not term:
            raise SpecError("empty term in relation", lineno, col)
        coeff_text, star, path_text = term.rpartition("*")
        if not star:
            path_text = term
            coeff_text = "1"
            if path_text.startswith("-"):
                path_text, coeff_text = path_text[1:].strip(), "-1"
        try:
            coeff = fld.parse(coeff_text) if coeff_text.strip() not in ("", "+") else fld.one
        except ScalarParseError as exc:
            raise SpecError(str(exc), lineno, col) from exc
        labels = [s.strip() for s in path_text.split(".")]
        try:
            idx = [q.arrow_index(s) for s in labels]
        except KeyError as exc:
            raise SpecError(f"unknown arrow {exc.args[0]!r}", lineno, col) from exc
        if len(idx) < 2:
            raise SpecError(f"relation path {path_text.strip()!r} has length < 2", lineno, col)
        traversal = tuple(reversed(idx))
        for a, b in zip(traversal, traversal[1:]):
            if q.arrows[a].target != q.arrows[b].source:
                raise SpecError(f"path {path_text.strip()!r} is not composable", lineno, col)
        path = (q.arrows[traversal[0]].source, traversal)
        terms.append((fld(coeff) * sign, path))
    s0, t0 = terms[0][1][0], q.target(terms[0][1])
    for _, p in terms:
        if p[0] != s0 or q.target(p) != t0:
            raise SpecError("relation terms are not parallel", lineno, col)
    merged: dict = {}
    for c, p in terms:
        merged[p] = merged.get(p, fld.zero) + c
    return Relation([(c, p) for p, c in merged.items() if c], lineno)


# ---------------------------------------------------------------- path basis


@dataclass
class PathBasis:
    quiver: Quiver
    field: Field
    paths: list  # standard monomials in (length, lex) order
    degree: int  # every path of this length vanishes
    reducer: Echelon
    columns: dict  # path -> column index in the truncated space

    def labels(self) -> list[str]:
        return [self.quiver.path_label(p) for p in self.paths]

    def normal_form(self, path) -> dict:
        """Coordinates of a path (as dict path -> coeff over standard paths)."""
        if len(path[1]) >= self.degree:
            return {}
        col = self.columns[path]
        rem, _ = self.reducer.reduce({col: self.field.one})
        inv = self._inv_columns
        return {inv[c]: v for c, v in rem.items()}

    @property
    def _inv_columns(self):
        if not hasattr(self, "_inv"):
            self._inv = {c: p for p, c in self.columns.items()}
        return self._inv


def path_basis(spec_or_quiver, relations=None, fld: Field | None = None,
               degree_bound: int = DEFAULT_DEGREE_BOUND) -> PathBasis:
    """Standard-monomial basis of kQ/I by truncated elimination.

    For each truncation degree D the span of all ``p * r * q`` (relations
    sandwiched between paths, terms longer than D dropped) is reduced with
    the largest path as pivot.  The first D at which every path of length D
    is a pivot fixes the algebra; surviving non-pivot paths form the basis.
    """
    if isinstance(spec_or_quiver, QuiverSpec):
        q, relations, fld = spec_or_quiver.quiver, spec_or_quiver.relations, spec_or_quiver.field
    else:
        q = spec_or_quiver
        relations = relations or []
        fld = fld or QQ
    for D in range(1, degree_bound + 1):
        paths = sorted(q.paths_up_to(D), key=path_key)
        cols = {p: i for i, p in enumerate(paths)}
        by_target: dict[int, list] = {}
        by_source: dict[int, list] = {}
        for p in paths:
            by_target.setdefault(q.target(p), []).append(p)
            by_source.setdefault(p[0], []).append(p)
        ech = Echelon(fld, pivot="last")
        for rel in relations:
            lo = min(len(p[1]) for _, p in rel.terms)
            s, t = rel.source, q.target(rel.terms[0][1])
            for left in by_target.get(s, []):
                if len(left[1]) + lo > D:
                    continue
                for right in by_source.get(t, []):
                    if len(left[1]) + lo + len(right[1]) > D:
                        continue
                    vec = {}
                    for c, p in rel.terms:
                        full = (left[0], left[1] + p[1] + right[1])
                        if len(full[1]) <= D:
                            k = cols[full]
                            vec[k] = vec.get(k, fld.zero) + c
                    ech.add({k: v for k, v in vec.items() if v})
        top = [p for p in paths if len(p[1]) == D]
        if all(cols[p] in ech.rows for p in top):
            basis = [p for p in paths if cols[p] not in ech.rows]
            return PathBasis(q, fld, basis, D, ech, cols)
    raise InfiniteDimensionError(
        f"no stabilization up to degree {degree_bound}; the algebra looks infinite-dimensional")


def build_path_algebra(spec: QuiverSpec, degree_bound: int = DEFAULT_DEGREE_BOUND,
                       apply_order: bool = False):
    """The algebra kQ/I with trivial paths as idempotents in vertex order.

    With ``apply_order`` the idempotents are permuted to the input file's
    ``order`` line (if any).
    """
    from .algebra import Algebra

    pb = path_basis(spec, degree_bound=degree_bound)
    q, fld = spec.quiver, spec.field
    # idempotents first, then radical paths, both in path order
    paths = sorted(pb.paths, key=lambda p: (len(p[1]) > 0, path_key(p)))
    index = {p: i for i, p in enumerate(paths)}
    mult = []
    for p in paths:
        row = {}
        for j, r in enumerate(paths):
            c = q.concat(p, r)
            if c is None:
                continue
            nf = pb.normal_form(c)
            if nf:
                row[j] = {index[s]: v for s, v in nf.items()}
        mult.append(row)
    idempotents = [index[(v, ())] for v in range(len(q.vertices))]
    slices = [(p[0], q.target(p)) for p in paths]
    alg = Algebra(fld, [q.path_label(p) for p in paths], mult, idempotents, slices,
                  vertex_labels=list(q.vertices), name=spec.name)
    alg.loewy_hint = pb.degree
    if apply_order and spec.order is not None:
        alg = alg.reordered([q.vertices.index(v) for v in spec.order])
    return alg


def load_algebra(text: str, field_override: Field | None = None,
                 degree_bound: int = DEFAULT_DEGREE_BOUND, apply_order: bool = True):
    spec = parse_spec(text, field_override)
    return build_path_algebra(spec, degree_bound, apply_order=apply_order)
