"""Triangular gluing of algebras along a bimodule, and integral form invariants.

Convention: in glue(A, B, T) the idempotents of A come first, then those of
B.  T sits in e_B C e_A, so Hom_C(P_a, P_b) = e_b T e_a and e_A C e_B = 0.
The semi-orthogonality asserted is Ext_C(B-block, A-block) = 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .algebra import Algebra, direct_product
from .exactlin import (
    Echelon, Field, identity, int_det, int_matmul, inverse, matmul, random_unimodular,
    smith_normal_form, sparse, transpose, zeros,
)
from .quiver import SpecError
from .repmod import (
    Module, TruncatedResolutionError, ext_all, global_dimension, hom_space, injectives,
    op_algebra, projective, projectives, simple, simples,
)


class ActionError(ValueError):
    """The given matrices do not define a bimodule."""


def _kron(a: list, b: list, fld: Field) -> list:
    ra, rb = len(a), len(b)
    out = zeros(ra * rb, ra * rb, fld)
    for i in range(ra):
        for j in range(ra):
            if not a[i][j]:
                continue
            for k in range(rb):
                for m in range(rb):
                    if b[k][m]:
                        out[i * rb + k][j * rb + m] = a[i][j] * b[k][m]
    return out


def _combine(mats: list, coeffs: dict, d: int, fld: Field) -> list:
    out = zeros(d, d, fld)
    for k, c in coeffs.items():
        for i in range(d):
            for j in range(d):
                if mats[k][i][j]:
                    out[i][j] = out[i][j] + c * mats[k][i][j]
    return out


@dataclass
class Bimodule:
    """A B-A bimodule T of dimension d.

    ``left[b][r]`` holds the coordinates of b.t_r, so v -> v @ left[b] is the
    left action (and left[b'*b] = left[b] @ left[b']).  ``right[a][r]``
    holds t_r.a, the usual row convention.
    """

    left_algebra: Algebra  # B
    right_algebra: Algebra  # A
    dim: int
    left: list
    right: list
    name: str = "T"

    @property
    def field(self) -> Field:
        return self.right_algebra.field

    def violations(self) -> list[str]:
        fld, d = self.field, self.dim
        bad = []
        a_alg, b_alg = self.right_algebra, self.left_algebra
        ident = identity(d, fld)
        if _combine(self.right, {e: fld.one for e in a_alg.idempotents}, d, fld) != ident:
            bad.append("right action is not unital")
        if _combine(self.left, {e: fld.one for e in b_alg.idempotents}, d, fld) != ident:
            bad.append("left action is not unital")
        for x in range(a_alg.dim):
            for y in range(a_alg.dim):
                want = _combine(self.right, a_alg.mul({x: fld.one}, {y: fld.one}), d, fld)
                if matmul(self.right[x], self.right[y], fld) != want:
                    bad.append(f"right action of {a_alg.labels[x]}*{a_alg.labels[y]}")
        for x in range(b_alg.dim):
            for y in range(b_alg.dim):
                want = _combine(self.left, b_alg.mul({x: fld.one}, {y: fld.one}), d, fld)
                if matmul(self.left[y], self.left[x], fld) != want:
                    bad.append(f"left action of {b_alg.labels[x]}*{b_alg.labels[y]}")
        for x in range(b_alg.dim):
            for y in range(a_alg.dim):
                if matmul(self.left[x], self.right[y], fld) != matmul(self.right[y], self.left[x], fld):
                    bad.append(f"{b_alg.labels[x]} and {a_alg.labels[y]} do not commute")
        return bad

    def is_valid(self) -> bool:
        return not self.violations()

    def homogeneous_basis(self) -> list[tuple[int, int, list]]:
        """Basis of T adapted to the parts e_v T e_u, as (v, u, vector)."""
        fld, d = self.field, self.dim
        out = []
        for v, ev in enumerate(self.left_algebra.idempotents):
            for u, eu in enumerate(self.right_algebra.idempotents):
                proj = matmul(self.left[ev], self.right[eu], fld)
                ech = Echelon(fld)
                for row in proj:
                    if ech.add(sparse(row)):
                        out.append((v, u, list(row)))
        if len(out) != d:
            raise ActionError("idempotent parts do not decompose the bimodule")
        return out

    def rebased(self) -> tuple["Bimodule", list, list[tuple[int, int]]]:
        """Conjugate to the homogeneous basis; returns (T', Q, parts) with rows of Q the new basis."""
        fld = self.field
        hb = self.homogeneous_basis()
        q = [vec for _, _, vec in hb]
        qi = inverse(q, fld)
        left = [matmul(matmul(q, m, fld), qi, fld) for m in self.left]
        right = [matmul(matmul(q, m, fld), qi, fld) for m in self.right]
        return (Bimodule(self.left_algebra, self.right_algebra, self.dim, left, right, self.name),
                q, [(v, u) for v, u, _ in hb])

    def direct_sum(self, other: "Bimodule") -> "Bimodule":
        fld = self.field
        d = self.dim + other.dim

        def block(x, y):
            out = zeros(d, d, fld)
            for i in range(self.dim):
                out[i][:self.dim] = x[i]
            for i in range(other.dim):
                out[self.dim + i][self.dim:] = y[i]
            return out

        return Bimodule(self.left_algebra, self.right_algebra, d,
                        [block(x, y) for x, y in zip(self.left, other.left)],
                        [block(x, y) for x, y in zip(self.right, other.right)],
                        f"{self.name}+{other.name}")


def zero_bimodule(b: Algebra, a: Algebra) -> Bimodule:
    return Bimodule(b, a, 0, [[] for _ in range(b.dim)], [[] for _ in range(a.dim)], "0")


def tensor_bimodule(x: Module, y: Module, name: str = "") -> Bimodule:
    """X (x) Y for a right B^op-module X and a right A-module Y."""
    b = op_algebra(x.algebra)
    a = y.algebra
    fld = a.field
    left = [_kron(m, identity(y.dim, fld), fld) for m in x.act]
    right = [_kron(identity(x.dim, fld), m, fld) for m in y.act]
    return Bimodule(b, a, x.dim * y.dim, left, right, name or f"{x.name}(x){y.name}")


# ---------------------------------------------------------------- gluing


@dataclass
class GluedAlgebra:
    a: Algebra
    b: Algebra
    bimodule: Bimodule  # the homogeneous rebase actually used
    algebra: Algebra
    change_of_basis: list  # rows: basis of the rebased T in the input coordinates
    a_part: list[int] = dc_field(default_factory=list)  # basis indices of C
    t_part: list[int] = dc_field(default_factory=list)
    b_part: list[int] = dc_field(default_factory=list)

    @property
    def a_vertices(self) -> list[int]:
        return list(range(self.a.n))

    @property
    def b_vertices(self) -> list[int]:
        return list(range(self.a.n, self.a.n + self.b.n))


def glue(a: Algebra, b: Algebra, t: Bimodule | None = None, name: str = "") -> GluedAlgebra:
    if t is None:
        t = zero_bimodule(b, a)
    if t.left_algebra is not b or t.right_algebra is not a:
        if t.left_algebra.dim != b.dim or t.right_algebra.dim != a.dim:
            raise ActionError("bimodule is over different algebras")
    bad = t.violations()
    if bad:
        raise ActionError("action-compatibility violation: " + "; ".join(bad[:3]))
    fld = a.field
    if t.dim:
        tr, q, parts = t.rebased()
    else:
        tr, q, parts = t, [], []
    oa, ot, ob = 0, a.dim, a.dim + tr.dim
    labels = list(a.labels) + [f"t{r + 1}" for r in range(tr.dim)] + list(b.labels)
    mult = [dict(row) for row in a.mult]
    for r in range(tr.dim):
        row = {}
        for x in range(a.dim):
            prod = {ot + k: v for k, v in sparse(tr.right[x][r]).items()}
            if prod:
                row[x] = prod
        mult.append(row)
    for y in range(b.dim):
        row = {ob + j: {ob + k: v for k, v in p.items()} for j, p in b.mult[y].items()}
        for r in range(tr.dim):
            prod = {ot + k: v for k, v in sparse(tr.left[y][r]).items()}
            if prod:
                row[ot + r] = prod
        mult.append(row)
    slices = list(a.slices) + [(a.n + v, u) for v, u in parts] + \
        [(a.n + i, a.n + j) for i, j in b.slices]
    idem = list(a.idempotents) + [ob + e for e in b.idempotents]
    vlabels = [f"{a.name}:{v}" for v in a.vertex_labels] + [f"{b.name}:{v}" for v in b.vertex_labels]
    c = Algebra(fld, labels, mult, idem, slices, vlabels,
                name or f"glue({a.name},{b.name},{t.name})")
    return GluedAlgebra(a, b, tr, c, q, list(range(oa, ot)), list(range(ot, ob)),
                        list(range(ob, ob + b.dim)))


def extract_bimodule(g: GluedAlgebra) -> Bimodule:
    """Read T back off e_B C e_A with C's own multiplication."""
    c, fld = g.algebra, g.algebra.field
    tpos = {x: r for r, x in enumerate(g.t_part)}
    d = len(g.t_part)

    def matrix(elem, side):
        m = zeros(d, d, fld)
        for r, x in enumerate(g.t_part):
            prod = c.mul({x: fld.one}, {elem: fld.one}) if side == "right" else \
                c.mul({elem: fld.one}, {x: fld.one})
            for k, v in prod.items():
                if k not in tpos:
                    raise ActionError("product leaves the off-diagonal block")
                m[r][tpos[k]] = v
        return m

    return Bimodule(g.b, g.a, d, [matrix(x, "left") for x in g.b_part],
                    [matrix(x, "right") for x in g.a_part], "extracted")


def split_triangular(c: Algebra, a_vertices: list[int]) -> tuple[Algebra, Algebra, Bimodule]:
    """Inverse of glue when e_A C e_B = 0 and the A vertices come first."""
    from .algebra import centralizer

    n = c.n
    b_vertices = [v for v in range(n) if v not in a_vertices]
    if a_vertices != list(range(len(a_vertices))):
        raise ValueError("A vertices must be an initial segment")
    if any(c.slice_dim(i, j) for i in a_vertices for j in b_vertices):
        raise ValueError("e_A C e_B is not zero")
    fld = c.field
    a = centralizer(c, a_vertices)
    b = centralizer(c, b_vertices)
    a_keep = [x for x in range(c.dim) if c.slices[x][0] in a_vertices and c.slices[x][1] in a_vertices]
    b_keep = [x for x in range(c.dim) if c.slices[x][0] in b_vertices and c.slices[x][1] in b_vertices]
    t_keep = [x for x in range(c.dim) if c.slices[x][0] in b_vertices and c.slices[x][1] in a_vertices]
    tpos = {x: r for r, x in enumerate(t_keep)}
    d = len(t_keep)

    def matrix(elem, side):
        m = zeros(d, d, fld)
        for r, x in enumerate(t_keep):
            prod = c.mul({x: fld.one}, {elem: fld.one}) if side == "right" else \
                c.mul({elem: fld.one}, {x: fld.one})
            for k, v in prod.items():
                m[r][tpos[k]] = v
        return m

    t = Bimodule(b, a, d, [matrix(x, "left") for x in b_keep], [matrix(x, "right") for x in a_keep],
                 f"e_B {c.name} e_A")
    return a, b, t


def permute_basis(alg: Algebra, order: list[int]) -> Algebra:
    """Same algebra with basis element ``order[k]`` placed at position k."""
    new = {old: k for k, old in enumerate(order)}
    mult = [dict() for _ in order]
    for i, row in enumerate(alg.mult):
        for j, p in row.items():
            mult[new[i]][new[j]] = {new[k]: v for k, v in p.items()}
    return Algebra(alg.field, [alg.labels[o] for o in order], mult,
                   [new[e] for e in alg.idempotents], [alg.slices[o] for o in order],
                   alg.vertex_labels, alg.name)


def same_structure(x: Algebra, y: Algebra) -> bool:
    """Structure constants, idempotents and slices agree (labels ignored)."""
    return (x.field == y.field and x.dim == y.dim and x.mult == y.mult
            and x.idempotents == y.idempotents and x.slices == y.slices)


def match_slice_bases(x: Algebra, y: Algebra) -> list[int] | None:
    """Basis permutation of y aligning slices with x, when every slice has dim <= 1."""
    if x.dim != y.dim or x.n != y.n:
        return None
    where = {}
    for k, s in enumerate(y.slices):
        if s in where:
            return None
        where[s] = k
    order = []
    for s in x.slices:
        if s not in where:
            return None
        order.append(where[s])
    return order if len(set(order)) == len(order) else None


def is_direct_product(g: GluedAlgebra) -> bool:
    return g.bimodule.dim == 0 and same_structure(g.algebra, direct_product(g.a, g.b))


# ---------------------------------------------------------------- modules across the blocks


def inflate(g: GluedAlgebra, m: Module) -> Module:
    """A right A-module viewed over C (T and B act by zero)."""
    c, fld = g.algebra, g.algebra.field
    z = zeros(m.dim, m.dim, fld)
    act = [m.act[x] for x in g.a_part] + [z] * (len(g.t_part) + len(g.b_part))
    return Module(c, list(m.vertex_of), act, f"infl({m.name})")


def _ext_upto(x, y, bound: int = 4) -> dict:
    """All of Ext when the resolution is finite, else the reliable degrees below the bound."""
    try:
        return ext_all(x, y)
    except TruncatedResolutionError:
        dims = ext_all(x, y, bound, allow_truncated=True)
        return {d: v for d, v in dims.items() if d < bound}


def verify_sod(g: GluedAlgebra) -> dict:
    c = g.algebra
    a_v, b_v = g.a_vertices, g.b_vertices
    pa = [projective(c, v) for v in a_v]
    pb = [projective(c, v) for v in b_v]
    infl_simple = [inflate(g, s) for s in simples(g.a)]
    infl_proj = [inflate(g, p) for p in projectives(g.a)]

    proj_vanish = all(not ext_all(p, q) for p in pb for q in pa)
    block_vanish = all(not ext_all(p, m) for p in pb for m in infl_simple + infl_proj)
    # the A-projectives of C are the inflated A-projectives
    a_embedded = all(p.dim == q.dim and p.dimvec == q.dimvec for p, q in zip(pa, infl_proj))
    ext_match = True
    for i, s in enumerate(simples(g.a)):
        for j, s2 in enumerate(simples(g.a)):
            if _ext_upto(infl_simple[i], infl_simple[j]) != _ext_upto(s, s2):
                ext_match = False
    b_hom_match = all(len(hom_space(pb[i], pb[j])) == g.b.slice_dim(j, i)
                      for i in range(len(b_v)) for j in range(len(b_v)))
    # Hom_C(P_a, P_b) = e_b T e_a
    t_hom = [[len(hom_space(projective(c, u), projective(c, v))) for u in a_v] for v in b_v]
    t_parts = [[c.slice_dim(v, u) for u in a_v] for v in b_v]

    cart = c.cartan()
    na = g.a.n
    block = (all(cart[i][j] == 0 for i in a_v for j in b_v)
             and [row[:na] for row in cart[:na]] == g.a.cartan()
             and [row[na:] for row in cart[na:]] == g.b.cartan())

    back = extract_bimodule(g)
    round_trip = back.dim == g.bimodule.dim and back.left == g.bimodule.left \
        and back.right == g.bimodule.right

    ga, gb, gc = global_dimension(g.a), global_dimension(g.b), global_dimension(c)
    report = {
        "convention": "idempotents of A precede those of B; asserted vanishing is Ext_C(B-block, A-block) = 0",
        "dims": {"A": g.a.dim, "T": g.bimodule.dim, "B": g.b.dim, "C": c.dim},
        "dim_additive": c.dim == g.a.dim + g.bimodule.dim + g.b.dim,
        "k0_rank": {"A": g.a.n, "B": g.b.n, "C": c.n},
        "k0_additive": c.n == g.a.n + g.b.n,
        "associative": c.is_associative(),
        "ext_B_projectives_to_A_projectives_zero": proj_vanish,
        "ext_B_projectives_to_A_block_zero": block_vanish,
        "A_projectives_inflated": a_embedded,
        "A_ext_preserved": ext_match,
        "B_hom_preserved": b_hom_match,
        "hom_A_to_B_projectives": t_hom,
        "hom_matches_bimodule": t_hom == t_parts,
        "cartan": cart,
        "cartan_block_triangular": block,
        "round_trip": round_trip,
        "gldim": {"A": ga, "B": gb, "C": gc},
        "gldim_finite_consistent": (gc is not None) == (ga is not None and gb is not None),
    }
    keys = ["dim_additive", "k0_additive", "associative", "ext_B_projectives_to_A_projectives_zero",
            "ext_B_projectives_to_A_block_zero", "A_projectives_inflated", "A_ext_preserved",
            "B_hom_preserved", "hom_matches_bimodule", "cartan_block_triangular", "round_trip",
            "gldim_finite_consistent"]
    report["ok"] = all(report[k] for k in keys)
    return report


def random_bimodule(b: Algebra, a: Algebra, rng: random.Random, max_dim: int = 6) -> Bimodule:
    """Sum of one or two X (x) Y with X, Y drawn from simples, projectives, injectives."""
    bop = op_algebra(b)
    left_pool = simples(bop) + projectives(bop) + injectives(bop)
    right_pool = simples(a) + projectives(a) + injectives(a)
    parts = []
    total = 0
    for _ in range(rng.choice((1, 2))):
        for _ in range(20):
            x, y = rng.choice(left_pool), rng.choice(right_pool)
            if total + x.dim * y.dim <= max_dim:
                parts.append(tensor_bimodule(x, y))
                total += x.dim * y.dim
                break
    if not parts:
        parts.append(tensor_bimodule(simple(bop, 0), simple(a, 0)))
    out = parts[0]
    for p in parts[1:]:
        out = out.direct_sum(p)
    return out


# ---------------------------------------------------------------- bimodule spec files


def parse_bimodule_spec(text: str, algebras: dict[str, Algebra]) -> Bimodule:
    """Parse ``bimodule <name> over <A> <B>`` / ``dim d`` / ``left|right <label> = rows``.

    Matrix rows are separated by ``;``.  Actions of the listed basis elements are
    extended to all of A and B by multiplication; idempotents may be omitted only
    for an algebra with a single vertex.
    """
    name, a, b, d = None, None, None, None
    given = {"left": {}, "right": {}}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        col = raw.index(line[0]) + 1
        words = line.split()
        head = words[0]
        if head == "bimodule":
            if len(words) != 5 or words[2] != "over":
                raise SpecError("expected 'bimodule <name> over <A> <B>'", ln, col)
            name = words[1]
            for w, tag in ((words[3], "A"), (words[4], "B")):
                if w not in algebras:
                    raise SpecError(f"unknown algebra {w!r} for {tag}", ln, raw.index(w) + 1)
            a, b = algebras[words[3]], algebras[words[4]]
        elif head == "dim":
            if len(words) != 2 or not words[1].isdigit():
                raise SpecError("expected 'dim <nonnegative integer>'", ln, col)
            d = int(words[1])
        elif head in ("left", "right"):
            if a is None or d is None:
                raise SpecError("action line before 'bimodule' and 'dim'", ln, col)
            if "=" not in line:
                raise SpecError("expected '<side> <label> = <rows>'", ln, col)
            lhs, rhs = line.split("=", 1)
            lw = lhs.split()
            if len(lw) != 2:
                raise SpecError("expected a single basis label", ln, col)
            alg = b if head == "left" else a
            if lw[1] not in alg.labels:
                raise SpecError(f"{lw[1]!r} is not a basis label of {alg.name}", ln, raw.index(lw[1]) + 1)
            rows = [r.split() for r in rhs.split(";")]
            if len(rows) != d or any(len(r) != d for r in rows):
                raise SpecError(f"matrix must be {d}x{d}", ln, raw.index("=") + 2)
            try:
                mat = [[a.field.parse(x) for x in r] for r in rows]
            except ValueError as exc:
                raise SpecError(str(exc), ln, raw.index("=") + 2) from None
            given[head][alg.labels.index(lw[1])] = mat
        else:
            raise SpecError(f"unknown directive {head!r}", ln, col)
    if a is None or d is None:
        raise SpecError("missing 'bimodule' or 'dim' line")
    left = _extend_action(b, given["left"], d, anti=True)
    right = _extend_action(a, given["right"], d, anti=False)
    return Bimodule(b, a, d, left, right, name)


def _extend_action(alg: Algebra, given: dict, d: int, anti: bool) -> list:
    fld = alg.field
    given = dict(given)
    if alg.n == 1 and alg.idempotents[0] not in given:
        given[alg.idempotents[0]] = identity(d, fld)
    missing = [alg.labels[e] for e in alg.idempotents if e not in given]
    if missing:
        raise SpecError("missing action of idempotent(s) " + ", ".join(missing))
    if d == 0:
        return [[] for _ in range(alg.dim)]
    elems = [({k: fld.one}, m) for k, m in sorted(given.items())]
    ech = Echelon(fld, track=True)
    kept = []
    for e, m in elems:
        if ech.add(dict(e)):
            kept.append((e, m))
    frontier = list(kept)
    while frontier and ech.rank < alg.dim:
        new = []
        for x, mx in frontier:
            for y, my in kept:
                for (p, q, mp, mq) in ((x, y, mx, my), (y, x, my, mx)):
                    prod = alg.mul(p, q)
                    if prod and ech.add(dict(prod)):
                        mat = matmul(mq, mp, fld) if anti else matmul(mp, mq, fld)
                        new.append((prod, mat))
        kept.extend(new)
        frontier = new
    if ech.rank < alg.dim:
        raise SpecError(f"given actions do not generate {alg.name}")
    mats = [m for _, m in kept]
    out = []
    for k in range(alg.dim):
        c = ech.coordinates({k: fld.one})
        out.append(_combine(mats, c, d, fld))
    return out


# ---------------------------------------------------------------- criterion of the second decomposition


def ks_condition3(p, u, bound: int | None = None) -> bool:
    """Ext^d(P, U) = 0 for every d.

    Raises TruncatedResolutionError when P has no finite resolution within
    the bound and all computed degrees vanish (the answer is indeterminate).
    """
    if bound is None:
        return not ext_all(p, u)
    dims = ext_all(p, u, bound, allow_truncated=True)
    if dims:
        return False
    try:
        return not ext_all(p, u, bound)
    except TruncatedResolutionError:
        raise TruncatedResolutionError("indeterminate: only a truncated range vanished") from None


# ---------------------------------------------------------------- integral forms


def ks_partner_form(g: int, l1: int, l2: int) -> tuple[int, list[list[int]]]:
    if g < 0 or l1 < 1 or l2 < 1:
        raise ValueError("need g >= 0 and l1, l2 >= 1")
    t = 1 - g - l1 * l2
    return t, [[t, 1], [-1, 0]]


def curve_form(g: int) -> list[list[int]]:
    """Euler form on K_0 of a genus-g curve in the basis (structure sheaf, point)."""
    return [[1 - g, 1], [-1, 0]]


def form_invariants(f: list[list[int]]) -> tuple[int, tuple[int, ...]]:
    sym = [[f[i][j] + f[j][i] for j in range(len(f))] for i in range(len(f))]
    diag, _, _ = smith_normal_form(sym)
    return int_det(f), tuple(diag)


def congruent(f: list[list[int]], p: list[list[int]]) -> list[list[int]]:
    return int_matmul(int_matmul(transpose(p), f), p)


def forms_distinguished(f1: list[list[int]], f2: list[list[int]]) -> str:
    if len(f1) != len(f2):
        raise ValueError("forms of different rank")
    return "distinguished" if form_invariants(f1) != form_invariants(f2) else "not distinguished"


def congruence_trials(f: list[list[int]], trials: int, rng: random.Random) -> int:
    """Number of random unimodular congruences that changed the invariants."""
    base = form_invariants(f)
    changed = 0
    for _ in range(trials):
        p = random_unimodular(len(f), rng)
        if form_invariants(congruent(f, p)) != base:
            changed += 1
    return changed
