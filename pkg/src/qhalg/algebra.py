"""Finite-dimensional basic algebras in an adapted basis.

Every :class:`Algebra` keeps a basis in which each element lies in one slice
``e_i A e_j``, the primitive idempotents are themselves basis elements, and
all remaining basis elements span the Jacobson radical.  Elements are sparse
dicts ``{basis index: coefficient}``.
"""

from __future__ import annotations

import random
from functools import cached_property

from .exactlin import QQ, Echelon, Field, axpy, dense, identity, sparse


class UnsupportedRadicalError(ValueError):
    pass


class NotBasicError(ValueError):
    pass


class Algebra:
    def __init__(self, field: Field, labels: list[str], mult: list[dict],
                 idempotents: list[int], slices: list[tuple[int, int]],
                 vertex_labels: list[str] | None = None, name: str = "A"):
        self.field = field
        self.labels = list(labels)
        self.mult = mult  # mult[i][j] = product of basis i and basis j
        self.idempotents = list(idempotents)
        self.slices = list(slices)
        n = len(idempotents)
        self.vertex_labels = list(vertex_labels) if vertex_labels else [str(i + 1) for i in range(n)]
        self.name = name
        self.loewy_hint = None
        idem = set(self.idempotents)
        self.radical = [i for i in range(self.dim) if i not in idem]

    # basic data ---------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def n(self) -> int:
        return len(self.idempotents)

    def __repr__(self):
        return f"Algebra({self.name!r}, dim={self.dim}, vertices={self.n})"

    def basis_element(self, i: int) -> dict:
        return {i: self.field.one}

    @cached_property
    def unit(self) -> dict:
        return {e: self.field.one for e in self.idempotents}

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            row = self.mult[i]
            for j, b in y.items():
                prod = row.get(j)
                if prod:
                    axpy(out, a * b, prod)
        return out

    def add(self, x: dict, y: dict, c=None) -> dict:
        out = dict(x)
        axpy(out, self.field.one if c is None else c, y)
        return out

    def slice_basis(self, i: int, j: int) -> list[int]:
        return [b for b, s in enumerate(self.slices) if s == (i, j)]

    def slice_dim(self, i: int, j: int) -> int:
        return sum(1 for s in self.slices if s == (i, j))

    def row_basis(self, v: int) -> list[int]:
        """Basis of e_v A, i.e. of the indecomposable projective at v."""
        return [b for b, s in enumerate(self.slices) if s[0] == v]

    def column_basis(self, v: int) -> list[int]:
        """Basis of A e_v."""
        return [b for b, s in enumerate(self.slices) if s[1] == v]

    @cached_property
    def generators(self) -> list[int]:
        """Idempotents plus, per slice, radical elements spanning rad/rad^2."""
        gens = list(self.idempotents)
        rad2 = Echelon(self.field)
        for r in self.radical:
            for s in self.radical:
                p = self.mult[r].get(s)
                if p:
                    rad2.add(p)
        for r in self.radical:
            if rad2.add({r: self.field.one}):
                gens.append(r)
        return gens

    @cached_property
    def radical_generators(self) -> list[int]:
        idem = set(self.idempotents)
        return [g for g in self.generators if g not in idem]

    # structure checks ---------------------------------------------------

    def is_associative(self) -> bool:
        basis = [self.basis_element(i) for i in range(self.dim)]
        for x in basis:
            for y in basis:
                xy = self.mul(x, y)
                for z in basis:
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)):
                        return False
        return True

    def check_idempotents(self) -> bool:
        one = self.field.one
        for a, i in enumerate(self.idempotents):
            for b, j in enumerate(self.idempotents):
                want = {i: one} if a == b else {}
                if self.mul({i: one}, {j: one}) != want:
                    return False
        for b, (i, j) in enumerate(self.slices):
            x = {b: one}
            if self.mul({self.idempotents[i]: one}, x) != x or self.mul(x, {self.idempotents[j]: one}) != x:
                return False
        for v in range(self.n):
            # local corner: e_v A e_v = k e_v + radical part
            if sum(1 for b in self.slice_basis(v, v) if b in self.idempotents) != 1:
                return False
        return True

    def radical_power(self, k: int) -> list[dict]:
        """Basis of rad^k (k >= 1) as sparse elements."""
        layer = Echelon(self.field)
        for r in self.radical:
            layer.add({r: self.field.one})
        cur = list(layer.rows.values())
        for _ in range(k - 1):
            nxt = Echelon(self.field)
            for x in cur:
                for r in self.radical_generators:
                    p = self.mul(x, {r: self.field.one})
                    if p:
                        nxt.add(p)
            cur = list(nxt.rows.values())
            if not cur:
                break
        return cur

    @cached_property
    def nilpotency_index(self) -> int:
        """Smallest N with rad^N = 0."""
        if not self.radical:
            return 1
        k = 1
        while self.radical_power(k):
            k += 1
        return k

    def left_matrix(self, x: dict) -> list[list]:
        """Matrix (row convention) of y -> x*y."""
        z = self.field.zero
        return [dense(self.mul(x, {j: self.field.one}), self.dim, z) for j in range(self.dim)]

    def right_matrix(self, x: dict) -> list[list]:
        """Matrix (row convention) of y -> y*x."""
        z = self.field.zero
        return [dense(self.mul({j: self.field.one}, x), self.dim, z) for j in range(self.dim)]

    def cartan(self) -> list[list[int]]:
        """C[i][j] = dim e_i A e_j = multiplicity of S_j in P_i."""
        return [[self.slice_dim(i, j) for j in range(self.n)] for i in range(self.n)]

    # derived algebras -----------------------------------------------------

    def reordered(self, perm: list[int]) -> "Algebra":
        """Same algebra with idempotent ``perm[k]`` moved to position ``k``."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("not a permutation of the idempotents")
        new_pos = {old: k for k, old in enumerate(perm)}
        out = Algebra(self.field, self.labels, self.mult,
                      [self.idempotents[p] for p in perm],
                      [(new_pos[i], new_pos[j]) for i, j in self.slices],
                      [self.vertex_labels[p] for p in perm], self.name)
        out.loewy_hint = self.loewy_hint
        return out

    def structure_equal(self, other: "Algebra") -> bool:
        return (self.field == other.field and self.labels == other.labels
                and self.mult == other.mult and self.idempotents == other.idempotents
                and self.slices == other.slices)


def _restrict(alg: Algebra, keep: list[int], idempotents: list[int], slices, vertex_labels, name):
    pos = {b: k for k, b in enumerate(keep)}
    mult = []
    for b in keep:
        row = {}
        for c, prod in alg.mult[b].items():
            if c in pos:
                row[pos[c]] = {pos[k]: v for k, v in prod.items()}
        mult.append(row)
    return Algebra(alg.field, [alg.labels[b] for b in keep], mult,
                   [pos[e] for e in idempotents], slices, vertex_labels, name)


def centralizer(alg: Algebra, positions) -> Algebra:
    """The corner algebra eAe for e the sum of the idempotents at ``positions``.

    Vertex order is inherited from ``alg``.
    """
    positions = sorted(set(positions))
    if not positions:
        raise ValueError("centralizer of an empty idempotent set")
    new = {p: k for k, p in enumerate(positions)}
    keep = [b for b, (i, j) in enumerate(alg.slices) if i in new and j in new]
    slices = [(new[alg.slices[b][0]], new[alg.slices[b][1]]) for b in keep]
    return _restrict(alg, keep, [alg.idempotents[p] for p in positions], slices,
                     [alg.vertex_labels[p] for p in positions], f"{alg.name}[{','.join(map(str, positions))}]")


def opposite(alg: Algebra) -> Algebra:
    mult = [dict() for _ in range(alg.dim)]
    for i, row in enumerate(alg.mult):
        for j, prod in row.items():
            mult[j][i] = prod
    return Algebra(alg.field, alg.labels, mult, alg.idempotents,
                   [(j, i) for i, j in alg.slices], alg.vertex_labels, f"{alg.name}^op")


def direct_product(a: Algebra, b: Algebra) -> Algebra:
    if a.field != b.field:
        raise ValueError("factors over different fields")
    off = a.dim
    mult = [dict(row) for row in a.mult]
    for row in b.mult:
        mult.append({j + off: {k + off: v for k, v in p.items()} for j, p in row.items()})
    slices = list(a.slices) + [(i + a.n, j + a.n) for i, j in b.slices]
    return Algebra(a.field, a.labels + b.labels, mult,
                   a.idempotents + [e + off for e in b.idempotents], slices,
                   a.vertex_labels + b.vertex_labels, f"{a.name}x{b.name}")


def base_field_algebra(fld: Field = QQ, name: str = "k") -> Algebra:
    return Algebra(fld, ["e_1"], [{0: {0: fld.one}}], [0], [(0, 0)], ["1"], name)


# ---------------------------------------------------------------- raw tables


class RawTable:
    """Structure constants in an arbitrary basis (no idempotent data)."""

    def __init__(self, field: Field, mult: list[list[dict]], unit: dict):
        self.field = field
        self.mult = mult  # mult[i][j] sparse
        self.unit = unit
        self.dim = len(mult)

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                p = self.mult[i][j]
                if p:
                    axpy(out, a * b, p)
        return out


def trace_form_radical(table: RawTable) -> list[dict]:
    """Radical as the kernel of (x, y) -> tr(L_x L_y); characteristic 0 only."""
    fld = table.field
    if fld.characteristic != 0:
        raise UnsupportedRadicalError(
            "radical of a raw structure-constant table needs characteristic 0; "
            "present the algebra by a quiver instead")
    n = table.dim
    one = fld.one
    lmats = [[table.mul({i: one}, {k: one}) for k in range(n)] for i in range(n)]

    def trace_prod(i, j):
        # tr(L_i L_j) = sum_k coefficient of k in i*(j*k)
        s = fld.zero
        for k in range(n):
            jk = lmats[j][k]
            for m, c in jk.items():
                v = lmats[i][m].get(k)
                if v:
                    s = s + c * v
        return s

    gram = [[trace_prod(i, j) for j in range(n)] for i in range(n)]
    ech = Echelon(fld)
    for row in gram:
        ech.add(sparse(row))
    return ech.kernel(n)


def _min_poly_roots(fld: Field, table: RawTable, z: dict, quotient_reduce, qdim: int):
    """Distinct roots of the minimal polynomial of z acting on A/rad."""
    import sympy

    one = fld.one
    powers = [quotient_reduce(dict(table.unit))]
    ech = Echelon(fld, track=True)
    ech.add(powers[0])
    cur = dict(table.unit)
    while True:
        cur = table.mul(cur, z)
        red = quotient_reduce(cur)
        coords = ech.coordinates(red)
        if coords is not None:
            deg = len(powers)
            coeffs = [fld.zero] * (deg + 1)
            coeffs[deg] = one
            for k, v in coords.items():
                coeffs[k] = -v
            break
        ech.add(red)
        powers.append(red)
    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x)
    roots = poly.ground_roots()
    if sum(roots.values()) != poly.degree() or any(m != 1 for m in roots.values()):
        return None
    return [fld(int(sympy.Rational(r).p)) / fld(int(sympy.Rational(r).q)) for r in roots]


def algebra_from_table(field: Field, mult: list[list[dict]], unit: dict,
                       seed: int = 0, name: str = "A") -> tuple[Algebra, list[dict]]:
    """Present a raw structure-constant algebra in the adapted form.

    Returns the algebra and the list of new basis vectors expressed in the old
    basis.  Works for basic algebras whose semisimple quotient splits over Q.
    """
    table = RawTable(field, mult, unit)
    rad = trace_form_radical(table)
    one = field.one
    n = table.dim
    rad_ech = Echelon(field)
    for r in rad:
        rad_ech.add(r)
    qdim = n - rad_ech.rank

    def reduce(x):
        return rad_ech.reduce(x)[0]

    rng = random.Random(seed)
    quot_basis = [i for i in range(n) if i not in rad_ech.rows]
    for _ in range(20):
        z = {i: field(rng.randint(-50, 50)) for i in quot_basis}
        z = {k: v for k, v in z.items() if v}
        roots = _min_poly_roots(field, table, z, reduce, qdim)
        if roots is not None and len(roots) == qdim:
            break
    else:
        raise NotBasicError("semisimple quotient is not a split product of copies of the field")

    def lagrange(r):
        out = dict(table.unit)
        for s in roots:
            if s == r:
                continue
            factor = dict(z)
            axpy(factor, -s, table.unit)
            out = table.mul(out, factor)
            out = {k: v / (r - s) for k, v in out.items()}
        return out

    approx = [lagrange(r) for r in roots]
    idems = []
    rest = dict(table.unit)
    for k, y in enumerate(approx):
        if k == len(approx) - 1:
            idems.append(rest)
            break
        x = table.mul(table.mul(rest, y), rest)
        while True:
            x2 = table.mul(x, x)
            if x2 == x:
                break
            x3 = table.mul(x2, x)
            nxt = {}
            axpy(nxt, field(3), x2)
            axpy(nxt, field(-2), x3)
            x = nxt
        idems.append(x)
        axpy(rest, -one, x)

    m = len(idems)
    new_basis, labels, slices, idem_positions = [], [], [], []
    for i in range(m):
        ei_bar = reduce(idems[i])
        key = next(iter(ei_bar))
        for j in range(m):
            span = Echelon(field)
            for b in range(n):
                v = table.mul(table.mul(idems[i], {b: one}), idems[j])
                if v:
                    span.add(v)
            part = Echelon(field)
            for v in span.rows.values():
                red = reduce(v)
                if red:
                    if i != j:
                        raise NotBasicError("off-diagonal corner meets the semisimple part")
                    v = dict(v)
                    axpy(v, -(red.get(key, field.zero) / ei_bar[key]), idems[i])
                if v:
                    part.add(v)
            if i == j:
                idem_positions.append(len(new_basis))
                new_basis.append(idems[i])
                labels.append(f"e_{i + 1}")
                slices.append((i, i))
            for k, (_, v) in enumerate(sorted(part.rows.items())):
                new_basis.append(v)
                labels.append(f"r{i + 1}_{j + 1}_{k + 1}")
                slices.append((i, j))
    if len(new_basis) != n:
        raise NotBasicError(f"adapted basis has {len(new_basis)} elements, expected {n}")
    coords = Echelon(field, track=True)
    for v in new_basis:
        coords.add(v)
    new_mult = []
    for a in new_basis:
        row = {}
        for jb, b in enumerate(new_basis):
            p = table.mul(a, b)
            if p:
                row[jb] = coords.coordinates(p)
        new_mult.append(row)
    alg = Algebra(field, labels, new_mult, idem_positions, slices, None, name)
    return alg, new_basis


def structure_table(alg: Algebra) -> tuple[list[list[dict]], dict]:
    mult = [[alg.mult[i].get(j, {}) for j in range(alg.dim)] for i in range(alg.dim)]
    return mult, dict(alg.unit)


def change_basis(alg: Algebra, P: list[list]) -> tuple[list[list[dict]], dict]:
    """Structure constants of ``alg`` in the basis given by the rows of P."""
    fld = alg.field
    basis = [sparse(row) for row in P]
    coords = Echelon(fld, track=True)
    for v in basis:
        if not coords.add(v):
            raise ValueError("rows of P are dependent")
    mult = [[coords.coordinates(alg.mul(a, b)) or {} for b in basis] for a in basis]
    unit = coords.coordinates(alg.unit)
    return mult, unit


def random_basis_change(n: int, fld: Field, rng: random.Random) -> list[list]:
    while True:
        P = identity(n, fld)
        for _ in range(3 * n):
            i, j = rng.randrange(n), rng.randrange(n)
            if i != j:
                c = fld(rng.randint(-3, 3))
                P[i] = [x + c * y for x, y in zip(P[i], P[j])]
        return P
