"""Right modules over an adapted :class:`~qhalg.algebra.Algebra`.

Vectors are rows; the action of a basis element ``x`` is a matrix ``A_x``
with ``v . x = v @ A_x``.  Every module basis vector is homogeneous, i.e.
sits at a single vertex, and ``vertex_of[k]`` records which.  Maps are
matrices ``F`` of shape ``dim M x dim N`` acting by ``m -> m @ F``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .algebra import Algebra, opposite
from .exactlin import Echelon, Field, axpy, dense, matmul, sparse, vecmat


class AlgebraMismatchError(ValueError):
    pass


class TruncatedResolutionError(RuntimeError):
    pass


class Module:
    def __init__(self, algebra: Algebra, vertex_of: list[int], act: list[list[list]], name: str = "M"):
        self.algebra = algebra
        self.vertex_of = list(vertex_of)
        self.act = act
        self.name = name
        self._resolution = None

    @property
    def dim(self) -> int:
        return len(self.vertex_of)

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def blocks(self) -> list[list[int]]:
        if not hasattr(self, "_blocks"):
            b = [[] for _ in range(self.algebra.n)]
            for k, v in enumerate(self.vertex_of):
                b[v].append(k)
            self._blocks = b
        return self._blocks

    @property
    def dimvec(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def __repr__(self):
        return f"Module({self.name!r}, dimvec={self.dimvec})"

    def act_elem(self, x: dict) -> list[list]:
        z = self.field.zero
        out = [[z] * self.dim for _ in range(self.dim)]
        for b, c in x.items():
            m = self.act[b]
            for i in range(self.dim):
                row, orow = m[i], out[i]
                for j in range(self.dim):
                    if row[j]:
                        orow[j] = orow[j] + c * row[j]
        return out

    def apply(self, v: list, b: int) -> list:
        return vecmat(v, self.act[b], self.field.zero)

    def unit_vector(self, k: int) -> list:
        v = [self.field.zero] * self.dim
        v[k] = self.field.one
        return v

    def is_valid(self) -> bool:
        """Unital, associative action compatible with the vertex grading."""
        alg = self.algebra
        one = self.field.one
        n = self.dim
        ident = [[one if i == j else self.field.zero for j in range(n)] for i in range(n)]
        if self.act_elem(alg.unit) != ident:
            return False
        for v, e in enumerate(alg.idempotents):
            diag = [[one if (i == j and self.vertex_of[i] == v) else self.field.zero
                     for j in range(n)] for i in range(n)]
            if self.act[e] != diag:
                return False
        for i in range(alg.dim):
            for j, prod in alg.mult[i].items():
                if matmul(self.act[i], self.act[j], self.field) != self.act_elem(prod):
                    return False
            for j in range(alg.dim):
                if j not in alg.mult[i] and any(any(r) for r in matmul(self.act[i], self.act[j], self.field)):
                    return False
        return True


@dataclass
class ModuleMap:
    source: Module
    target: Module
    matrix: list

    def is_homomorphism(self) -> bool:
        return is_homomorphism(self.source, self.target, self.matrix)

    @property
    def rank(self) -> int:
        ech = Echelon(self.source.field)
        for row in self.matrix:
            ech.add(sparse(row))
        return ech.rank


def is_homomorphism(m: Module, n: Module, f: list) -> bool:
    fld = m.field
    for g in m.algebra.generators:
        if matmul(m.act[g], f, fld) != matmul(f, n.act[g], fld):
            return False
    return True


def zero_module(alg: Algebra, name: str = "0") -> Module:
    return Module(alg, [], [[] for _ in range(alg.dim)], name)


# ---------------------------------------------------------------- standard modules


def _cache(alg: Algebra) -> dict:
    if not hasattr(alg, "_module_cache"):
        alg._module_cache = {}
    return alg._module_cache


def op_algebra(alg: Algebra) -> Algebra:
    """Opposite algebra, shared so that dual modules are comparable."""
    c = _cache(alg)
    if "op" not in c:
        op = opposite(alg)
        _cache(op)["op"] = alg
        c["op"] = op
    return c["op"]


def simple(alg: Algebra, v: int) -> Module:
    c = _cache(alg)
    key = ("S", v)
    if key not in c:
        fld = alg.field
        act = [[[fld.one if b == alg.idempotents[v] else fld.zero]] for b in range(alg.dim)]
        c[key] = Module(alg, [v], act, f"S_{alg.vertex_labels[v]}")
    return c[key]


def projective(alg: Algebra, v: int) -> Module:
    c = _cache(alg)
    key = ("P", v)
    if key not in c:
        basis = alg.row_basis(v)
        pos = {b: k for k, b in enumerate(basis)}
        z = alg.field.zero
        act = []
        for x in range(alg.dim):
            mat = []
            for b in basis:
                row = [z] * len(basis)
                prod = alg.mult[b].get(x)
                if prod:
                    for k, val in prod.items():
                        row[pos[k]] = val
                mat.append(row)
            act.append(mat)
        c[key] = Module(alg, [alg.slices[b][1] for b in basis], act, f"P_{alg.vertex_labels[v]}")
    return c[key]


def injective(alg: Algebra, v: int) -> Module:
    """Dual of the left projective A e_v: (c* . x)(c') = coefficient of c in x c'."""
    c = _cache(alg)
    key = ("I", v)
    if key not in c:
        basis = alg.column_basis(v)
        z = alg.field.zero
        act = []
        for x in range(alg.dim):
            mat = [[z] * len(basis) for _ in basis]
            for jc, cp in enumerate(basis):
                prod = alg.mult[x].get(cp)
                if prod:
                    for ic, cc in enumerate(basis):
                        val = prod.get(cc)
                        if val:
                            mat[ic][jc] = val
            act.append(mat)
        c[key] = Module(alg, [alg.slices[b][0] for b in basis], act, f"I_{alg.vertex_labels[v]}")
    return c[key]


def simples(alg: Algebra) -> list[Module]:
    return [simple(alg, v) for v in range(alg.n)]


def projectives(alg: Algebra) -> list[Module]:
    return [projective(alg, v) for v in range(alg.n)]


def injectives(alg: Algebra) -> list[Module]:
    return [injective(alg, v) for v in range(alg.n)]


def regular_module(alg: Algebra) -> Module:
    return direct_sum([projective(alg, v) for v in range(alg.n)], name=f"{alg.name}_reg")


def direct_sum(mods: list[Module], name: str = "") -> Module:
    if not mods:
        raise ValueError("empty direct sum")
    alg = mods[0].algebra
    z = alg.field.zero
    total = sum(m.dim for m in mods)
    vertex_of = [v for m in mods for v in m.vertex_of]
    act = []
    for b in range(alg.dim):
        mat = [[z] * total for _ in range(total)]
        off = 0
        for m in mods:
            for i in range(m.dim):
                mat[off + i][off:off + m.dim] = m.act[b][i]
            off += m.dim
        act.append(mat)
    return Module(alg, vertex_of, act, name or "+".join(m.name for m in mods))


def dual(m: Module) -> Module:
    """k-dual as a right module over the opposite algebra."""
    op = op_algebra(m.algebra)
    act = [[list(col) for col in zip(*a)] if a else [] for a in m.act]
    return Module(op, m.vertex_of, act, f"D{m.name}")


def composition_multiplicities(m: Module) -> list[int]:
    return m.dimvec


# ---------------------------------------------------------------- subspaces


def _block_rref(vectors: list[list], block: list[int], fld: Field) -> dict:
    """RREF (pivot first) of vectors supported on ``block``; returns pivot -> sparse row."""
    ech = Echelon(fld)
    for v in vectors:
        ech.add({k: v[k] for k in block if v[k]})
    return ech


def homogeneous_parts(m: Module, v: list) -> list[tuple[int, list]]:
    out = []
    z = m.field.zero
    for vert, blk in enumerate(m.blocks):
        if any(v[k] for k in blk):
            w = [z] * m.dim
            for k in blk:
                w[k] = v[k]
            out.append((vert, w))
    return out


def span_closure(m: Module, vectors: list[list]) -> list[Echelon]:
    """Per-vertex RREF of the submodule generated by ``vectors``."""
    alg = m.algebra
    fld = m.field
    echs = [Echelon(fld) for _ in range(alg.n)]
    gens_from = [[] for _ in range(alg.n)]
    for g in alg.radical_generators:
        gens_from[alg.slices[g][0]].append(g)
    queue = []
    for v in vectors:
        if len(v) != m.dim:
            raise ValueError("vector outside the module")
        for vert, w in homogeneous_parts(m, v):
            if echs[vert].add(sparse(w)):
                queue.append((vert, w))
    while queue:
        vert, w = queue.pop()
        for g in gens_from[vert]:
            u = m.apply(w, g)
            tv = alg.slices[g][1]
            if any(u) and echs[tv].add(sparse(u)):
                queue.append((tv, u))
    return echs


def _rows_of(echs: list[Echelon], n: int, fld: Field) -> list[tuple[int, int, list]]:
    rows = []
    for vert, ech in enumerate(echs):
        for p in sorted(ech.rows):
            rows.append((vert, p, dense(ech.rows[p], n, fld.zero)))
    return rows


def submodule_from_echelons(m: Module, echs: list[Echelon], name: str = "") -> tuple[Module, list]:
    """Module on the RREF rows of a closed graded subspace, plus the inclusion."""
    fld = m.field
    rows = _rows_of(echs, m.dim, fld)
    pivots = [p for _, p, _ in rows]
    z = fld.zero
    act = []
    for b in range(m.algebra.dim):
        mat = []
        for _, _, r in rows:
            img = vecmat(r, m.act[b], z)
            # RREF rows: the coordinate along a row is the entry at its pivot
            mat.append([img[p] for p in pivots])
        act.append(mat)
    sub = Module(m.algebra, [v for v, _, _ in rows], act, name or f"sub({m.name})")
    return sub, [r for _, _, r in rows]


def submodule_generated(m: Module, vectors: list[list], name: str = "") -> tuple[Module, list]:
    return submodule_from_echelons(m, span_closure(m, vectors), name)


def subspace_echelons(m: Module, basis: list[list]) -> list[Echelon]:
    return span_closure(m, basis)


def quotient(m: Module, sub_rows: list[list], name: str = "") -> tuple[Module, list]:
    """Quotient by the submodule spanned by ``sub_rows`` plus the projection matrix."""
    fld = m.field
    echs = span_closure(m, sub_rows)
    comp = []  # complementary unit columns per vertex
    for vert, blk in enumerate(m.blocks):
        comp.extend((vert, k) for k in blk if k not in echs[vert].rows)
    col_pos = {k: i for i, (_, k) in enumerate(comp)}
    z = fld.zero

    def reduce_coords(v: list) -> list:
        s = sparse(v)
        out = [z] * len(comp)
        for vert in range(m.algebra.n):
            ech = echs[vert]
            if ech.rows:
                s, _ = ech.reduce(s)
        for k, val in s.items():
            out[col_pos[k]] = val
        return out

    act = []
    for b in range(m.algebra.dim):
        act.append([reduce_coords(m.act[b][k]) for _, k in comp])
    proj = [reduce_coords(m.unit_vector(k)) for k in range(m.dim)]
    q = Module(m.algebra, [v for v, _ in comp], act, name or f"{m.name}/sub")
    q.complement_columns = [k for _, k in comp]
    return q, proj


def radical_submodule(m: Module) -> list[Echelon]:
    """Per-vertex RREF of M.rad."""
    alg = m.algebra
    vecs = []
    for g in alg.radical_generators:
        i = alg.slices[g][0]
        for k in m.blocks[i]:
            u = m.act[g][k]
            if any(u):
                vecs.append(list(u))
    return span_closure(m, vecs)


def radical_power_rows(m: Module, power: int) -> list[list]:
    """Basis rows of M.rad^power."""
    fld = m.field
    rows = [m.unit_vector(k) for k in range(m.dim)]
    for _ in range(power):
        nxt = Echelon(fld)
        for r in rows:
            for g in m.algebra.radical_generators:
                u = m.apply(r, g)
                if any(u):
                    nxt.add(sparse(u))
        rows = [dense(r, m.dim, fld.zero) for r in nxt.rows.values()]
        if not rows:
            break
    return rows


def top_representatives(m: Module) -> list[tuple[int, list]]:
    """Vectors at single vertices whose images form a basis of M/M.rad."""
    rad = radical_submodule(m)
    reps = []
    for vert, blk in enumerate(m.blocks):
        for k in blk:
            if k not in rad[vert].rows:
                reps.append((vert, m.unit_vector(k)))
    return reps


def largest_submodule_avoiding(m: Module, avoid, name: str = "") -> tuple[Module, list]:
    """{v : v . a . e_j = 0 for all a, j in avoid}: largest submodule without S_j factors."""
    alg = m.algebra
    fld = m.field
    avoid = set(avoid)
    echs = [Echelon(fld) for _ in range(alg.n)]
    for vert, blk in enumerate(m.blocks):
        bad = [b for b, (i, j) in enumerate(alg.slices) if i == vert and j in avoid]
        cons = Echelon(fld)
        for b in bad:
            for col in range(m.dim):
                eq = {ii: m.act[b][k][col] for ii, k in enumerate(blk) if m.act[b][k][col]}
                if eq:
                    cons.add(eq)
        for x in cons.kernel(len(blk)):
            v = [fld.zero] * m.dim
            for ii, val in x.items():
                v[blk[ii]] = val
            echs[vert].add(sparse(v))
    return submodule_from_echelons(m, echs, name or f"{m.name}_avoid")


def kernel_rows(m: Module, n: Module, f: list) -> list[list]:
    """Homogeneous basis of ker(f: M -> N)."""
    fld = m.field
    out = []
    for vert, blk in enumerate(m.blocks):
        cols = n.blocks[vert]
        ech = Echelon(fld)
        for c in cols:
            ech.add({ii: f[k][c] for ii, k in enumerate(blk) if f[k][c]})
        for x in ech.kernel(len(blk)):
            v = [fld.zero] * m.dim
            for ii, val in x.items():
                v[blk[ii]] = val
            out.append(v)
    return out


def kernel(m: Module, n: Module, f: list, name: str = "") -> tuple[Module, list]:
    rows = kernel_rows(m, n, f)
    echs = [Echelon(m.field) for _ in range(m.algebra.n)]
    for r in rows:
        echs[m.vertex_of[next(i for i, x in enumerate(r) if x)]].add(sparse(r))
    return submodule_from_echelons(m, echs, name or f"ker")


def image(m: Module, n: Module, f: list, name: str = "") -> tuple[Module, list]:
    return submodule_generated(n, [row for row in f if any(row)], name or "im")


def loewy_length(m: Module) -> int:
    """Smallest i with M.rad^i = 0."""
    if m.dim == 0:
        return 0
    alg = m.algebra
    fld = m.field
    cur = [m.unit_vector(k) for k in range(m.dim)]
    length = 0
    while cur:
        length += 1
        nxt = Echelon(fld)
        for v in cur:
            for g in alg.radical_generators:
                u = m.apply(v, g)
                if any(u):
                    nxt.add(sparse(u))
        cur = [dense(r, m.dim, fld.zero) for r in nxt.rows.values()]
    return length


def restrict_to_corner(m: Module, positions, corner: Algebra) -> Module:
    """M.e as a module over the corner algebra eAe (built by ``centralizer``)."""
    alg = m.algebra
    positions = sorted(set(positions))
    new = {p: k for k, p in enumerate(positions)}
    keep_basis = [b for b, (i, j) in enumerate(alg.slices) if i in new and j in new]
    keep = [k for k, v in enumerate(m.vertex_of) if v in new]
    act = [[[m.act[b][r][c] for c in keep] for r in keep] for b in keep_basis]
    return Module(corner, [new[m.vertex_of[k]] for k in keep], act, f"{m.name}e")


# ---------------------------------------------------------------- Hom


def hom_space(m: Module, n: Module) -> list[list]:
    """Basis of Hom_A(M, N) as matrices."""
    if m.algebra is not n.algebra:
        raise AlgebraMismatchError("modules over different algebras")
    alg = m.algebra
    fld = m.field
    index = {}
    for vert in range(alg.n):
        for r in m.blocks[vert]:
            for c in n.blocks[vert]:
                index[(r, c)] = len(index)
    ech = Echelon(fld)
    for g in alg.radical_generators:
        i, j = alg.slices[g]
        am, an = m.act[g], n.act[g]
        for r in m.blocks[i]:
            for c in n.blocks[j]:
                eq: dict = {}
                for k in m.blocks[j]:
                    x = am[r][k]
                    if x:
                        key = index[(k, c)]
                        eq[key] = eq.get(key, fld.zero) + x
                for k in n.blocks[i]:
                    x = an[k][c]
                    if x:
                        key = index[(r, k)]
                        eq[key] = eq.get(key, fld.zero) - x
                eq = {a: b for a, b in eq.items() if b}
                if eq:
                    ech.add(eq)
    inv = {v: k for k, v in index.items()}
    out = []
    for x in ech.kernel(len(index)):
        f = [[fld.zero] * n.dim for _ in range(m.dim)]
        for key, val in x.items():
            r, c = inv[key]
            f[r][c] = val
        out.append(f)
    return out


def hom_dim(m: Module, n: Module) -> int:
    return len(hom_space(m, n))


def is_isomorphic(m: Module, n: Module, seed: int = 0, tries: int = 20):
    """An explicit isomorphism M -> N, or None.

    None after ``tries`` random combinations of a Hom basis all fail to be
    invertible; over Q this is wrong only with negligible probability.
    """
    if m.dimvec != n.dimvec:
        return None
    if m.dim == 0:
        return []
    basis = hom_space(m, n)
    if not basis:
        return None
    fld = m.field
    rng = random.Random(seed)
    for _ in range(tries):
        coeffs = [fld.random(rng, 10**6) for _ in basis]
        f = [[fld.zero] * n.dim for _ in range(m.dim)]
        for c, b in zip(coeffs, basis):
            for i in range(m.dim):
                for j in range(n.dim):
                    if b[i][j]:
                        f[i][j] = f[i][j] + c * b[i][j]
        if ModuleMap(m, n, f).rank == m.dim:
            return f
    return None


# ---------------------------------------------------------------- free modules


class FreeModule(Module):
    """Direct sum of indecomposable projectives e_{v_c} A, one per generator."""

    def __init__(self, alg: Algebra, gens: list[int], name: str = "F"):
        self.gens = list(gens)
        self.copy_basis = [alg.row_basis(v) for v in self.gens]
        self.offsets = []
        off = 0
        for cb in self.copy_basis:
            self.offsets.append(off)
            off += len(cb)
        parts = [projective(alg, v) for v in self.gens]
        z = alg.field.zero
        vertex_of = [v for p in parts for v in p.vertex_of]
        act = []
        for b in range(alg.dim):
            mat = [[z] * off for _ in range(off)]
            for p, o in zip(parts, self.offsets):
                for i in range(p.dim):
                    mat[o + i][o:o + p.dim] = p.act[b][i]
            act.append(mat)
        super().__init__(alg, vertex_of, act, name)

    def generator_vector(self, c: int) -> list:
        """The vector of generator c (the idempotent in copy c)."""
        e = self.algebra.idempotents[self.gens[c]]
        return self.unit_vector(self.offsets[c] + self.copy_basis[c].index(e))

    def components(self, v: list) -> list[dict]:
        """Split a vector into algebra elements, one per copy."""
        out = []
        for cb, o in zip(self.copy_basis, self.offsets):
            out.append({b: v[o + k] for k, b in enumerate(cb) if v[o + k]})
        return out

    def map_matrix(self, target: Module, images: list[list]) -> list:
        """Matrix of the map sending generator c to ``images[c]``."""
        rows = []
        for c, img in enumerate(images):
            for b in self.copy_basis[c]:
                rows.append(target.apply(img, b))
        return rows


def free_module(alg: Algebra, gens: list[int], name: str = "F") -> FreeModule:
    return FreeModule(alg, gens, name)


def projective_cover(m: Module) -> tuple[FreeModule, ModuleMap]:
    reps = top_representatives(m)
    free = FreeModule(m.algebra, [v for v, _ in reps], f"cover({m.name})")
    mat = free.map_matrix(m, [r for _, r in reps])
    return free, ModuleMap(free, m, mat)


@dataclass
class Resolution:
    module: Module
    terms: list[FreeModule]  # F_0, F_1, ...
    augmentation: list  # images of F_0 generators in the module
    differentials: list  # differentials[k] = images of F_{k+1} generators in F_k
    truncated: bool = False
    max_len: int = 0

    @property
    def length(self) -> int:
        return len(self.terms) - 1 if self.terms else -1

    @property
    def minimal(self) -> bool:
        return True

    def term_gens(self) -> list[list[int]]:
        return [t.gens for t in self.terms]


def _cover_of_subspace(amb: Module, rows: list[list]) -> list[tuple[int, list]]:
    """Top representatives of the (closed) subspace spanned by rows."""
    alg = amb.algebra
    fld = amb.field
    rad_vecs = []
    for r in rows:
        v = amb.vertex_of[next(i for i, x in enumerate(r) if x)]
        for g in alg.radical_generators:
            if alg.slices[g][0] == v:
                u = amb.apply(r, g)
                if any(u):
                    rad_vecs.append(u)
    rad = [Echelon(fld) for _ in range(alg.n)]
    for u in rad_vecs:
        rad[amb.vertex_of[next(i for i, x in enumerate(u) if x)]].add(sparse(u))
    reps = []
    for r in rows:
        v = amb.vertex_of[next(i for i, x in enumerate(r) if x)]
        if rad[v].add(sparse(r)):
            reps.append((v, r))
    return reps


def default_max_len(alg: Algebra) -> int:
    return 2 * alg.dim


def minimal_resolution(m: Module, max_len: int | None = None) -> Resolution:
    if max_len is None:
        max_len = default_max_len(m.algebra)
    cached = m._resolution
    if cached is not None and (cached.max_len >= max_len or not cached.truncated):
        return cached
    alg = m.algebra
    terms, diffs = [], []
    if m.dim == 0:
        res = Resolution(m, [], [], [], False, max_len)
        m._resolution = res
        return res
    reps = top_representatives(m)
    f0 = FreeModule(alg, [v for v, _ in reps], "F0")
    aug = [r for _, r in reps]
    terms.append(f0)
    ker = kernel_rows(f0, m, f0.map_matrix(m, aug))
    truncated = False
    while ker:
        if len(terms) > max_len:
            truncated = True
            break
        prev = terms[-1]
        # order kernel vectors so the closure is computed from a basis
        echs = [Echelon(m.field) for _ in range(alg.n)]
        for r in ker:
            echs[prev.vertex_of[next(i for i, x in enumerate(r) if x)]].add(sparse(r))
        rows = [r for _, _, r in _rows_of(echs, prev.dim, m.field)]
        reps = _cover_of_subspace(prev, rows)
        f = FreeModule(alg, [v for v, _ in reps], f"F{len(terms)}")
        images = [r for _, r in reps]
        terms.append(f)
        diffs.append(images)
        ker = kernel_rows(f, prev, f.map_matrix(prev, images))
    res = Resolution(m, terms, aug, diffs, truncated, max_len)
    m._resolution = res
    return res


def projective_dimension(m: Module, max_len: int | None = None):
    res = minimal_resolution(m, max_len)
    return None if res.truncated else res.length


def global_dimension(alg: Algebra, bound: int | None = None):
    """Max projective dimension of the simples; None means infinite (bound exceeded)."""
    bound = default_max_len(alg) if bound is None else bound
    best = 0
    for s in simples(alg):
        pd = projective_dimension(s, bound)
        if pd is None:
            return None
        best = max(best, pd)
    return best


# ---------------------------------------------------------------- complexes


@dataclass
class Complex:
    """Bounded cochain complex: modules by degree, d[k]: degree k -> k+1."""

    modules: dict
    diffs: dict = dc_field(default_factory=dict)
    name: str = "X"

    @property
    def algebra(self) -> Algebra:
        return next(iter(self.modules.values())).algebra

    def degrees(self) -> list[int]:
        return sorted(k for k, m in self.modules.items() if m.dim)

    def is_valid(self) -> bool:
        for k, d in self.diffs.items():
            src, tgt = self.modules.get(k), self.modules.get(k + 1)
            if src is None or tgt is None:
                return False
            if not is_homomorphism(src, tgt, d):
                return False
            nxt = self.diffs.get(k + 1)
            if nxt is not None and any(any(r) for r in matmul(d, nxt, src.field)):
                return False
        return True

    def cohomology_dims(self) -> dict[int, int]:
        out = {}
        for k in sorted(self.modules):
            m = self.modules[k]
            d = self.diffs.get(k)
            ker = len(kernel_rows(m, self.modules[k + 1], d)) if d is not None else m.dim
            dprev = self.diffs.get(k - 1)
            im = ModuleMap(self.modules[k - 1], m, dprev).rank if dprev is not None else 0
            if ker - im:
                out[k] = ker - im
        return out


def as_complex(x) -> Complex:
    if isinstance(x, Complex):
        return x
    return Complex({0: x}, {}, x.name)


def two_term(src: Module, tgt: Module, f: list, degree: int = 0, name: str = "") -> Complex:
    """The complex src (degree ``degree``) -> tgt (degree ``degree + 1``)."""
    return Complex({degree: src, degree + 1: tgt}, {degree: f}, name or f"[{src.name}->{tgt.name}]")


@dataclass
class ProjComplex:
    """Complex of free modules; diffs[k][c] = image of gen c of R^k in R^{k+1}."""

    terms: dict
    diffs: dict
    truncated: bool = False
    lowest_exact: int | None = None  # H^n of Hom into bounded targets is exact above this

    def component_table(self) -> dict:
        """(k, c', c) -> algebra element: copy-c part of d(gen c') for c' in R^{k-1}."""
        table = {}
        for k, imgs in self.diffs.items():
            tgt = self.terms[k + 1]
            for cp, img in enumerate(imgs):
                for c, comp in enumerate(tgt.components(img)):
                    if comp:
                        table[(k + 1, cp, c)] = comp
        return table


def resolution_complex(m: Module, max_len: int | None = None, shift: int = 0) -> ProjComplex:
    res = minimal_resolution(m, max_len)
    terms = {shift - k: t for k, t in enumerate(res.terms)}
    diffs = {shift - k - 1: imgs for k, imgs in enumerate(res.differentials)}
    low = shift - len(res.terms) + 1 if res.truncated else None
    return ProjComplex(terms, diffs, res.truncated, low)


def _solve_in_block(free: FreeModule, target: Module, mat: list, vert: int, want: list):
    """z in free.e_vert with z @ mat == want (mat: matrix of a map free -> target)."""
    fld = free.field
    blk = free.blocks[vert]
    ech = Echelon(fld, track=True)
    for k in blk:
        ech.add(sparse(mat[k]))
    coords = ech.coordinates(sparse(want))
    if coords is None:
        raise ArithmeticError("lifting problem has no solution")
    z = [fld.zero] * free.dim
    for idx, val in coords.items():
        z[blk[idx]] = val
    return z


def lift_chain_map(p: Resolution, q: Resolution, f: list) -> list[list]:
    """Chain map F_k: P_k -> Q_k over f: p.module -> q.module (generator images)."""
    fld = p.module.field
    out = []
    if not p.terms:
        return out
    if q.terms:
        eq = q.terms[0].map_matrix(q.module, q.augmentation)
    imgs = []
    for c, mc in enumerate(p.augmentation):
        want = vecmat(mc, f, fld.zero)
        if not any(want):
            imgs.append([fld.zero] * (q.terms[0].dim if q.terms else 0))
            continue
        imgs.append(_solve_in_block(q.terms[0], q.module, eq, p.terms[0].gens[c], want))
    out.append(imgs)
    for k in range(1, len(p.terms)):
        prev_mat = p.terms[k - 1].map_matrix(q.terms[k - 1], out[k - 1]) if k - 1 < len(q.terms) else None
        imgs = []
        has_q = k < len(q.terms)
        dq = q.terms[k].map_matrix(q.terms[k - 1], q.differentials[k - 1]) if has_q else None
        for c, img in enumerate(p.differentials[k - 1]):
            if prev_mat is None:
                want = []
            else:
                want = vecmat(img, prev_mat, fld.zero)
            if not any(want):
                imgs.append([fld.zero] * (q.terms[k].dim if has_q else 0))
                continue
            if not has_q:
                raise ArithmeticError("chain map does not lift")
            imgs.append(_solve_in_block(q.terms[k], q.terms[k - 1], dq, p.terms[k].gens[c], want))
        out.append(imgs)
    return out


def projective_replacement(x, max_len: int | None = None) -> ProjComplex:
    """Projective resolution of a module or of a two-term complex (mapping cone)."""
    x = as_complex(x)
    degs = sorted(x.modules)
    if len(degs) == 1:
        return resolution_complex(x.modules[degs[0]], max_len, degs[0])
    if len(degs) != 2 or degs[1] != degs[0] + 1:
        raise NotImplementedError("only modules and two-term complexes are supported")
    a = degs[0]
    src, tgt = x.modules[a], x.modules[a + 1]
    f = x.diffs.get(a)
    alg = x.algebra
    p = minimal_resolution(src, max_len)
    q = minimal_resolution(tgt, max_len)
    lift = lift_chain_map(p, q, f) if f is not None else []
    terms, diffs = {}, {}
    # P_k sits in degree a - k, Q_k in degree a + 1 - k
    lo = min(a - len(p.terms) + 1, a + 1 - len(q.terms) + 1)
    layout = {}
    for n in range(lo, a + 2):
        kp, kq = a - n, a + 1 - n
        pg = p.terms[kp].gens if 0 <= kp < len(p.terms) else []
        qg = q.terms[kq].gens if 0 <= kq < len(q.terms) else []
        if pg or qg:
            terms[n] = FreeModule(alg, pg + qg, f"R{n}")
            layout[n] = (kp, kq, len(pg))
    z = alg.field.zero
    for n, (kp, kq, npg) in layout.items():
        if n + 1 not in terms:
            continue
        tgt_free = terms[n + 1]
        kp1, kq1, npg1 = layout[n + 1]
        p_off = tgt_free.offsets[npg1] if npg1 < len(tgt_free.gens) else tgt_free.dim
        imgs = []
        src_free = terms[n]
        for c in range(len(src_free.gens)):
            v = [z] * tgt_free.dim
            if c < npg:
                # d(p) = (d_P p, F p)
                if kp >= 1:
                    dp = p.differentials[kp - 1][c]
                    v[:len(dp)] = dp
                if lift and kp < len(lift) and 0 <= kq1 < len(q.terms):
                    fp = lift[kp][c]
                    for i, val in enumerate(fp):
                        if val:
                            v[p_off + i] = val
            else:
                cq = c - npg
                if kq >= 1:
                    dq = q.differentials[kq - 1][cq]
                    for i, val in enumerate(dq):
                        if val:
                            v[p_off + i] = -val
            imgs.append(v)
        diffs[n] = imgs
    truncated = p.truncated or q.truncated
    low = lo if truncated else None
    return ProjComplex(terms, diffs, truncated, low)


def hom_complex_cohomology(r: ProjComplex, y) -> dict[int, int]:
    """dim H^n Hom^*(R, Y) for every n where the Hom complex is nonzero."""
    y = as_complex(y)
    ydeg = y.degrees()
    alg = y.algebra
    fld = alg.field
    if not ydeg or not r.terms:
        return {}
    rdeg = sorted(r.terms)
    ns = sorted({j - k for k in rdeg for j in ydeg})
    comps = r.component_table()

    def basis_of(n):
        idx = []
        for k in rdeg:
            ym = y.modules.get(k + n)
            if ym is None or not ym.dim:
                continue
            for c, v in enumerate(r.terms[k].gens):
                for t in ym.blocks[v]:
                    idx.append((k, c, t))
        return idx

    bases = {n: basis_of(n) for n in range(ns[0] - 1, ns[-1] + 2)}
    positions = {n: {key: i for i, key in enumerate(b)} for n, b in bases.items()}
    ranks = {}
    for n in range(ns[0] - 1, ns[-1] + 1):
        src, tgt = bases[n], positions[n + 1]
        if not src or not tgt:
            ranks[n] = 0
            continue
        sign = fld.one if n % 2 else -fld.one  # -(-1)^n
        ech = Echelon(fld)
        for (k, c, t) in src:
            row: dict = {}
            ym = y.modules[k + n]
            dy = y.diffs.get(k + n)
            if dy is not None:
                for t2, val in enumerate(dy[t]):
                    if val:
                        key = tgt.get((k, c, t2))
                        if key is not None:
                            row[key] = row.get(key, fld.zero) + val
            # -(-1)^n phi o d_R: contributes on gens c' of R^{k-1}
            if k - 1 in r.terms:
                for cp in range(len(r.terms[k - 1].gens)):
                    a = comps.get((k, cp, c))
                    if not a:
                        continue
                    for b, coef in a.items():
                        arow = ym.act[b][t]
                        for t2, val in enumerate(arow):
                            if val:
                                key = tgt.get((k - 1, cp, t2))
                                if key is not None:
                                    row[key] = row.get(key, fld.zero) + sign * coef * val
            row = {a: b for a, b in row.items() if b}
            if row:
                ech.add(row)
        ranks[n] = ech.rank
    out = {}
    for n in ns:
        h = len(bases[n]) - ranks[n] - ranks.get(n - 1, 0)
        if h:
            out[n] = h
    return out


def ext_all(x, y, max_len: int | None = None, allow_truncated: bool = False) -> dict[int, int]:
    """All nonzero dim Ext^n(X, Y) for modules or two-term complexes."""
    r = projective_replacement(x, max_len)
    dims = hom_complex_cohomology(r, y)
    if r.truncated:
        if not allow_truncated:
            raise TruncatedResolutionError(
                "projective resolution did not terminate within the bound; "
                "pass an explicit bound to get the reliable low degrees")
        ymin = min(as_complex(y).degrees(), default=0)
        limit = ymin - r.lowest_exact
        dims = {n: d for n, d in dims.items() if n < limit}
    return dims


def ext(m, n, degree: int, bound: int | None = None) -> int:
    if bound is not None:
        return ext_all(m, n, bound, allow_truncated=True).get(degree, 0)
    return ext_all(m, n).get(degree, 0)


def ext_vanishing_all(m, n, bound: int | None = None) -> bool:
    return not ext_all(m, n, bound, allow_truncated=bound is not None)


def euler_chi(m, n, bound: int | None = None) -> int:
    return sum((-1) ** d * v for d, v in ext_all(m, n, bound).items())


def cartan_matrix(alg: Algebra) -> list[list[int]]:
    return alg.cartan()


def euler_form_from_cartan(alg: Algebra, dm: list[int], dn: list[int]):
    """dim(M) . C^{-1} . dim(N)^T with C[i][j] = [P_i : S_j]."""
    from fractions import Fraction

    from .exactlin import QQ, inverse

    c = [[Fraction(x) for x in row] for row in alg.cartan()]
    ci = inverse(c, QQ)
    left = vecmat([Fraction(x) for x in dm], ci, Fraction(0))
    return sum(a * b for a, b in zip(left, dn))


# ---------------------------------------------------------------- End algebras


@dataclass
class EndomorphismData:
    algebra: Algebra
    summands: list[Module]
    maps: list  # basis element -> (t, s, matrix M_s -> M_t)
    coords: dict = dc_field(default_factory=dict)

    def element(self, t: int, s: int, f: list) -> dict:
        """The algebra element of a map M_s -> M_t."""
        ech, members = self.coords[(t, s)]
        c = ech.coordinates(sparse([x for row in f for x in row]))
        if c is None:
            raise ValueError("not a homomorphism between these summands")
        return {members[k]: v for k, v in c.items() if v}


def top_coefficient(m: Module):
    """Functional f -> scalar with u f = lambda u mod M.rad, for simple-top M."""
    reps = top_representatives(m)
    if len(reps) != 1:
        raise ValueError(f"{m.name} does not have a simple top")
    vert, u = reps[0]
    rad = radical_submodule(m)[vert]
    key = next(i for i, x in enumerate(u) if x)

    def coeff(f):
        img = vecmat(u, f, m.field.zero)
        red, _ = rad.reduce(sparse(img))
        return red.get(key, m.field.zero) / u[key]

    return coeff, vert


def endomorphism_algebra(summands: list[Module], names: list[str] | None = None,
                         name: str = "End") -> EndomorphismData:
    """End(M_1 + ... + M_n) for pairwise non-isomorphic simple-top summands.

    Basis element in slice (t, s) is a map M_s -> M_t; the product is
    composition, x*y = x o y (first y, then x).
    """
    fld = summands[0].field
    n = len(summands)
    tops = [top_coefficient(m) for m in summands]
    keys = [(tops[i][1], tuple(summands[i].dimvec)) for i in range(n)]
    if len(set(keys)) != n:
        # same top vertex and dimension vector: rule out an isomorphism explicitly
        for i in range(n):
            for j in range(i + 1, n):
                if keys[i] == keys[j] and is_isomorphic(summands[i], summands[j]) is not None:
                    raise ValueError("summands are not pairwise non-isomorphic")
    maps, labels, slices, idem = [], [], [], []
    hom = {}
    for t in range(n):
        for s in range(n):
            hom[(t, s)] = hom_space(summands[s], summands[t])
    names = names or [m.name for m in summands]
    for t in range(n):
        for s in range(n):
            basis = hom[(t, s)]
            if t == s:
                coeff = tops[t][0]
                ident = [[fld.one if i == j else fld.zero for j in range(summands[t].dim)]
                         for i in range(summands[t].dim)]
                idem.append(len(maps))
                maps.append((t, s, ident))
                labels.append(f"id[{names[t]}]")
                slices.append((t, s))
                vals = [coeff(b) for b in basis]
                piv = next((k for k, v in enumerate(vals) if v), None)
                rad_basis = []
                for k, b in enumerate(basis):
                    if k == piv:
                        continue
                    if piv is not None and vals[k]:
                        c = vals[k] / vals[piv]
                        b = [[x - c * y for x, y in zip(r1, r2)] for r1, r2 in zip(b, basis[piv])]
                    rad_basis.append(b)
                basis = rad_basis
            for k, b in enumerate(basis):
                maps.append((t, s, b))
                labels.append(f"{names[s]}->{names[t]}#{k + 1}")
                slices.append((t, s))
    # coordinates within each slice
    coords = {}
    for key in hom:
        ech = Echelon(fld, track=True)
        members = [i for i, (t, s, _) in enumerate(maps) if (t, s) == key]
        for i in members:
            ech.add(sparse([x for row in maps[i][2] for x in row]))
        coords[key] = (ech, members)
    mult = []
    for i, (t, s, x) in enumerate(maps):
        row = {}
        for j, (s2, r, y) in enumerate(maps):
            if s2 != s:
                continue
            prod = matmul(y, x, fld)  # first y then x
            flat = sparse([v for rr in prod for v in rr])
            if not flat:
                continue
            ech, members = coords[(t, r)]
            c = ech.coordinates(flat)
            if c is None:
                raise ArithmeticError("composition left the Hom space")
            row[j] = {members[k]: v for k, v in c.items() if v}
        mult.append(row)
    alg = Algebra(fld, labels, mult, idem, slices, names, name)
    return EndomorphismData(alg, summands, maps, coords)
