"""Exact scalar fields and the linear algebra used throughout the package.

Two working fields are supported: the rationals (``QQ``, backed by
:class:`fractions.Fraction`) and prime fields ``GF(p)`` whose elements are
:class:`Mod` instances.  Matrices are plain row-major lists of lists; sparse
vectors are ``dict[int, element]`` with zero entries omitted.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class ScalarParseError(ValueError):
    pass


class Mod:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Mod):
            if other.p != self.p:
                raise ValueError(f"mixing GF({self.p}) and GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return Mod(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Mod(o, self.p) / self

    def __neg__(self):
        return Mod(-self.v, self.p)

    def __pos__(self):
        return self

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, Mod):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return (self.v - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __repr__(self):
        return f"{self.v} mod {self.p}"

    __str__ = __repr__


class Field:
    """Common interface of the two working fields."""

    characteristic: int
    name: str

    def __call__(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def random(self, rng: random.Random, bound: int = 1000):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class RationalField(Field):
    characteristic = 0
    name = "Q"

    def __call__(self, x):
        if isinstance(x, Mod):
            raise TypeError("cannot coerce a residue class into Q")
        return Fraction(x)

    def parse(self, text: str):
        s = text.strip()
        if " mod " in s:
            raise ScalarParseError(f"residue {s!r} given for the rational field")
        try:
            return Fraction(s.replace(" ", ""))
        except (ValueError, ZeroDivisionError) as exc:
            raise ScalarParseError(f"not a rational number: {text!r}") from exc

    def format(self, x) -> str:
        # integers print without denominator; everything else as p/q, q > 0
        return str(Fraction(x))

    def random(self, rng: random.Random, bound: int = 1000):
        return Fraction(rng.randint(-bound, bound))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class PrimeField(Field):
    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.name = f"GF({p})"

    def __call__(self, x):
        p = self.characteristic
        if isinstance(x, Mod):
            if x.p != p:
                raise ValueError(f"mixing GF({x.p}) and GF({p})")
            return x
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise ZeroDivisionError(f"{x} has no image in GF({p})")
            return Mod(x.numerator * pow(x.denominator, -1, p), p)
        return Mod(int(x), p)

    def parse(self, text: str):
        s = text.strip()
        if " mod " in s:
            r, _, q = s.partition(" mod ")
            try:
                r, q = int(r), int(q)
            except ValueError as exc:
                raise ScalarParseError(f"malformed residue {text!r}") from exc
            if q != self.characteristic:
                raise ScalarParseError(f"residue {text!r} is not in {self.name}")
            return Mod(r, q)
        try:
            return self(Fraction(s.replace(" ", "")))
        except (ValueError, ZeroDivisionError) as exc:
            raise ScalarParseError(f"not an element of {self.name}: {text!r}") from exc

    def format(self, x) -> str:
        return f"{self(x).v} mod {self.characteristic}"

    def random(self, rng: random.Random, bound: int = 1000):
        return Mod(rng.randrange(self.characteristic), self.characteristic)

    def elements(self):
        p = self.characteristic
        return [Mod(v, p) for v in range(p)]

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("GF", self.characteristic))


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_tag(tag: str) -> Field:
    tag = tag.strip()
    if tag in ("Q", "QQ"):
        return QQ
    if tag.startswith("GF(") and tag.endswith(")"):
        try:
            return GF(int(tag[3:-1]))
        except ValueError as exc:
            raise ScalarParseError(f"bad field tag {tag!r}") from exc
    raise ScalarParseError(f"unknown field {tag!r}")


def infer_field(rows: Iterable[Iterable]) -> Field:
    for row in rows:
        for x in row:
            if isinstance(x, Mod):
                return GF(x.p)
    return QQ


# ---------------------------------------------------------------- sparse rows


def sparse(vec: Sequence) -> dict:
    return {i: x for i, x in enumerate(vec) if x}


def dense(vec: dict, n: int, zero) -> list:
    out = [zero] * n
    for i, x in vec.items():
        out[i] = x
    return out


def axpy(target: dict, coeff, source: dict) -> None:
    """In place ``target += coeff * source`` on sparse rows."""
    for k, v in source.items():
        nv = target.get(k)
        nv = coeff * v if nv is None else nv + coeff * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


class Echelon:
    """Incrementally maintained reduced row echelon form of a row space.

    Rows are sparse dicts.  ``pivot='first'`` pivots on the smallest column
    index of a new row, ``pivot='last'`` on the largest one.  With
    ``track=True`` every stored row also remembers its expression in terms of
    the vectors passed to :meth:`add`, numbered in insertion order (including
    the rejected, dependent ones).
    """

    def __init__(self, field: Field, pivot: str = "first", track: bool = False):
        self.field = field
        self.rows: dict[int, dict] = {}
        self.pivot = pivot
        self.track = track
        self.combos: dict[int, dict] = {}
        self.count = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict) -> tuple[dict, dict]:
        r = dict(vec)
        combo: dict = {}
        for p in [c for c in r if c in self.rows]:
            c = r.get(p)
            if not c:
                continue
            axpy(r, -c, self.rows[p])
            if self.track:
                axpy(combo, -c, self.combos[p])
        return r, combo

    def add(self, vec: dict) -> bool:
        idx = self.count
        self.count += 1
        r, combo = self.reduce(vec)
        if not r:
            return False
        if self.track:
            combo[idx] = self.field.one
        p = min(r) if self.pivot == "first" else max(r)
        inv = self.field.one / r[p]
        r = {k: v * inv for k, v in r.items()}
        if self.track:
            combo = {k: v * inv for k, v in combo.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                axpy(row, -c, r)
                if self.track:
                    axpy(self.combos[q], -c, combo)
        self.rows[p] = r
        if self.track:
            self.combos[p] = combo
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def kernel(self, ncols: int) -> list[dict]:
        """Basis of ``{x : row . x = 0 for every stored row}``."""
        one = self.field.one
        basis = []
        for f in range(ncols):
            if f in self.rows:
                continue
            x = {f: one}
            for p, row in self.rows.items():
                c = row.get(f)
                if c:
                    x[p] = -c
            basis.append(x)
        return basis

    def coordinates(self, vec: dict):
        """Coordinates of ``vec`` in the original added vectors, or None."""
        r, combo = self.reduce(vec)
        if r:
            return None
        return {k: -v for k, v in combo.items() if v}


# ---------------------------------------------------------------- dense API


def identity(n: int, field: Field = QQ) -> list[list]:
    z, o = field.zero, field.one
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def zeros(r: int, c: int, field: Field = QQ) -> list[list]:
    z = field.zero
    return [[z] * c for _ in range(r)]


def matmul(a: list[list], b: list[list], field: Field | None = None) -> list[list]:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    z = (field or infer_field(a + b)).zero
    out = []
    for row in a:
        acc = [z] * cols
        for k in range(inner):
            x = row[k]
            if x:
                brow = b[k]
                for j in range(cols):
                    y = brow[j]
                    if y:
                        acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def vecmat(v: list, m: list[list], zero) -> list:
    cols = len(m[0]) if m else 0
    acc = [zero] * cols
    for k, x in enumerate(v):
        if x:
            row = m[k]
            for j in range(cols):
                y = row[j]
                if y:
                    acc[j] = acc[j] + x * y
    return acc


def transpose(m: list[list], ncols: int | None = None) -> list[list]:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def rank(m: list[list], field: Field | None = None) -> int:
    """Rank of ``m`` over the exact field (inferred from the entries)."""
    ech = Echelon(field or infer_field(m))
    for row in m:
        ech.add(sparse(row))
    return ech.rank


def solve_right_kernel(m: list[list], ncols: int | None = None,
                       field: Field | None = None) -> list[list]:
    """Basis of ``{x : m x = 0}``, each basis vector as a dense list."""
    field = field or infer_field(m)
    if ncols is None:
        ncols = len(m[0]) if m else 0
    ech = Echelon(field)
    for row in m:
        ech.add(sparse(row))
    return [dense(x, ncols, field.zero) for x in ech.kernel(ncols)]


def inverse(m: list[list], field: Field | None = None) -> list[list]:
    field = field or infer_field(m)
    n = len(m)
    ech = Echelon(field, track=True)
    for row in m:
        ech.add(sparse(row))
    if ech.rank != n:
        raise ZeroDivisionError("singular matrix")
    # rows of RREF are unit vectors e_p = sum combo[p][k] * m[k]
    return [dense(ech.combos[p], n, field.zero) for p in range(n)]


def determinant(m: list[list], field: Field | None = None):
    field = field or infer_field(m)
    n = len(m)
    a = [list(map(field, row)) for row in m]
    det = field.one
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return field.zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det = det * a[c][c]
        inv = field.one / a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] * inv
            if f:
                for k in range(c, n):
                    a[r][k] = a[r][k] - f * a[c][k]
    return det


# ---------------------------------------------------------------- integers


def int_det(m: list[list[int]]) -> int:
    return int(determinant([[Fraction(x) for x in row] for row in m], QQ))


def int_matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(len(b))) for j in range(cols)] for row in a]


def smith_normal_form(m: list[list[int]]):
    """Smith normal form of an integer matrix.

    Returns ``(diag, U, V)`` with ``U * m * V`` diagonal, ``U`` and ``V``
    unimodular, and ``diag[0] | diag[1] | ...`` nonnegative.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [list(map(int, row)) for row in m]
    U = [[int(i == j) for j in range(rows)] for i in range(rows)]
    V = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + f * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, f):  # col_dst += f * col_src
        for row in a:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility of the remaining block by the pivot
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    diag = [a[i][i] for i in range(min(rows, cols))]
    return diag, U, V


def random_unimodular(n: int, rng: random.Random, steps: int = 12, bound: int = 3) -> list[list[int]]:
    """Product of random elementary integer matrices (determinant +-1)."""
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 1:
        return [[rng.choice((1, -1))]]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        f = rng.randint(-bound, bound)
        P[i] = [x + f * y for x, y in zip(P[i], P[j])]
        if rng.random() < 0.2:
            P[i] = [-x for x in P[i]]
    return P
