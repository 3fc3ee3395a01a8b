"""Exact sparse linear algebra.

Rows are dicts ``column -> scalar``.  Systems whose entries are all integers
or :class:`~fractions.Fraction` are cleared to integer rows and eliminated
fraction-free (each combination step ``r <- p[c] r - r[c] p`` followed by
division by the row content); any other scalar kind (``QRational``) is
eliminated over its field.  Pivots are chosen by lowest column index, so the
reduced form depends only on the input.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction

from .lincomb import add_term


class LinForm:
    """Formal linear combination of named unknowns.

    Used as a coefficient when a cochain with unknown values is pushed
    through a coboundary: the result's coefficients are exactly the rows of
    the matrix of that coboundary.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = dict(terms) if terms else {}

    @classmethod
    def var(cls, name) -> "LinForm":
        return cls({name: 1})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, LinForm):
            if other == 0:
                return self
            return NotImplemented
        if len(other.terms) > len(self.terms):
            self, other = other, self
        d = dict(self.terms)
        for k, c in other.terms.items():
            add_term(d, k, c)
        return LinForm(d)

    __radd__ = __add__

    def __neg__(self):
        return LinForm({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        if isinstance(s, LinForm):
            raise TypeError("product of two linear forms is not linear")
        if not s:
            return LinForm()
        if s == 1:
            return self
        return LinForm({k: c * s for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LinForm):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"LinForm({self.terms!r})"


class ExactMatrix:
    """Sparse matrix with exact entries and no stored zeros."""

    def __init__(self, nrows: int, ncols: int, entries: Mapping | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows: list[dict] = [dict() for _ in range(nrows)]
        for (i, j), c in (entries or {}).items():
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise IndexError(f"entry ({i},{j}) outside a {nrows}x{ncols} matrix")
            add_term(self.rows[i], j, c)

    @classmethod
    def from_rows(cls, rows: Iterable[Mapping], ncols: int) -> "ExactMatrix":
        m = cls(0, ncols)
        for r in rows:
            row = {}
            for j, c in r.items():
                if not 0 <= j < ncols:
                    raise IndexError(f"column {j} outside {ncols} columns")
                add_term(row, j, c)
            m.rows.append(row)
        m.nrows = len(m.rows)
        return m

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entries(self) -> dict:
        return {(i, j): c for i, r in enumerate(self.rows) for j, c in r.items()}

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i].get(j, 0)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def apply(self, vec: Mapping) -> dict:
        """``M v`` for a sparse vector ``column -> scalar``; result ``row -> scalar``."""
        out = {}
        for i, r in enumerate(self.rows):
            s = 0
            for j, c in r.items():
                v = vec.get(j)
                if v:
                    s = s + c * v
            if s:
                out[i] = s
        return out

    def to_dense(self) -> list:
        return [[r.get(j, 0) for j in range(self.ncols)] for r in self.rows]

    def to_triplets(self) -> dict:
        """JSON-ready sparse form with exact scalars as strings."""
        return {
            "rows": self.nrows,
            "cols": self.ncols,
            "entries": [[i, j, str(c)] for i, r in enumerate(self.rows) for j, c in sorted(r.items())],
        }

    @classmethod
    def from_triplets(cls, doc: Mapping, parse=Fraction) -> "ExactMatrix":
        return cls(doc["rows"], doc["cols"], {(i, j): parse(c) for i, j, c in doc["entries"]})

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    __hash__ = None

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


# ---------------------------------------------------------------- elimination

def _is_rational(c) -> bool:
    return isinstance(c, (int, Fraction))


def _integer_row(row: Mapping) -> dict:
    den = 1
    for c in row.values():
        if isinstance(c, Fraction):
            d = c.denominator
            den = den * d // math.gcd(den, d)
    out = {j: int(c * den) for j, c in row.items() if c}
    return _primitive(out)


def _primitive(row: dict) -> dict:
    if not row:
        return row
    g = 0
    for c in row.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {j: c // g for j, c in row.items()}
    return row


def _combine_int(r: dict, p: dict, col: int) -> dict:
    """Eliminate ``col`` from ``r`` using pivot row ``p``."""
    a = p[col]
    b = r[col]
    g = math.gcd(a, b)
    a //= g
    b //= g
    out = {j: c * a for j, c in r.items()} if a != 1 else dict(r)
    for j, c in p.items():
        v = out.get(j, 0) - b * c
        if v:
            out[j] = v
        else:
            out.pop(j, None)
    return _primitive(out)


def _combine_field(r: dict, p: dict, col: int) -> dict:
    # pivot rows are normalised to leading coefficient 1
    f = r[col]
    out = dict(r)
    for j, c in p.items():
        add_term(out, j, -(f * c))
    return out


def _normalize_field(row: dict) -> dict:
    lead = row[min(row)]
    if lead == 1:
        return row
    inv = Fraction(1, lead) if isinstance(lead, int) else 1 / lead
    return {j: c * inv for j, c in row.items()}


class Echelon:
    """Incremental row-echelon form.  ``add_row`` returns ``True`` when the row
    was independent of those already added."""

    def __init__(self, integer: bool):
        self.integer = integer
        self.pivots: dict[int, dict] = {}

    def reduce(self, row: Mapping) -> dict:
        r = _integer_row(row) if self.integer else {j: c for j, c in row.items() if c}
        combine = _combine_int if self.integer else _combine_field
        pivots = self.pivots
        while r:
            hit = None
            # lowest pivot column present in r
            for j in sorted(r):
                if j in pivots:
                    hit = j
                    break
            if hit is None:
                break
            r = combine(r, pivots[hit], hit)
        return r

    def add_row(self, row: Mapping) -> bool:
        r = self.reduce(row)
        if not r:
            return False
        # fully reduce so the new leading column is the row minimum
        combine = _combine_int if self.integer else _combine_field
        while True:
            c = min(r)
            if c not in self.pivots:
                break
            r = combine(r, self.pivots[c], c)
            if not r:
                return False
        if not self.integer:
            r = _normalize_field(r)
        self.pivots[min(r)] = r
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduced(self) -> dict:
        """Back-substitute to reduced row-echelon form; returns ``pivot -> row``."""
        combine = _combine_int if self.integer else _combine_field
        cols = sorted(self.pivots)
        rows = {c: self.pivots[c] for c in cols}
        for c in reversed(cols):
            p = rows[c]
            for c2 in cols:
                if c2 >= c:
                    break
                r = rows[c2]
                if c in r:
                    rows[c2] = combine(r, p, c)
        return rows


def _div(x, y):
    return Fraction(x, y) if isinstance(x, int) and isinstance(y, int) else x / y


def _kind_is_integer(rows: Iterable[Mapping]) -> bool:
    return all(_is_rational(c) for r in rows for c in r.values())


def echelon(rows: Sequence[Mapping]) -> Echelon:
    e = Echelon(_kind_is_integer(rows))
    for r in rows:
        e.add_row(r)
    return e


def rank(M: ExactMatrix) -> int:
    return echelon(M.rows).rank


def rank_and_kernel(M: ExactMatrix):
    """Rank and a kernel basis (sparse vectors ``column -> scalar``).

    Kernel vectors are indexed by free columns in increasing order; the free
    column's entry is 1.
    """
    e = echelon(M.rows)
    red = e.reduced()
    pivot_cols = set(red)
    kernel = []
    for f in range(M.ncols):
        if f in pivot_cols:
            continue
        v = {f: 1}
        for c, r in red.items():
            x = r.get(f)
            if x:
                v[c] = -Fraction(x, r[c]) if e.integer else -_div(x, r[c])
        kernel.append(v)
    return e.rank, kernel


def solve(M: ExactMatrix, rhs: Mapping):
    """One solution ``x`` of ``M x = rhs`` (free variables set to 0), or
    ``None`` when the system is inconsistent.  ``rhs`` maps row -> scalar."""
    sol, _ = solve_rows(M.rows, M.ncols, [rhs.get(i, 0) for i in range(M.nrows)])
    return sol


def solve_rows(rows: Sequence[Mapping], ncols: int, rhs: Sequence):
    """Solve with the right-hand side as an augmented column.

    Returns ``(solution, None)`` or ``(None, index_of_an_inconsistent_row)``.
    """
    aug = ncols
    full = []
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row[aug] = b
        full.append(row)
    e = Echelon(_kind_is_integer(full))
    for i, row in enumerate(full):
        e.add_row(row)
        if aug in e.pivots:
            return None, i
    red = e.reduced()
    sol = {}
    for c, r in red.items():
        b = r.get(aug)
        if b:
            sol[c] = Fraction(b, r[c]) if e.integer else _div(b, r[c])
    return sol, None


def components(rows: Sequence[Mapping]) -> list:
    """Group row indices whose column supports are linked (union-find).

    Independent blocks can be eliminated separately, which keeps the dense
    fill-in of each elimination small.
    """
    parent: dict = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != root:
            parent[x], x = root, parent[x]
        return root

    for r in rows:
        cols = iter(r)
        first = next(cols, None)
        if first is None:
            continue
        ra = find(first)
        for c in cols:
            rb = find(c)
            if rb != ra:
                parent[rb] = ra
    groups: dict = {}
    empty = []
    for i, r in enumerate(rows):
        if not r:
            empty.append(i)
            continue
        groups.setdefault(find(next(iter(r))), []).append(i)
    out = [g for _, g in sorted(groups.items(), key=lambda kv: kv[1][0])]
    if empty:
        out.append(empty)
    return out


def solve_blocks(rows: Sequence[Mapping], ncols: int, rhs: Sequence):
    """:func:`solve_rows` applied block by block; same return convention."""
    sol = {}
    for block in components(rows):
        sub_rows = [rows[i] for i in block]
        sub_rhs = [rhs[i] for i in block]
        if not any(sub_rows):
            for i in block:
                if rhs[i]:
                    return None, i
            continue
        if not any(sub_rhs):
            continue
        s, bad = solve_rows(sub_rows, ncols, sub_rhs)
        if s is None:
            return None, block[bad]
        sol.update(s)
    return sol, None


def rank_blocks(rows: Sequence[Mapping]) -> int:
    return sum(echelon([rows[i] for i in block]).rank for block in components(rows) if rows[block[0]])
