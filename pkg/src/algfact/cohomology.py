"""Matrices of the total differential and the linear algebra built on them.

Coordinates on ``C^k`` are delta-cochains: one input tuple, one output
monomial (or pair).  For finite-dimensional factors every coordinate is
used and results are exact cohomology.  For infinite-dimensional factors
input tuples are capped by total degree and outputs are restricted to a
window of *shifts* ``output degree - input degree``; numbers computed that
way are reported as sub-complex dimensions only.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass, field

from .algebra import tuple_degree
from .complex import BiDegree, Cochain, CochainComplex, TotalCochain
from .lincomb import sort_key
from .linalg import ExactMatrix, LinForm, rank, rank_and_kernel, rank_blocks, solve, solve_blocks
from .twist import TwistMap

CochainBasisIndex = namedtuple("CochainBasisIndex", "bidegree args output")


class CapsRequired(ValueError):
    """An infinite-dimensional algebra was used without a degree cap."""


def _complex(fac) -> CochainComplex:
    if isinstance(fac, CochainComplex):
        return fac
    if isinstance(fac, TwistMap):
        return CochainComplex(fac)
    raise TypeError(f"expected a TwistMap or CochainComplex, got {type(fac).__name__}")


def is_finite(cx: CochainComplex) -> bool:
    return cx.A.is_finite and cx.B.is_finite


def bidegrees(k: int):
    return [BiDegree(m, k - m) for m in range(k, -1, -1) if (m, k - m) != (0, 0)]


class CochainSpace:
    """The enumerated coordinates of (a slice of) ``C^k``."""

    def __init__(self, fac, k: int, degree_cap: int | None = None, shifts=None):
        cx = _complex(fac)
        self.cx = cx
        self.k = k
        self.exact = is_finite(cx)
        if not self.exact and degree_cap is None:
            raise CapsRequired(
                f"{cx.A.name} (x) {cx.B.name} is infinite-dimensional; supply a degree cap"
            )
        self.degree_cap = None if self.exact else degree_cap
        self.shifts = None if self.exact else (sorted(set(shifts)) if shifts is not None else [0])
        self.labels: list[CochainBasisIndex] = []
        self.index: dict = {}
        self._by_input: dict = {}
        self._out_cache: dict = {}
        for bd in bidegrees(k):
            for args in cx.tuples(bd.m, bd.n, self.degree_cap):
                cols = {}
                for out in self.outputs(bd, args):
                    i = len(self.labels)
                    lab = CochainBasisIndex(bd, args, out)
                    self.labels.append(lab)
                    self.index[lab] = i
                    cols[out] = i
                self._by_input[bd, args] = cols

    def __len__(self):
        return len(self.labels)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def _target_monos(self, target: str, degree: int | None):
        key = (target, degree)
        v = self._out_cache.get(key)
        if v is not None:
            return v
        A, B = self.cx.A, self.cx.B
        if degree is None:
            if target == "A":
                v = [a for a in A.monomials()]
            elif target == "B":
                v = [b for b in B.monomials()]
            else:
                v = [(b, a) for b in B.monomials() for a in A.monomials()]
        elif degree < 0:
            v = []
        elif target == "A":
            v = [a for a in A.monomials(degree) if A.degree(a) == degree]
        elif target == "B":
            v = [b for b in B.monomials(degree) if B.degree(b) == degree]
        else:
            v = [
                (b, a)
                for b in B.monomials(degree)
                for a in A.monomials(degree - B.degree(b))
                if B.degree(b) + A.degree(a) == degree
            ]
            v.sort(key=sort_key)
        self._out_cache[key] = v
        return v

    def outputs(self, bd: BiDegree, args: tuple):
        target = "A" if bd.n == 0 else "B" if bd.m == 0 else "X"
        if self.exact:
            return self._target_monos(target, None)
        d = tuple_degree(self.cx.signature(*bd), args)
        out = []
        for s in self.shifts:
            out.extend(self._target_monos(target, d + s))
        return out

    def output_degree(self, bd: BiDegree, out) -> int:
        A, B = self.cx.A, self.cx.B
        if bd.n == 0:
            return A.degree(out)
        if bd.m == 0:
            return B.degree(out)
        return B.degree(out[0]) + A.degree(out[1])

    def shift_of(self, label: CochainBasisIndex) -> int:
        bd = label.bidegree
        return self.output_degree(bd, label.output) - tuple_degree(self.cx.signature(*bd), label.args)

    def generic(self, escapes: list | None = None) -> TotalCochain:
        """The cochain whose value at each coordinate is the unknown for it."""
        comps = {}
        for bd in bidegrees(self.k):
            comps[bd] = Cochain(bd.m, bd.n, self._generic_rule(bd, escapes), f"x{tuple(bd)}")
        return TotalCochain(self.k, comps)

    def _generic_rule(self, bd, escapes):
        table = {}
        for (b, args), cols in self._by_input.items():
            if b == bd:
                table[args] = {out: LinForm.var(i) for out, i in cols.items()}

        def rule(args):
            v = table.get(args)
            if v is None:
                if escapes is not None:
                    escapes.append((tuple(bd), args))
                return {}
            return v

        return rule

    def vector(self, c: TotalCochain) -> dict:
        """Coordinates of ``c`` (values outside the enumerated slice are dropped)."""
        vec = {}
        for (bd, args), cols in self._by_input.items():
            f = c.components.get(bd)
            if f is None:
                continue
            for out, coeff in f.value(args).items():
                i = cols.get(out)
                if i is not None:
                    vec[i] = coeff
        return vec

    def cochain(self, vec) -> TotalCochain:
        """Inverse of :meth:`vector` on the enumerated slice."""
        tables: dict = {}
        for i, c in (vec.items() if hasattr(vec, "items") else enumerate(vec)):
            if not c:
                continue
            lab = self.labels[i]
            tables.setdefault(lab.bidegree, {}).setdefault(lab.args, {})[lab.output] = c
        comps = {bd: Cochain.from_table(bd.m, bd.n, tab) for bd, tab in tables.items()}
        return TotalCochain(self.k, comps)


@dataclass
class DMatrix:
    """Matrix of ``D: C^k -> C^(k+1)`` in delta coordinates."""

    k: int
    matrix: ExactMatrix
    columns: CochainSpace
    row_labels: list
    escapes: list = field(default_factory=list)
    mixed_rows: int = 0

    @property
    def exact(self) -> bool:
        return self.columns.exact and not self.escapes

    def to_json(self) -> dict:
        def lab(x):
            return {"bidegree": list(x.bidegree), "args": [list(a) for a in x.args], "output": _jsonable(x.output)}

        return {
            "k": self.k,
            "matrix": self.matrix.to_triplets(),
            "columns": [lab(x) for x in self.columns.labels],
            "rows": [lab(x) for x in self.row_labels],
        }


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _rows_of(cx: CochainComplex, image: TotalCochain, degree_cap, exact: bool):
    """Evaluate a TotalCochain (with LinForm values) on all tuples of its degree."""
    for bd in bidegrees(image.degree):
        f = image.components.get(bd)
        if f is None:
            continue
        for args in cx.tuples(bd.m, bd.n, None if exact else degree_cap):
            val = f.value(args)
            for out in sorted(val, key=sort_key):
                yield CochainBasisIndex(bd, args, out), val[out]


def assemble_D(fac, k: int, degree_cap: int | None = None, shifts=None) -> DMatrix:
    """Matrix of ``D`` on the (capped) coordinates of ``C^k``.

    With finite-dimensional factors the caps are ignored and rows cover all
    of ``C^(k+1)``; otherwise rows are all basis tuples of degree at most
    ``degree_cap`` with whatever outputs ``D`` produces, and queries of the
    unknown cochain outside the cap are recorded as escapes.
    """
    cx = _complex(fac)
    space = CochainSpace(cx, k, degree_cap, shifts)
    escapes: list = []
    image = cx.D(space.generic(escapes))
    rows, labels = [], []
    mixed = 0
    for lab, form in _rows_of(cx, image, degree_cap, space.exact):
        if not isinstance(form, LinForm):
            continue
        rows.append(form.terms)
        labels.append(lab)
        if not space.exact and _is_mixed(space, lab, form):
            mixed += 1
    if space.exact:
        # rows for every coordinate of C^(k+1), zero or not
        target = CochainSpace(cx, k + 1)
        by_label = dict(zip(labels, rows))
        labels = list(target.labels)
        rows = [by_label.get(lab, {}) for lab in labels]
    M = ExactMatrix.from_rows(rows, len(space))
    return DMatrix(k, M, space, labels, sorted(set(escapes)), mixed)


def _is_mixed(space: CochainSpace, row_label, form: LinForm) -> bool:
    bd = row_label.bidegree
    row_shift = space.output_degree(bd, row_label.output) - tuple_degree(space.cx.signature(*bd), row_label.args)
    return any(space.shift_of(space.labels[i]) != row_shift for i in form.terms)


@dataclass
class CohomologyResult:
    k: int
    dim: int
    kernel_dim: int
    rank_in: int
    rank_out: int
    cochain_dims: tuple
    exact: bool
    label: str
    shapes: dict

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "label": self.label,
            "dimension": self.dim,
            "kernel_dim": self.kernel_dim,
            "rank_D_k": self.rank_out,
            "rank_D_k_minus_1": self.rank_in,
            "cochain_dims": list(self.cochain_dims),
            "matrix_shapes": {k: list(v) for k, v in self.shapes.items()},
            "exact": self.exact,
        }


def cohomology_dim(fac, k: int, degree_cap: int | None = None, shifts=None) -> CohomologyResult:
    """``dim ker D_k - rank D_(k-1)``.

    Exact for finite-dimensional factors.  With a cap this is the same
    difference computed on the enumerated slice, labelled accordingly.
    """
    if k < 1:
        raise ValueError("the total complex starts in degree 1")
    out = assemble_D(fac, k, degree_cap, shifts)
    r_out = rank_blocks(out.matrix.rows)
    shapes = {f"D_{k}": out.matrix.shape}
    if k == 1:
        r_in = 0
        dim_in = 0
    else:
        inc = assemble_D(fac, k - 1, degree_cap, shifts)
        r_in = rank_blocks(inc.matrix.rows)
        shapes[f"D_{k - 1}"] = inc.matrix.shape
        dim_in = inc.matrix.ncols
    n = out.matrix.ncols
    exact = out.exact
    return CohomologyResult(
        k=k,
        dim=n - r_out - r_in,
        kernel_dim=n - r_out,
        rank_in=r_in,
        rank_out=r_out,
        cochain_dims=(dim_in, n, out.matrix.nrows) if k > 1 else (n, out.matrix.nrows),
        exact=exact,
        label="cohomology" if exact else "sub-complex dimensions",
        shapes=shapes,
    )


# ---------------------------------------------------------------- solving

@dataclass
class SolveResult:
    """Outcome of solving ``D x = target`` on an enumerated slice.

    ``status`` is ``"solved"``, ``"inconsistent"`` (provably no solution on
    the enumerated rows) or ``"inconclusive"`` (no solution on the slice, but
    the slice is not closed under ``D``).
    """

    status: str
    solution: TotalCochain | None
    space: CochainSpace
    witness: CochainBasisIndex | None = None
    witness_value: object = None
    escapes: list = field(default_factory=list)
    mixed_rows: int = 0
    rows: int = 0

    @property
    def solved(self) -> bool:
        return self.status == "solved"


def target_shifts(cx: CochainComplex, target: TotalCochain, degree_cap: int) -> list:
    shifts = set()
    for bd, f in target.components.items():
        sig = cx.signature(*bd)
        for args in cx.tuples(bd.m, bd.n, degree_cap):
            d = tuple_degree(sig, args)
            for out in f.value(args):
                if bd.n == 0:
                    e = cx.A.degree(out)
                elif bd.m == 0:
                    e = cx.B.degree(out)
                else:
                    e = cx.B.degree(out[0]) + cx.A.degree(out[1])
                shifts.add(e - d)
    return sorted(shifts) or [0]


def solve_coboundary(fac, target: TotalCochain, degree_cap: int | None = None, shifts=None) -> SolveResult:
    """Find ``x`` in ``C^(k-1)`` with ``D x = target`` (``k = target.degree``).

    For infinite-dimensional factors the unknown coordinates use the shifts
    present in ``target`` unless ``shifts`` is given.  When ``D`` preserves
    the grading every row only involves unknowns of its own shift, so an
    inconsistency found on the slice is a genuine obstruction; rows that mix
    shifts, or queries outside the cap, downgrade it to inconclusive.
    """
    cx = _complex(fac)
    k = target.degree - 1
    exact = is_finite(cx)
    if not exact and degree_cap is None:
        raise CapsRequired("solving over an infinite-dimensional factorisation needs a degree cap")
    if not exact and shifts is None:
        shifts = target_shifts(cx, target, degree_cap)
    space = CochainSpace(cx, k, degree_cap, shifts)
    escapes: list = []
    image = cx.D(space.generic(escapes))

    rows, rhs, labels = [], [], []
    mixed = 0
    seen = set()
    for lab, form in _rows_of(cx, image, degree_cap, exact):
        if not isinstance(form, LinForm):
            continue
        seen.add(lab)
        f = target.components.get(lab.bidegree)
        b = f.value(lab.args).get(lab.output, 0) if f is not None else 0
        rows.append(form.terms)
        rhs.append(b)
        labels.append(lab)
        if not exact and _is_mixed(space, lab, form):
            mixed += 1
    # target values that no unknown can reach
    for bd, f in target.components.items():
        for args in cx.tuples(bd.m, bd.n, None if exact else degree_cap):
            for out, b in f.value(args).items():
                lab = CochainBasisIndex(bd, args, out)
                if lab not in seen:
                    rows.append({})
                    rhs.append(b)
                    labels.append(lab)
    escapes = sorted(set(escapes))
    sol, bad = solve_blocks(rows, len(space), rhs)
    if sol is not None:
        return SolveResult("solved", space.cochain(sol), space, escapes=escapes, mixed_rows=mixed, rows=len(rows))
    status = "inconsistent" if (exact or (not escapes and not mixed)) else "inconclusive"
    return SolveResult(
        status, None, space, labels[bad], rhs[bad], escapes=escapes, mixed_rows=mixed, rows=len(rows)
    )


def kernel_dimension(fac, k: int, degree_cap: int | None = None, shifts=None) -> int:
    """Dimension of the cocycles on the enumerated slice of ``C^k``."""
    M = assemble_D(fac, k, degree_cap, shifts).matrix
    return M.ncols - rank_blocks(M.rows)


# ---------------------------------------------------------------- representatives

@dataclass
class NormalizedClass:
    multiple: object
    representative: TotalCochain
    gauge: TotalCochain


def generator_cocycle(psi: TwistMap) -> TotalCochain:
    """``Psi^(1)(g_A (x) g_B) = 1 (x) 1`` on the single generator pair, zero
    elsewhere; defined when both factors have exactly one generator."""
    A, B = psi.A, psi.B
    if len(A.generators) != 1 or len(B.generators) != 1:
        raise ValueError("generator_cocycle needs one generator on each side")
    a = A.generator_monos[A.generators[0]]
    b = B.generator_monos[B.generators[0]]
    g = Cochain.from_table(1, 1, {(a, b): {(B.unit, A.unit): 1}}, "generator")
    return TotalCochain(2, {(1, 1): g})


def normalize_representative(fac, z: TotalCochain, generator: TotalCochain | None = None) -> NormalizedClass:
    """Write a 2-cocycle as ``lambda * generator + D w`` and return ``lambda``.

    Finite-dimensional factors only.  Raises ``ValueError`` if ``z`` is not a
    cocycle or is not in the span of the generator modulo coboundaries.
    """
    cx = _complex(fac)
    if not is_finite(cx):
        raise CapsRequired("normalize_representative works on finite-dimensional factorisations")
    if z.degree != 2:
        raise ValueError("expected a degree-2 cochain")
    rep = cx.vanishes(cx.D(z), None, "cocycle")
    if not rep.ok:
        raise ValueError(f"input is not a cocycle: {rep.witness}")
    if generator is None:
        generator = generator_cocycle(cx.psi)
    c2 = CochainSpace(cx, 2)
    D1 = assemble_D(cx, 1)
    if D1.row_labels != c2.labels:
        raise AssertionError("row enumeration of D_1 differs from the C^2 enumeration")
    gvec = c2.vector(generator)
    zvec = c2.vector(z)
    # unknowns: w (columns of D_1) then lambda in the last column
    lam = D1.matrix.ncols
    rows = [dict(r) for r in D1.matrix.rows]
    for i, c in gvec.items():
        rows[i][lam] = c
    M = ExactMatrix.from_rows(rows, lam + 1)
    sol = solve(M, zvec)
    if sol is None:
        raise ValueError("cocycle is not a multiple of the generator modulo coboundaries")
    multiple = sol.get(lam, 0)
    w = D1.columns.cochain({i: c for i, c in sol.items() if i != lam})
    return NormalizedClass(multiple, generator * multiple, w)


__all__ = [
    "CapsRequired",
    "CochainBasisIndex",
    "CochainSpace",
    "CohomologyResult",
    "DMatrix",
    "NormalizedClass",
    "SolveResult",
    "assemble_D",
    "bidegrees",
    "cohomology_dim",
    "generator_cocycle",
    "kernel_dimension",
    "normalize_representative",
    "rank",
    "rank_and_kernel",
    "solve_coboundary",
]
