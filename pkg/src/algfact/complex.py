"""The double complex ``C^{m,n}(X(B,A)) = Hom(A^m (x) B^n, X)`` with its two
coboundaries and the total differential.

Argument order is fixed: ``f(a_m, ..., a_1, b^1, ..., b^n)``.  Cochains with
``n == 0`` are valued in ``A`` and those with ``m == 0`` in ``B`` (the two
Hochschild edges); everything else is valued in ``X = B (x) A`` with keys
``(b_mono, a_mono)``.  Edge cochains are included into X-valued cochains via
``f -> 1_B (x) f`` and ``g -> g (x) 1_A`` only where a formula needs it.
"""

from __future__ import annotations

import itertools
from collections import namedtuple
from collections.abc import Callable, Iterable, Mapping

from .algebra import basis_tuples
from .lincomb import add_scaled, add_term
from .reports import Report, Witness
from .twist import TwistMap

BiDegree = namedtuple("BiDegree", "m n")


class Cochain:
    """A multilinear map given by its values on basis tuples.

    ``rule(args)`` returns a mapping from output keys to coefficients; values
    are memoised, so rules must be pure.
    """

    def __init__(self, m: int, n: int, rule: Callable[[tuple], Mapping], name: str = ""):
        if m < 0 or n < 0 or (m, n) == (0, 0):
            raise ValueError(f"bidegree ({m},{n}) is not part of the complex")
        self.m = m
        self.n = n
        self._rule = rule
        self.name = name
        self._memo: dict = {}

    def __repr__(self):
        return f"Cochain{tuple(self.bidegree)}({self.name})"

    @property
    def bidegree(self) -> BiDegree:
        return BiDegree(self.m, self.n)

    @property
    def target(self) -> str:
        if self.n == 0:
            return "A"
        if self.m == 0:
            return "B"
        return "X"

    @property
    def arity(self) -> int:
        return self.m + self.n

    def __call__(self, *args) -> dict:
        return self.value(args)

    def value(self, args: tuple) -> dict:
        v = self._memo.get(args)
        if v is None:
            if len(args) != self.m + self.n:
                raise ValueError(f"{self!r} takes {self.m + self.n} arguments, got {len(args)}")
            v = {}
            for k, c in self._rule(args).items():
                add_term(v, k, c)
            self._memo[args] = v
        return v

    def evaluate(self, elements) -> dict:
        """Multilinear extension to arguments given as mappings mono -> coeff."""
        out = {}
        for combo in itertools.product(*[list(e.items()) for e in elements]):
            c = 1
            for _, ci in combo:
                c = c * ci
            add_scaled(out, self.value(tuple(m for m, _ in combo)), c)
        return out

    # construction -----------------------------------------------------

    @classmethod
    def zero(cls, m: int, n: int) -> "Cochain":
        return cls(m, n, lambda args: {}, "0")

    @classmethod
    def from_table(cls, m: int, n: int, table: Mapping, name: str = "") -> "Cochain":
        """Finitely supported cochain; tuples absent from ``table`` map to 0."""
        tab = {tuple(k): dict(v) for k, v in table.items()}
        return cls(m, n, lambda args: tab.get(args, {}), name)

    @classmethod
    def delta(cls, m: int, n: int, args: tuple, out_key, coeff=1) -> "Cochain":
        return cls.from_table(m, n, {args: {out_key: coeff}}, f"delta{args}->{out_key}")

    @classmethod
    def combination(cls, terms: Iterable) -> "Cochain":
        """Pointwise ``sum s_i f_i`` over ``(s_i, f_i)`` pairs."""
        terms = [(s, f) for s, f in terms]
        if not terms:
            raise ValueError("empty combination")
        m, n = terms[0][1].m, terms[0][1].n
        for _, f in terms:
            if (f.m, f.n) != (m, n):
                raise ValueError(f"bidegree mismatch: ({m},{n}) vs ({f.m},{f.n})")

        def rule(args):
            out = {}
            for s, f in terms:
                add_scaled(out, f.value(args), s)
            return out

        return cls(m, n, rule, "+".join(f.name or "f" for _, f in terms))

    def __add__(self, other: "Cochain") -> "Cochain":
        return Cochain.combination([(1, self), (1, other)])

    def __sub__(self, other: "Cochain") -> "Cochain":
        return Cochain.combination([(1, self), (-1, other)])

    def __neg__(self) -> "Cochain":
        return Cochain.combination([(-1, self)])

    def __mul__(self, s) -> "Cochain":
        if isinstance(s, Cochain):
            return NotImplemented
        return Cochain.combination([(s, self)])

    __rmul__ = __mul__

    def table(self, tuples: Iterable) -> dict:
        """Nonzero values on the given tuples."""
        out = {}
        for t in tuples:
            v = self.value(tuple(t))
            if v:
                out[tuple(t)] = dict(v)
        return out


class TotalCochain:
    """Element of ``C^k`` as a sum of bidegree components (``m + n = k``)."""

    def __init__(self, degree: int, components: Mapping | None = None):
        if degree < 1:
            raise ValueError("the total complex starts in degree 1")
        self.degree = degree
        self.components: dict = {}
        for bd, f in (components or {}).items():
            bd = BiDegree(*bd)
            if bd.m + bd.n != degree:
                raise ValueError(f"component {tuple(bd)} does not have total degree {degree}")
            if (f.m, f.n) != tuple(bd):
                raise ValueError(f"component stored under {tuple(bd)} has bidegree {(f.m, f.n)}")
            self.components[bd] = f

    def bidegrees(self):
        return [BiDegree(m, self.degree - m) for m in range(self.degree, -1, -1)]

    def __getitem__(self, bd) -> Cochain:
        bd = BiDegree(*bd)
        f = self.components.get(bd)
        return f if f is not None else Cochain.zero(*bd)

    def _combine(self, other: "TotalCochain", s) -> "TotalCochain":
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        comps = {}
        for bd in self.bidegrees():
            parts = []
            if bd in self.components:
                parts.append((1, self.components[bd]))
            if bd in other.components:
                parts.append((s, other.components[bd]))
            if parts:
                comps[bd] = Cochain.combination(parts)
        return TotalCochain(self.degree, comps)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, s):
        return TotalCochain(self.degree, {bd: f * s for bd, f in self.components.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1


class CochainComplex:
    """Coboundaries of ``C(X(B, A))`` for the factorisation given by ``psi``."""

    def __init__(self, psi: TwistMap):
        self.psi = psi
        self.A = psi.A
        self.B = psi.B

    def signature(self, m: int, n: int):
        return [self.A] * m + [self.B] * n

    def tuples(self, m: int, n: int, degree_bound: int | None):
        return basis_tuples(self.signature(m, n), degree_bound)

    def xval(self, f: Cochain, args: tuple) -> dict:
        """Value of ``f`` viewed inside ``Hom(A^m (x) B^n, X)``."""
        v = f.value(args)
        if f.n == 0:
            ub = self.B.unit
            return {(ub, a): c for a, c in v.items()}
        if f.m == 0:
            ua = self.A.unit
            return {(b, ua): c for b, c in v.items()}
        return v

    def d_A(self, f: Cochain) -> Cochain:
        m, n = f.m, f.n
        A, psi = self.A, self.psi

        if n == 0:
            def rule(args):
                # Hochschild coboundary of A with coefficients in A
                out = {}
                for am, c in f.value(args[1:]).items():
                    for r, c2 in A.basis_product(args[0], am).items():
                        add_term(out, r, c * c2)
                for i in range(m):
                    s = -1 if i % 2 == 0 else 1
                    for mm, cm in A.basis_product(args[i], args[i + 1]).items():
                        add_scaled(out, f.value(args[:i] + (mm,) + args[i + 2:]), s * cm)
                s = 1 if m % 2 else -1
                for am, c in f.value(args[:m]).items():
                    for r, c2 in A.basis_product(am, args[m]).items():
                        add_term(out, r, s * c * c2)
                return out

            return Cochain(m + 1, 0, rule, f"dA({f.name})")

        def rule(args):
            As, Bs = args[: m + 1], args[m + 1:]
            out = psi.lmul_a(As[0], self.xval(f, As[1:] + Bs))
            for i in range(m):
                s = -1 if i % 2 == 0 else 1
                for mm, cm in A.basis_product(As[i], As[i + 1]).items():
                    add_scaled(out, self.xval(f, As[:i] + (mm,) + As[i + 2:] + Bs), s * cm)
            s = 1 if m % 2 else -1
            for key, c in psi.chain_right(As[m], Bs).items():
                x = self.xval(f, As[:m] + key[:-1])
                add_scaled(out, psi.rmul_a(x, key[-1]), s * c)
            return out

        return Cochain(m + 1, n, rule, f"dA({f.name})")

    def d_B(self, f: Cochain) -> Cochain:
        m, n = f.m, f.n
        B, psi = self.B, self.psi

        if m == 0:
            def rule(args):
                # Hochschild coboundary of B with coefficients in B
                out = {}
                for bm, c in f.value(args[1:]).items():
                    for r, c2 in B.basis_product(args[0], bm).items():
                        add_term(out, r, c * c2)
                for i in range(1, n + 1):
                    s = -1 if i % 2 else 1
                    for mm, cm in B.basis_product(args[i - 1], args[i]).items():
                        add_scaled(out, f.value(args[: i - 1] + (mm,) + args[i + 1:]), s * cm)
                s = 1 if n % 2 else -1
                for bm, c in f.value(args[:n]).items():
                    for r, c2 in B.basis_product(bm, args[n]).items():
                        add_term(out, r, s * c * c2)
                return out

            return Cochain(0, n + 1, rule, f"dB({f.name})")

        def rule(args):
            As, Bs = args[:m], args[m:]
            out = {}
            for key, c in psi.chain_left(As, Bs[0]).items():
                x = self.xval(f, key[1:] + Bs[1:])
                add_scaled(out, psi.lmul_b(key[0], x), c)
            for i in range(1, n + 1):
                s = -1 if i % 2 else 1
                for mm, cm in B.basis_product(Bs[i - 1], Bs[i]).items():
                    add_scaled(out, self.xval(f, As + Bs[: i - 1] + (mm,) + Bs[i + 1:]), s * cm)
            s = 1 if n % 2 else -1
            add_scaled(out, psi.rmul_b(self.xval(f, As + Bs[:n]), Bs[n]), s)
            return out

        return Cochain(m, n + 1, rule, f"dB({f.name})")

    def D(self, c: TotalCochain) -> TotalCochain:
        """``D|C^{m,n} = (-1)^m d_B + d_A``."""
        parts: dict = {}
        for bd, f in c.components.items():
            parts.setdefault(BiDegree(bd.m + 1, bd.n), []).append((1, self.d_A(f)))
            parts.setdefault(BiDegree(bd.m, bd.n + 1), []).append(
                (-1 if bd.m % 2 else 1, self.d_B(f))
            )
        return TotalCochain(
            c.degree + 1, {bd: Cochain.combination(terms) for bd, terms in parts.items()}
        )

    # checks ------------------------------------------------------------

    def first_nonzero(self, f: Cochain, degree_bound: int | None):
        for args in self.tuples(f.m, f.n, degree_bound):
            v = f.value(args)
            if v:
                return args, v
        return None

    def vanishes(self, c: TotalCochain | Cochain, degree_bound: int | None, name="vanishes") -> Report:
        comps = c.components.items() if isinstance(c, TotalCochain) else [(c.bidegree, c)]
        checked = 0
        for bd, f in comps:
            for args in self.tuples(f.m, f.n, degree_bound):
                checked += 1
                v = f.value(args)
                if v:
                    return Report(
                        name, False, Witness(f"component {tuple(bd)}", args, v, {}),
                        {"degree_bound": degree_bound, "checked": checked},
                    )
        return Report(name, True, None, {"degree_bound": degree_bound, "checked": checked})


def total(degree: int, **components) -> TotalCochain:
    """``total(2, mu_A=f, psi=g, mu_B=h)`` style helper for degree 2 triples is
    in :mod:`algfact.deformation`; here components are keyed ``c_m_n``."""
    comps = {}
    for key, f in components.items():
        _, m, n = key.split("_")
        comps[(int(m), int(n))] = f
    return TotalCochain(degree, comps)
