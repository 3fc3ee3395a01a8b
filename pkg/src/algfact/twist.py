"""Twisting maps ``Psi: A (x) B -> B (x) A`` and the factorisation algebra
``X(B, A)`` they define."""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from fractions import Fraction

from .algebra import BasedAlgebra, Mono, basis_tuples
from .lincomb import TensorElement, add_term
from .reports import Report, Witness


class AmbiguousExtension(ValueError):
    """Generator rules are inconsistent with the algebra relations: two ways
    of splitting the same basis pair give different values."""

    def __init__(self, report: Report):
        self.report = report
        w = report.witness
        super().__init__(f"extension is ambiguous: {w.axiom} fails at {w.args}")


class NonTerminating(RuntimeError):
    pass


class TwistMap:
    """A linear map ``A (x) B -> B (x) A`` given on basis pairs.

    Together with the products of ``A`` and ``B`` this is all the data of a
    factorisation, so the X-products and twist chains live here too.  Values
    are memoised per basis pair.
    """

    def __init__(
        self,
        A: BasedAlgebra,
        B: BasedAlgebra,
        rule: Callable[[Mono, Mono], Mapping],
        name: str = "psi",
        gen_rules: Mapping | None = None,
    ):
        self.A = A
        self.B = B
        self._rule = rule
        self.name = name
        self.gen_rules = dict(gen_rules) if gen_rules is not None else None
        self._memo: dict = {}
        self._left_chains: dict = {}
        self._right_chains: dict = {}

    def __repr__(self):
        return f"TwistMap({self.name!r}, A={self.A.name}, B={self.B.name})"

    def __call__(self, a: Mono, b: Mono) -> dict:
        key = (a, b)
        v = self._memo.get(key)
        if v is None:
            v = {}
            for k, c in self._rule(a, b).items():
                add_term(v, k, c)
            self._memo[key] = v
        return v

    def tensor(self, a: Mono, b: Mono) -> TensorElement:
        return TensorElement(self(a, b), ("B", "A"))

    def apply(self, xa: Mapping, yb: Mapping) -> dict:
        out = {}
        for a, ca in xa.items():
            for b, cb in yb.items():
                c = ca * cb
                for k, v in self(a, b).items():
                    add_term(out, k, c * v)
        return out

    @property
    def x_unit(self) -> dict:
        return {(self.B.unit, self.A.unit): 1}

    # products in X = B (x) A ------------------------------------------

    def xmul(self, x: Mapping, y: Mapping) -> dict:
        """``(b (x) a)(b' (x) a') = sum b b'_nu (x) a^nu a'``."""
        A, B = self.A, self.B
        out = {}
        for (b, a), cx in x.items():
            for (b2, a2), cy in y.items():
                c = cx * cy
                for (bn, an), cp in self(a, b2).items():
                    cc = c * cp
                    for bm, c1 in B.basis_product(b, bn).items():
                        for am, c2 in A.basis_product(an, a2).items():
                            add_term(out, (bm, am), cc * c1 * c2)
        return out

    def lmul_a(self, a: Mono, x: Mapping) -> dict:
        """``(1 (x) a) * x``."""
        A = self.A
        out = {}
        for (b, a2), cx in x.items():
            for (bn, an), cp in self(a, b).items():
                c = cx * cp
                for am, cm in A.basis_product(an, a2).items():
                    add_term(out, (bn, am), c * cm)
        return out

    def rmul_a(self, x: Mapping, a: Mono) -> dict:
        """``x * (1 (x) a)``."""
        A = self.A
        out = {}
        for (b, a2), cx in x.items():
            for am, cm in A.basis_product(a2, a).items():
                add_term(out, (b, am), cx * cm)
        return out

    def lmul_b(self, b: Mono, x: Mapping) -> dict:
        """``(b (x) 1) * x``."""
        B = self.B
        out = {}
        for (b2, a2), cx in x.items():
            for bm, cm in B.basis_product(b, b2).items():
                add_term(out, (bm, a2), cx * cm)
        return out

    def rmul_b(self, x: Mapping, b: Mono) -> dict:
        """``x * (b (x) 1)``."""
        B = self.B
        out = {}
        for (b2, a2), cx in x.items():
            for (bn, an), cp in self(a2, b).items():
                c = cx * cp
                for bm, cm in B.basis_product(b2, bn).items():
                    add_term(out, (bm, an), c * cm)
        return out

    # twist chains -----------------------------------------------------

    def chain_left(self, a_args: Sequence[Mono], b: Mono) -> dict:
        """``(Psi (x) A^{n-1}) ... (A^{n-1} (x) Psi)`` on ``a_n,...,a_1, b``.

        Keys of the result are ``(b', a_n', ..., a_1')``.
        """
        key = (tuple(a_args), b)
        v = self._left_chains.get(key)
        if v is not None:
            return v
        states = {(b, ()): 1}
        for a in reversed(key[0]):
            nxt = {}
            for (bc, tail), c in states.items():
                for (bn, an), cp in self(a, bc).items():
                    add_term(nxt, (bn, (an,) + tail), c * cp)
            states = nxt
        v = {(bn,) + tail: c for (bn, tail), c in states.items()}
        self._left_chains[key] = v
        return v

    def chain_right(self, a: Mono, b_args: Sequence[Mono]) -> dict:
        """Move ``a`` rightwards past ``b^1, ..., b^n``.

        Keys of the result are ``(b^1', ..., b^n', a')``.
        """
        key = (a, tuple(b_args))
        v = self._right_chains.get(key)
        if v is not None:
            return v
        states = {((), a): 1}
        for b in key[1]:
            nxt = {}
            for (heads, ac), c in states.items():
                for (bn, an), cp in self(ac, b).items():
                    add_term(nxt, (heads + (bn,), an), c * cp)
            states = nxt
        v = {heads + (an,): c for (heads, an), c in states.items()}
        self._right_chains[key] = v
        return v


def x_multiply(psi: TwistMap, x: Mapping, y: Mapping) -> TensorElement:
    for el in (x, y):
        if isinstance(el, TensorElement) and len(el.signature) != 2:
            raise ValueError("x_multiply needs elements of B (x) A")
    return TensorElement(psi.xmul(x, y), ("B", "A"))


def twist_chain_left(psi: TwistMap, args: Sequence[Mono]) -> TensorElement:
    """``args = (a_n, ..., a_1, b)``."""
    if len(args) < 2:
        raise ValueError("twist_chain_left needs at least one a and one b")
    *a_args, b = args
    return TensorElement(psi.chain_left(a_args, b), ("B",) + ("A",) * len(a_args))


def twist_chain_right(psi: TwistMap, args: Sequence[Mono]) -> TensorElement:
    """``args = (a, b^1, ..., b^n)``."""
    if len(args) < 2:
        raise ValueError("twist_chain_right needs one a and at least one b")
    a, *b_args = args
    return TensorElement(psi.chain_right(a, b_args), ("B",) * len(b_args) + ("A",))


# ---------------------------------------------------------------- axioms

def axiom_defects(psi: TwistMap, degree_bound: int | None):
    """Yield ``(axiom, args, lhs, rhs)`` for every factorisation identity on
    every basis tuple within the bound.

    A-multiplicativity: ``Psi(mu_A (x) B) = (B (x) mu_A)(Psi (x) A)(A (x) Psi)``
    B-multiplicativity: ``Psi(A (x) mu_B) = (mu_B (x) A)(B (x) Psi)(Psi (x) B)``
    plus ``Psi(1_A (x) b) = b (x) 1_A`` and ``Psi(a (x) 1_B) = 1_B (x) a``
    with the units of ``A`` and ``B`` as reported by the algebras.
    """
    A, B = psi.A, psi.B
    for x, y, b in basis_tuples([A, A, B], degree_bound):
        lhs = psi.apply(A.basis_product(x, y), {b: 1})
        rhs = {}
        for (bn, xn, yn), c in psi.chain_left((x, y), b).items():
            for m, cm in A.basis_product(xn, yn).items():
                add_term(rhs, (bn, m), c * cm)
        yield "A-multiplicativity", (x, y, b), lhs, rhs
    for a, b1, b2 in basis_tuples([A, B, B], degree_bound):
        lhs = psi.apply({a: 1}, B.basis_product(b1, b2))
        rhs = {}
        for (bn1, bn2, an), c in psi.chain_right(a, (b1, b2)).items():
            for m, cm in B.basis_product(bn1, bn2).items():
                add_term(rhs, (m, an), c * cm)
        yield "B-multiplicativity", (a, b1, b2), lhs, rhs
    ua = A.unit_element()
    ub = B.unit_element()
    for (b,) in basis_tuples([B], degree_bound):
        lhs = psi.apply(ua, {b: 1})
        rhs = {(b, a): c for a, c in ua.items()}
        yield "unit of A (Psi(1_A, b) = b, 1_A)", (b,), lhs, rhs
    for (a,) in basis_tuples([A], degree_bound):
        lhs = psi.apply({a: 1}, ub)
        rhs = {(b, a): c for b, c in ub.items()}
        yield "unit of B (Psi(a, 1_B) = 1_B, a)", (a,), lhs, rhs


def check_axioms(psi: TwistMap, degree_bound: int | None = None) -> Report:
    checked = 0
    for axiom, args, lhs, rhs in axiom_defects(psi, degree_bound):
        checked += 1
        if lhs != rhs:
            return Report(
                "twist_axioms", False, Witness(axiom, args, lhs, rhs),
                {"degree_bound": degree_bound, "checked": checked},
            )
    return Report("twist_axioms", True, None, {"degree_bound": degree_bound, "checked": checked})


# ---------------------------------------------------------------- construction

def twist_from_rule(A: BasedAlgebra, B: BasedAlgebra, rule, name: str = "psi") -> TwistMap:
    return TwistMap(A, B, rule, name)


def flip(A: BasedAlgebra, B: BasedAlgebra) -> TwistMap:
    """The ordinary tensor-product twist ``a (x) b -> b (x) a``."""
    return TwistMap(A, B, lambda a, b: {(b, a): 1}, "flip")


def extend_from_generators(
    A: BasedAlgebra,
    B: BasedAlgebra,
    gen_rules: Mapping,
    *,
    verify_degree: int | None = 4,
    name: str = "psi",
) -> TwistMap:
    """Extend ``Psi`` from generator pairs to all basis pairs.

    ``gen_rules`` maps ``(a_generator_name, b_generator_name)`` to a mapping
    ``(b_mono, a_mono) -> coeff``.  A-monomials are split by peeling their
    first generator and resolved with A-multiplicativity; B-monomials likewise
    with B-multiplicativity.  With ``verify_degree`` set, the resulting map is checked against
    both axioms on all tuples up to that degree, which compares every other
    splitting with the chosen one.
    """
    rules = {}
    for ga in A.generators:
        for gb in B.generators:
            if (ga, gb) not in gen_rules:
                raise ValueError(f"no rule for generator pair ({ga}, {gb})")
            val = {}
            for k, c in dict(gen_rules[ga, gb]).items():
                add_term(val, (tuple(k[0]), tuple(k[1])), c)
            rules[A.generator_monos[ga], B.generator_monos[gb]] = val

    memo: dict = {}
    active: set = set()
    watermark = [0]

    def psi(a, b):
        key = (a, b)
        v = memo.get(key)
        if v is not None:
            return v
        if key in active:
            raise NonTerminating(f"recursion revisits basis pair {key}")
        if len(active) > 200 + 20 * (A.degree(a) + B.degree(b)):
            raise NonTerminating(f"recursion depth watermark exceeded at {key}")
        active.add(key)
        try:
            v = _extend_step(a, b)
        finally:
            active.discard(key)
        memo[key] = v
        watermark[0] = max(watermark[0], len(active))
        return v

    def _extend_step(a, b):
        out = {}
        if a == A.unit:
            return {(b, a): 1}
        if b == B.unit:
            return {(b, a): 1}
        if A.is_generator(a) and B.is_generator(b):
            return dict(rules[a, b])
        if not A.is_generator(a):
            g, rest, c = A.split(a)
            inv = _inverse(c)
            for (b1, r1), c1 in psi(rest, b).items():
                for (b2, g2), c2 in psi(g, b1).items():
                    for m, c3 in A.basis_product(g2, r1).items():
                        add_term(out, (b2, m), c1 * c2 * c3 * inv)
            return out
        h, rest, c = B.split(b)
        inv = _inverse(c)
        for (h1, g1), c1 in psi(a, h).items():
            for (r1, g2), c2 in psi(g1, rest).items():
                for m, c3 in B.basis_product(h1, r1).items():
                    add_term(out, (m, g2), c1 * c2 * c3 * inv)
        return out

    tw = TwistMap(A, B, psi, name, gen_rules={k: dict(v) for k, v in gen_rules.items()})
    if verify_degree is not None:
        rep = check_axioms(tw, verify_degree)
        if not rep.ok:
            raise AmbiguousExtension(rep)
    return tw


def _inverse(c):
    if c == 1:
        return 1
    return Fraction(1) / c if isinstance(c, int) else 1 / c
