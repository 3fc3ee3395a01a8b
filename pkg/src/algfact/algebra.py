"""Algebras with an explicit monomial basis and exact structure constants."""

from __future__ import annotations

import itertools
from collections.abc import Callable, Mapping, Sequence
from fractions import Fraction

from .lincomb import AlgElement, add_term, sort_key
from .reports import Report, Witness
from .scalar import QRational

Mono = tuple


class BasedAlgebra:
    """A unital algebra given by a product rule on basis monomials.

    ``basis_product(x, y)`` returns a mapping monomial -> coefficient.  For
    infinite-dimensional families ``basis`` is ``None`` and monomials are
    exponent vectors over ``generators``; finite algebras list their basis
    slots explicitly.
    """

    def __init__(
        self,
        name: str,
        generators: Sequence[str],
        basis_product: Callable[[Mono, Mono], Mapping],
        unit: Mono,
        *,
        degree: Callable[[Mono], int] | None = None,
        basis: Sequence[Mono] | None = None,
        generator_monos: Mapping[str, Mono] | None = None,
        unit_element: Callable[[], Mapping] | None = None,
        family: dict | None = None,
    ):
        if len(set(generators)) != len(generators):
            raise ValueError(f"duplicate generator names in {list(generators)}")
        self.name = name
        self.generators = tuple(generators)
        self._product = basis_product
        self.unit = unit
        self._degree = degree or sum
        self.basis = tuple(basis) if basis is not None else None
        if generator_monos is None:
            n = len(self.generators)
            generator_monos = {
                g: tuple(1 if j == i else 0 for j in range(n))
                for i, g in enumerate(self.generators)
            }
        self.generator_monos = dict(generator_monos)
        self._gen_set = frozenset(self.generator_monos.values())
        self._unit_element = unit_element
        # descriptor used for serialisation; None for derived algebras
        self.family = family
        self._cache: dict = {}

    def __repr__(self):
        return f"BasedAlgebra({self.name!r})"

    @property
    def finite_dimension(self) -> int | None:
        return None if self.basis is None else len(self.basis)

    @property
    def is_finite(self) -> bool:
        return self.basis is not None

    def degree(self, mono: Mono) -> int:
        return self._degree(mono)

    def basis_product(self, x: Mono, y: Mono) -> dict:
        key = (x, y)
        try:
            return self._cache[key]
        except KeyError:
            pass
        d = {}
        for m, c in self._product(x, y).items():
            add_term(d, m, c)
        self._cache[key] = d
        return d

    def mul(self, x: Mapping, y: Mapping) -> dict:
        """Bilinear product on plain dicts."""
        out = {}
        for mx, cx in x.items():
            for my, cy in y.items():
                c = cx * cy
                for m, cm in self.basis_product(mx, my).items():
                    add_term(out, m, c * cm)
        return out

    def multiply(self, x: Mapping, y: Mapping) -> AlgElement:
        for m in itertools.chain(x, y):
            self._check_mono(m)
        return AlgElement(self.mul(x, y))

    def _check_mono(self, m) -> None:
        if self.basis is not None:
            if m not in self._basis_set:
                raise KeyError(f"{m!r} is not a basis index of {self.name}")
        elif not (
            isinstance(m, tuple)
            and len(m) == len(self.generators)
            and all(isinstance(e, int) and e >= 0 for e in m)
        ):
            raise KeyError(f"{m!r} is not a monomial of {self.name}")

    @property
    def _basis_set(self):
        s = self._cache.get("__basis_set__")
        if s is None:
            s = self._cache["__basis_set__"] = frozenset(self.basis)
        return s

    def unit_element(self) -> dict:
        if self._unit_element is not None:
            return dict(self._unit_element())
        return {self.unit: 1}

    def element(self, terms: Mapping) -> AlgElement:
        return AlgElement(terms)

    def gen(self, name: str) -> AlgElement:
        return AlgElement({self.generator_monos[name]: 1})

    def is_generator(self, mono: Mono) -> bool:
        return mono in self._gen_set

    def monomials(self, max_degree: int | None = None) -> list:
        """Basis monomials of degree <= max_degree in canonical order."""
        if self.basis is not None:
            ms = [m for m in self.basis if max_degree is None or self.degree(m) <= max_degree]
            return sorted(ms, key=lambda m: (self.degree(m), self.basis.index(m)))
        if max_degree is None:
            raise ValueError(f"{self.name} is infinite-dimensional; a degree cap is required")
        n = len(self.generators)
        out = []
        for d in range(max_degree + 1):
            out.extend(_compositions(d, n))
        return sorted(out, key=sort_key)

    def split(self, mono: Mono):
        """Write a non-generator, non-unit monomial as ``g * rest``.

        Peels the first generator (in generator order) with positive exponent.
        Returns ``(g, rest, c)`` with ``g * rest = c * mono``.
        """
        if self.basis is not None:
            raise ValueError(f"{mono!r} in {self.name} is not a product of generators")
        for i, e in enumerate(mono):
            if e > 0:
                g = tuple(1 if j == i else 0 for j in range(len(mono)))
                rest = mono[:i] + (e - 1,) + mono[i + 1:]
                prod = self.basis_product(g, rest)
                if len(prod) != 1 or mono not in prod:
                    raise ValueError(f"{g}*{rest} is not a multiple of {mono} in {self.name}")
                return g, rest, prod[mono]
        raise ValueError("cannot split the unit")

    def with_product(self, name: str, product, unit_element=None) -> "BasedAlgebra":
        """Same basis, different structure constants (used for deformations)."""
        return BasedAlgebra(
            name,
            self.generators,
            product,
            self.unit,
            degree=self._degree,
            basis=self.basis,
            generator_monos=self.generator_monos,
            unit_element=unit_element,
        )


def _compositions(d: int, n: int):
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


def basis_tuples(algebras: Sequence[BasedAlgebra], max_degree: int | None):
    """All tuples of basis monomials with total degree <= max_degree."""
    pools = []
    for alg in algebras:
        if alg.is_finite:
            pools.append(alg.monomials())
        else:
            if max_degree is None:
                raise ValueError(f"{alg.name} is infinite-dimensional; a degree cap is required")
            pools.append(alg.monomials(max_degree))
    degs = [[alg.degree(m) for m in pool] for alg, pool in zip(algebras, pools)]

    def rec(i, budget):
        if i == len(pools):
            yield ()
            return
        for m, d in zip(pools[i], degs[i]):
            if max_degree is not None and d > budget:
                continue
            for rest in rec(i + 1, budget - d):
                yield (m,) + rest

    yield from rec(0, max_degree if max_degree is not None else 0)


def tuple_degree(algebras: Sequence[BasedAlgebra], args) -> int:
    return sum(alg.degree(m) for alg, m in zip(algebras, args))


# ---------------------------------------------------------------- families

def family_commutative_poly(gens: Sequence[str], name: str | None = None) -> BasedAlgebra:
    gens = tuple(gens)
    if not gens:
        raise ValueError("need at least one generator")

    def product(x, y):
        return {tuple(a + b for a, b in zip(x, y)): 1}

    return BasedAlgebra(
        name or f"k[{','.join(gens)}]",
        gens,
        product,
        (0,) * len(gens),
        family={"family": "commutative_poly", "generators": list(gens)},
    )


def family_q_plane(q=None, gens: Sequence[str] = ("a", "abar"), name: str | None = None) -> BasedAlgebra:
    """Manin's quantum plane ``abar a = q a abar`` with normal-ordered basis
    ``a^k abar^l``: ``(a^k abar^l)(a^m abar^n) = q^(l m) a^(k+m) abar^(l+n)``."""
    if len(gens) != 2:
        raise ValueError("the quantum plane has exactly two generators")
    formal = q is None
    if formal:
        q = QRational.q()
    powers = {}

    def qpow(e):
        v = powers.get(e)
        if v is None:
            v = powers[e] = q ** e if e else 1
        return v

    def product(x, y):
        (k, l), (m, n) = x, y
        return {(k + m, l + n): qpow(l * m)}

    desc = {"family": "q_plane", "generators": list(gens), "q": "formal" if formal else q}
    return BasedAlgebra(name or "k_q[a,abar]", tuple(gens), product, (0, 0), family=desc)


def family_table(
    basis_names: Sequence[str],
    table: Sequence[Sequence[Mapping]],
    *,
    unit: int | None = None,
    name: str | None = None,
) -> BasedAlgebra:
    """Finite-dimensional algebra from dense structure constants.

    ``table[i][j]`` maps slot index -> coefficient (or ``(slot,)`` -> coeff)
    and gives the product of basis slots ``i`` and ``j``.  Associativity is
    not assumed; see :func:`associativity_check`.
    """
    dim = len(basis_names)
    if dim == 0 or len(table) != dim or any(len(row) != dim for row in table):
        raise ValueError(f"table must be {dim}x{dim}")
    prods = {}
    for i in range(dim):
        for j in range(dim):
            entry = {}
            for k, c in dict(table[i][j]).items():
                slot = k[0] if isinstance(k, tuple) else k
                if not 0 <= slot < dim:
                    raise ValueError(f"table entry ({i},{j}) refers to slot {slot}")
                add_term(entry, (slot,), c)
            prods[(i,), (j,)] = entry

    def acts_as_unit(u):
        return all(
            prods[(u,), (j,)] == {(j,): 1} and prods[(j,), (u,)] == {(j,): 1}
            for j in range(dim)
        )

    if unit is None:
        unit = next((u for u in range(dim) if acts_as_unit(u)), None)
        if unit is None:
            raise ValueError("table has no unit slot")
    elif not acts_as_unit(unit):
        raise ValueError(f"slot {unit} does not act as a unit")

    gens = [basis_names[i] for i in range(dim) if i != unit]
    gen_monos = {basis_names[i]: (i,) for i in range(dim) if i != unit}

    def product(x, y):
        return prods[x, y]

    desc = {
        "family": "table",
        "basis": list(basis_names),
        "unit": unit,
        "table": [[{k[0]: c for k, c in prods[(i,), (j,)].items()} for j in range(dim)] for i in range(dim)],
    }
    return BasedAlgebra(
        name or "table",
        gens,
        product,
        (unit,),
        degree=lambda m, u=unit: 0 if m[0] == u else 1,
        basis=[(i,) for i in range(dim)],
        generator_monos=gen_monos,
        family=desc,
    )


def complex_numbers(gen: str = "i", name: str | None = None) -> BasedAlgebra:
    """``R[i]/(i^2 + 1)`` on the basis ``{1, i}`` (over Q)."""
    one, i = {0: 1}, {1: 1}
    table = [[one, i], [i, {0: Fraction(-1)}]]
    return family_table(["1", gen], table, unit=0, name=name or f"C[{gen}]")


# ---------------------------------------------------------------- checks

def associativity_check(alg: BasedAlgebra, degree_bound: int | None = None) -> Report:
    """Check ``(xy)z = x(yz)`` on basis triples of total degree <= bound."""
    checked = 0
    for x, y, z in basis_tuples([alg] * 3, degree_bound):
        lhs = alg.mul(alg.basis_product(x, y), {z: 1})
        rhs = alg.mul({x: 1}, alg.basis_product(y, z))
        checked += 1
        if lhs != rhs:
            return Report(
                "associativity",
                False,
                Witness("associativity", (x, y, z), lhs, rhs),
                {"algebra": alg.name, "checked": checked},
            )
    return Report("associativity", True, None, {"algebra": alg.name, "checked": checked})


def unit_check(alg: BasedAlgebra, degree_bound: int | None = None) -> Report:
    u = alg.unit_element()
    checked = 0
    for (x,) in basis_tuples([alg], degree_bound):
        checked += 1
        for side, val in (("left", alg.mul(u, {x: 1})), ("right", alg.mul({x: 1}, u))):
            if val != {x: 1}:
                return Report(
                    "unit",
                    False,
                    Witness(f"unit ({side})", (x,), val, {x: 1}),
                    {"algebra": alg.name},
                )
    return Report("unit", True, None, {"algebra": alg.name, "checked": checked})
