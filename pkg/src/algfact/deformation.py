"""Formal deformations ``mu_t = sum t^i mu^(i)``, ``Psi_t = sum t^i Psi^(i)``
of a factorisation, checked and extended order by order.

Higher-order maps are stored as cochains: ``mu_A^(i)`` in bidegree (2,0),
``Psi^(i)`` in (1,1) with keys ``(b, a)``, ``mu_B^(i)`` in (0,2).  ``None``
stands for a zero map.  Order 0 is always the base factorisation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import BasedAlgebra, basis_tuples
from .cohomology import CapsRequired, SolveResult, solve_coboundary
from .complex import Cochain, CochainComplex, TotalCochain
from .lincomb import add_term
from .reports import Report, Witness
from .scalar import TSeries
from .twist import TwistMap, axiom_defects


class PreconditionError(ValueError):
    pass


class NonRemovable(Exception):
    """The obstruction is not a coboundary on the enumerated system."""

    def __init__(self, result: SolveResult, message: str = ""):
        self.result = result
        super().__init__(message or f"no solution; inconsistent row {result.witness}")


class NotTrivial(Exception):
    """The order-1 part is not a coboundary on the enumerated system."""

    def __init__(self, result: SolveResult, message: str = ""):
        self.result = result
        super().__init__(message or f"order-1 part is not a coboundary; row {result.witness}")


class Inconclusive(Exception):
    """The capped system has no solution but is not closed under D."""

    def __init__(self, result: SolveResult, message: str = ""):
        self.result = result
        super().__init__(
            message
            or f"capped system inconclusive ({len(result.escapes)} escapes, {result.mixed_rows} mixed rows)"
        )


class PathMismatch(AssertionError):
    pass


def base_mu(alg: BasedAlgebra, m: int = 2, n: int = 0) -> Cochain:
    if (m, n) == (2, 0):
        return Cochain(2, 0, lambda args: alg.basis_product(*args), f"mu_{alg.name}")
    return Cochain(0, 2, lambda args: alg.basis_product(*args), f"mu_{alg.name}")


def base_psi(psi: TwistMap) -> Cochain:
    return Cochain(1, 1, lambda args: psi(*args), psi.name)


def _pad(series, order: int) -> tuple:
    s = list(series or ())
    if len(s) > order:
        raise ValueError(f"{len(s)} terms given for order {order}")
    return tuple(s) + (None,) * (order - len(s))


class DeformationData:
    def __init__(self, psi: TwistMap, order: int, mu_a=(), psi_series=(), mu_b=(), name: str = ""):
        if order < 0:
            raise ValueError("order must be >= 0")
        self.psi = psi
        self.A = psi.A
        self.B = psi.B
        self.order = order
        self.mu_a = _pad(mu_a, order)
        self.psi_series = _pad(psi_series, order)
        self.mu_b = _pad(mu_b, order)
        self.name = name
        for i, (f, g, h) in enumerate(zip(self.mu_a, self.psi_series, self.mu_b), start=1):
            for c, bd in ((f, (2, 0)), (g, (1, 1)), (h, (0, 2))):
                if c is not None and (c.m, c.n) != bd:
                    raise ValueError(f"order-{i} term has bidegree {(c.m, c.n)}, expected {bd}")
        self._base = (base_mu(self.A), base_psi(psi), base_mu(self.B, 0, 2))

    def __repr__(self):
        return f"DeformationData({self.name or self.psi.name!r}, order={self.order})"

    @property
    def complex(self) -> CochainComplex:
        return CochainComplex(self.psi)

    def mu_A(self, i: int) -> Cochain | None:
        return self._base[0] if i == 0 else self.mu_a[i - 1]

    def Psi(self, i: int) -> Cochain | None:
        return self._base[1] if i == 0 else self.psi_series[i - 1]

    def mu_B(self, i: int) -> Cochain | None:
        return self._base[2] if i == 0 else self.mu_b[i - 1]

    def is_psi_only(self) -> bool:
        return all(f is None for f in self.mu_a) and all(f is None for f in self.mu_b)

    def truncated(self, n: int) -> "DeformationData":
        n = min(n, self.order)
        return DeformationData(self.psi, n, self.mu_a[:n], self.psi_series[:n], self.mu_b[:n], self.name)

    def extended(self, mu_a_n=None, psi_n=None, mu_b_n=None) -> "DeformationData":
        return DeformationData(
            self.psi,
            self.order + 1,
            self.mu_a + (mu_a_n,),
            self.psi_series + (psi_n,),
            self.mu_b + (mu_b_n,),
            self.name,
        )

    def triple(self, i: int) -> TotalCochain:
        """``mu_A^(i) (+) Psi^(i) (+) mu_B^(i)`` as a degree-2 cochain."""
        comps = {}
        for bd, f in (((2, 0), self.mu_A(i)), ((1, 1), self.Psi(i)), ((0, 2), self.mu_B(i))):
            if f is not None:
                comps[bd] = f
        return TotalCochain(2, comps)

    # series-valued structure --------------------------------------------

    def deformed(self, n: int, top: int | None = None):
        """``(A_t, B_t, Psi_t)`` with coefficients in ``k[t]/(t^(n+1))``,
        using the maps of orders ``0..top`` (default ``n``)."""
        top = n if top is None else top
        if top > self.order:
            raise PreconditionError(f"order {top} requested, data has order {self.order}")
        A_t = _series_algebra(self.A, [self.mu_A(i) for i in range(top + 1)], n, f"{self.A.name}_t")
        B_t = _series_algebra(self.B, [self.mu_B(i) for i in range(top + 1)], n, f"{self.B.name}_t")
        series = [self.Psi(i) for i in range(top + 1)]

        def rule(a, b):
            return _series_value(series, (a, b), n)

        return A_t, B_t, TwistMap(A_t, B_t, rule, f"{self.psi.name}_t")


def _series_value(series, args, n) -> dict:
    acc: dict = {}
    for i, f in enumerate(series):
        if f is None or i > n:
            continue
        for k, c in f.value(args).items():
            cs = acc.get(k)
            if cs is None:
                cs = acc[k] = [0] * (n + 1)
            cs[i] = cs[i] + c
    return {k: TSeries(cs) for k, cs in acc.items()}


def _series_algebra(base: BasedAlgebra, series, n: int, name: str) -> BasedAlgebra:
    def product(x, y):
        return _series_value(series, (x, y), n)

    unit_cache = []

    def unit_element():
        if not unit_cache:
            unit_cache.append(deformed_unit(base, series, n))
        return unit_cache[0]

    return base.with_product(name, product, unit_element)


def deformed_unit(base: BasedAlgebra, series, n: int) -> dict:
    """``u_0 = 1``, ``u_i = -sum_{j<i} mu^(i-j)(u_j, 1)``: the only candidate
    for a unit of ``mu_t`` that is a right identity on ``1``."""
    one = base.unit
    us = [{one: 1}]
    for i in range(1, n + 1):
        ui = {}
        for j in range(i):
            f = series[i - j] if i - j < len(series) else None
            if f is None:
                continue
            for m, c in us[j].items():
                for r, v in f.value((m, one)).items():
                    add_term(ui, r, -c * v)
        us.append(ui)
    acc: dict = {}
    for i, u in enumerate(us):
        for m, c in u.items():
            acc.setdefault(m, [0] * (n + 1))[i] = c
    return {m: TSeries(cs) for m, cs in acc.items()}


def _first_order(lhs: dict, rhs: dict):
    """Lowest t-power at which two series-valued vectors differ, or None."""
    best = None
    for k in set(lhs) | set(rhs):
        x, y = lhs.get(k, 0), rhs.get(k, 0)
        d = x - y if isinstance(x, TSeries) else (-(y - x) if isinstance(y, TSeries) else None)
        if d is None:
            if x != y:
                return 0
            continue
        for i, c in enumerate(d.coeffs):
            if c:
                if best is None or i < best:
                    best = i
                break
    return best


# ---------------------------------------------------------------- checks

def check_order(data: DeformationData, n: int, degree_bound: int | None = None) -> Report:
    """Associativity of ``A_t`` and ``B_t`` (with their units) and the
    factorisation identities for ``Psi_t``, all modulo ``t^(n+1)``."""
    if n > data.order:
        raise PreconditionError(f"check at order {n} needs data of order >= {n}")
    if degree_bound is None and not (data.A.is_finite and data.B.is_finite):
        raise CapsRequired("check_order on an infinite-dimensional factorisation needs a degree bound")
    A_t, B_t, psi_t = data.deformed(n)
    found = None
    checked = 0

    def consider(axiom, args, lhs, rhs):
        nonlocal found, checked
        checked += 1
        o = _first_order(lhs, rhs)
        if o is not None and (found is None or o < found.order):
            found = Witness(axiom, args, lhs, rhs, o)
        return found is not None and found.order == 0

    for alg, label in ((A_t, "A_t"), (B_t, "B_t")):
        for x, y, z in basis_tuples([alg] * 3, degree_bound):
            lhs = alg.mul(alg.basis_product(x, y), {z: 1})
            rhs = alg.mul({x: 1}, alg.basis_product(y, z))
            if consider(f"associativity of {label}", (x, y, z), lhs, rhs):
                break
        u = alg.unit_element()
        for (x,) in basis_tuples([alg], degree_bound):
            if consider(f"left unit of {label}", (x,), alg.mul(u, {x: 1}), {x: 1}):
                break
            if consider(f"right unit of {label}", (x,), alg.mul({x: 1}, u), {x: 1}):
                break
    if found is None or found.order > 0:
        for axiom, args, lhs, rhs in axiom_defects(psi_t, degree_bound):
            if consider(axiom, args, lhs, rhs):
                break
    details = {"order": n, "degree_bound": degree_bound, "checked": checked}
    if found is not None:
        details["first_failing_order"] = found.order
        return Report("check_order", False, found, details)
    return Report("check_order", True, None, details)


class VerdictMismatch(AssertionError):
    pass


def infinitesimal_cocycle_check(data: DeformationData, degree_bound: int | None = None) -> Report:
    """``D(mu_A^(1) + Psi^(1) + mu_B^(1)) = 0`` next to ``check_order(data, 1)``.

    The two verdicts must agree; disagreement raises :class:`VerdictMismatch`.
    """
    if data.order < 1:
        raise PreconditionError("need order >= 1")
    cx = data.complex
    cocycle = cx.vanishes(cx.D(data.triple(1)), degree_bound, "infinitesimal_cocycle")
    direct = check_order(data, 1, degree_bound)
    if cocycle.ok != direct.ok:
        raise VerdictMismatch(
            f"D-closedness says {cocycle.verdict}, order-1 check says {direct.verdict}"
        )
    cocycle.details["check_order"] = direct.verdict
    if not cocycle.ok and direct.witness is not None:
        cocycle.details["order_check_witness"] = direct.witness
    return cocycle


# ---------------------------------------------------------------- obstruction

@dataclass
class ObstructionClass:
    order: int
    obs_A: Cochain
    obs_A_psi: Cochain
    obs_B_psi: Cochain
    obs_B: Cochain
    agreement: Report | None = None

    @property
    def total(self) -> TotalCochain:
        return TotalCochain(
            3,
            {(3, 0): self.obs_A, (2, 1): self.obs_A_psi, (1, 2): self.obs_B_psi, (0, 3): self.obs_B},
        )

    def components(self) -> dict:
        return {"Obs_A": self.obs_A, "Obs_A_Psi": self.obs_A_psi, "Obs_B_Psi": self.obs_B_psi, "Obs_B": self.obs_B}


def _apply2(f: Cochain | None, x: dict, y: dict, out: dict, s=1) -> None:
    if f is None:
        return
    for mx, cx in x.items():
        for my, cy in y.items():
            c = cx * cy * s
            for k, v in f.value((mx, my)).items():
                add_term(out, k, c * v)


def _index_triples(n: int):
    for k in range(n):
        for l in range(n):
            j = n - k - l
            if 0 <= j <= n - 1:
                yield k, l, j


def obstruction_formulas(data: DeformationData, n: int) -> ObstructionClass:
    """The four obstruction components from the explicit sums (orders < n)."""
    if n < 2:
        raise PreconditionError("obstructions start at order 2")
    if n - 1 > data.order:
        raise PreconditionError(f"order-{n} obstruction needs data of order {n - 1}")
    muA, psiS, muB = data.mu_A, data.Psi, data.mu_B

    def associator_terms(mu):
        def rule(args):
            x, y, z = args
            out = {}
            for k in range(1, n):
                f, g = mu(k), mu(n - k)
                if f is None or g is None:
                    continue
                _apply2(f, g.value((x, y)), {z: 1}, out)
                _apply2(f, {x: 1}, g.value((y, z)), out, -1)
            return out

        return rule

    def a_psi(args):
        a2, a1, b = args
        out = {}
        for k in range(1, n):
            f, g = psiS(n - k), muA(k)
            if f is None or g is None:
                continue
            _apply2(f, g.value((a2, a1)), {b: 1}, out)
        for k, l, j in _index_triples(n):
            m, pl, pj = muA(k), psiS(l), psiS(j)
            if m is None or pl is None or pj is None:
                continue
            for (b1, a1n), c1 in pj.value((a1, b)).items():
                for (b2, a2n), c2 in pl.value((a2, b1)).items():
                    for r, c3 in m.value((a2n, a1n)).items():
                        add_term(out, (b2, r), -c1 * c2 * c3)
        return out

    def b_psi(args):
        a, b1, b2 = args
        out = {}
        for k, l, j in _index_triples(n):
            m, pl, pj = muB(k), psiS(l), psiS(j)
            if m is None or pl is None or pj is None:
                continue
            for (b1n, an), c1 in pj.value((a, b1)).items():
                for (b2n, ann), c2 in pl.value((an, b2)).items():
                    for r, c3 in m.value((b1n, b2n)).items():
                        add_term(out, (r, ann), c1 * c2 * c3)
        for k in range(1, n):
            f, g = psiS(n - k), muB(k)
            if f is None or g is None:
                continue
            _apply2(f, {a: 1}, g.value((b1, b2)), out, -1)
        return out

    return ObstructionClass(
        n,
        Cochain(3, 0, associator_terms(muA), f"Obs_A^({n})"),
        Cochain(2, 1, a_psi, f"Obs_A,Psi^({n})"),
        Cochain(1, 2, b_psi, f"Obs_B,Psi^({n})"),
        Cochain(0, 3, associator_terms(muB), f"Obs_B^({n})"),
    )


def obstruction_by_extraction(data: DeformationData, n: int) -> ObstructionClass:
    """The same four components read off as the ``t^n`` coefficients of the
    associators and factorisation defects of the maps truncated below order n."""
    if n - 1 > data.order:
        raise PreconditionError(f"order-{n} obstruction needs data of order {n - 1}")
    A_t, B_t, psi_t = data.deformed(n, top=n - 1)

    def coeff(d: dict, s=1) -> dict:
        out = {}
        for k, v in d.items():
            c = v.coeffs[n] if isinstance(v, TSeries) else (v if n == 0 else 0)
            add_term(out, k, c * s if s != 1 else c)
        return out

    def assoc(alg):
        def rule(args):
            x, y, z = args
            d = alg.mul(alg.basis_product(x, y), {z: 1})
            for k, v in alg.mul({x: 1}, alg.basis_product(y, z)).items():
                add_term(d, k, -v)
            return coeff(d)

        return rule

    def a_psi(args):
        x, y, b = args
        d = psi_t.apply(A_t.basis_product(x, y), {b: 1})
        for (bn, xn, yn), c in psi_t.chain_left((x, y), b).items():
            for m, cm in A_t.basis_product(xn, yn).items():
                add_term(d, (bn, m), -c * cm)
        return coeff(d)

    def b_psi(args):
        a, b1, b2 = args
        d = {}
        for (bn1, bn2, an), c in psi_t.chain_right(a, (b1, b2)).items():
            for m, cm in B_t.basis_product(bn1, bn2).items():
                add_term(d, (m, an), c * cm)
        for k, v in psi_t.apply({a: 1}, B_t.basis_product(b1, b2)).items():
            add_term(d, k, -v)
        return coeff(d)

    return ObstructionClass(
        n,
        Cochain(3, 0, assoc(A_t), f"Obs_A^({n})'"),
        Cochain(2, 1, a_psi, f"Obs_A,Psi^({n})'"),
        Cochain(1, 2, b_psi, f"Obs_B,Psi^({n})'"),
        Cochain(0, 3, assoc(B_t), f"Obs_B^({n})'"),
    )


def compare_totals(cx: CochainComplex, x: TotalCochain, y: TotalCochain, degree_bound, name: str) -> Report:
    return cx.vanishes(x - y, degree_bound, name)


def obstruction(
    data: DeformationData,
    n: int,
    degree_bound: int | None = None,
    *,
    cross_check: bool = True,
    check_precondition: bool = True,
) -> ObstructionClass:
    """``Obs^(n)`` of a deformation valid to order ``n - 1``.

    The explicit sums are the primary result; with ``cross_check`` the
    ``t^n``-extraction path is evaluated independently on every tuple within
    ``degree_bound`` and any difference raises :class:`PathMismatch`.
    """
    fin = data.A.is_finite and data.B.is_finite
    if degree_bound is None and not fin:
        raise CapsRequired("obstruction on an infinite-dimensional factorisation needs a degree bound")
    if check_precondition:
        pre = check_order(data, n - 1, degree_bound)
        if not pre.ok:
            raise PreconditionError(f"data fails at order {pre.details['first_failing_order']}: {pre.witness}")
    obs = obstruction_formulas(data, n)
    if cross_check:
        other = obstruction_by_extraction(data, n)
        rep = compare_totals(data.complex, obs.total, other.total, degree_bound, "obstruction_paths")
        if not rep.ok:
            raise PathMismatch(f"obstruction paths disagree: {rep.witness}")
        obs.agreement = rep
    return obs


def obstruction_is_cocycle(data_or_complex, obs: ObstructionClass, degree_bound: int | None = None) -> Report:
    cx = data_or_complex.complex if isinstance(data_or_complex, DeformationData) else data_or_complex
    return cx.vanishes(cx.D(obs.total), degree_bound, "obstruction_is_cocycle")


def psi_only_mixed_terms(data: DeformationData, n: int):
    """Mixed obstruction terms when all higher products vanish:
    ``-sum (B (x) mu_A)(Psi^(i) (x) A)(A (x) Psi^(n-i))`` and
    ``sum (mu_B (x) A)(B (x) Psi^(i))(Psi^(n-i) (x) B)``, ``i = 1..n-1``."""
    if not data.is_psi_only():
        raise PreconditionError("data has nonzero product deformations")
    A, B = data.A, data.B

    def a_rule(args):
        a2, a1, b = args
        out = {}
        for i in range(1, n):
            pi, pj = data.Psi(i), data.Psi(n - i)
            if pi is None or pj is None:
                continue
            for (b1, a1n), c1 in pj.value((a1, b)).items():
                for (b2, a2n), c2 in pi.value((a2, b1)).items():
                    for r, c3 in A.basis_product(a2n, a1n).items():
                        add_term(out, (b2, r), -c1 * c2 * c3)
        return out

    def b_rule(args):
        a, b1, b2 = args
        out = {}
        for i in range(1, n):
            pi, pj = data.Psi(i), data.Psi(n - i)
            if pi is None or pj is None:
                continue
            for (b1n, an), c1 in pj.value((a, b1)).items():
                for (b2n, ann), c2 in pi.value((an, b2)).items():
                    for r, c3 in B.basis_product(b1n, b2n).items():
                        add_term(out, (r, ann), c1 * c2 * c3)
        return out

    return Cochain(2, 1, a_rule, f"Obs_A,Psi^({n}) (Psi only)"), Cochain(1, 2, b_rule, f"Obs_B,Psi^({n}) (Psi only)")


# ---------------------------------------------------------------- extension

@dataclass
class Extension:
    data: DeformationData
    solution: TotalCochain
    result: SolveResult
    obstruction: ObstructionClass

    @property
    def mu_A(self):
        return self.solution.components.get((2, 0))

    @property
    def Psi(self):
        return self.solution.components.get((1, 1))

    @property
    def mu_B(self):
        return self.solution.components.get((0, 2))


def extend_order(data: DeformationData, n: int, degree_cap: int | None = None, *, shifts=None) -> Extension:
    """Solve ``D(mu_A^(n) + Psi^(n) + mu_B^(n)) = Obs^(n)`` and append the
    solution as the order-``n`` maps.

    The returned solution has all free coordinates set to zero; any other
    solution differs from it by a 2-cocycle.  Raises :class:`NonRemovable`
    when the enumerated system is inconsistent and :class:`Inconclusive`
    when it is inconsistent only because of the caps.
    """
    base = data.truncated(n - 1)
    if base.order != n - 1:
        raise PreconditionError(f"data of order {data.order} cannot be extended to order {n}")
    obs = obstruction(base, n, degree_cap)
    res = solve_coboundary(data.psi, obs.total, degree_cap, shifts)
    if res.status == "inconsistent":
        raise NonRemovable(res)
    if res.status == "inconclusive":
        raise Inconclusive(res)
    sol = res.solution
    new = base.extended(
        sol.components.get((2, 0)), sol.components.get((1, 1)), sol.components.get((0, 2))
    )
    return Extension(new, sol, res, obs)


# ---------------------------------------------------------------- gauge

@dataclass
class GaugePair:
    """``alpha_t = id + sum t^i alpha^(i)`` on A and ``beta_t`` on B; entries
    are cochains of bidegree (1,0) and (0,1), ``None`` meaning zero."""

    alpha: tuple = ()
    beta: tuple = ()
    order: int = field(default=0)

    def __post_init__(self):
        self.order = max(self.order, len(self.alpha), len(self.beta))
        self.alpha = _pad(self.alpha, self.order)
        self.beta = _pad(self.beta, self.order)
        for f in self.alpha:
            if f is not None and (f.m, f.n) != (1, 0):
                raise ValueError("alpha terms must have bidegree (1,0)")
        for f in self.beta:
            if f is not None and (f.m, f.n) != (0, 1):
                raise ValueError("beta terms must have bidegree (0,1)")

    def first_order(self) -> TotalCochain:
        comps = {}
        if self.order >= 1 and self.alpha[0] is not None:
            comps[(1, 0)] = self.alpha[0]
        if self.order >= 1 and self.beta[0] is not None:
            comps[(0, 1)] = self.beta[0]
        return TotalCochain(1, comps)


class _SeriesMap:
    """``id + sum t^i f^(i)`` and its inverse acting on monomials."""

    def __init__(self, terms, n: int):
        self.terms = terms
        self.n = n
        self._fwd: dict = {}
        self._inv: dict = {}

    def forward(self, x) -> dict:
        v = self._fwd.get(x)
        if v is None:
            acc = {x: [1] + [0] * self.n}
            for i, f in enumerate(self.terms, start=1):
                if f is None or i > self.n:
                    continue
                for m, c in f.value((x,)).items():
                    acc.setdefault(m, [0] * (self.n + 1))[i] += c
            v = self._fwd[x] = {m: TSeries(cs) for m, cs in acc.items() if any(cs)}
        return v

    def inverse(self, x) -> dict:
        """``g^(0) = id``, ``g^(i) = -sum_{j=1..i} f^(j) g^(i-j)``."""
        v = self._inv.get(x)
        if v is None:
            gs = [{x: 1}]
            for i in range(1, self.n + 1):
                gi = {}
                for j in range(1, i + 1):
                    f = self.terms[j - 1] if j - 1 < len(self.terms) else None
                    if f is None:
                        continue
                    for m, c in gs[i - j].items():
                        for r, v2 in f.value((m,)).items():
                            add_term(gi, r, -c * v2)
                gs.append(gi)
            acc: dict = {}
            for i, g in enumerate(gs):
                for m, c in g.items():
                    acc.setdefault(m, [0] * (self.n + 1))[i] = c
            v = self._inv[x] = {m: TSeries(cs) for m, cs in acc.items()}
        return v

    def forward_on(self, d: dict) -> dict:
        out = {}
        for m, c in d.items():
            for r, v in self.forward(m).items():
                add_term(out, r, c * v)
        return out


def gauge_transform(data: DeformationData, g: GaugePair) -> DeformationData:
    """Transport ``mu_t``, ``Psi_t`` along ``(alpha_t, beta_t)``:
    ``mu~ = alpha mu (alpha^-1 (x) alpha^-1)`` and
    ``Psi~ = (beta (x) alpha) Psi (alpha^-1 (x) beta^-1)``."""
    if g.order > data.order:
        raise PreconditionError("gauge has higher order than the deformation")
    n = data.order
    A_t, B_t, psi_t = data.deformed(n)
    al = _SeriesMap(g.alpha, n)
    be = _SeriesMap(g.beta, n)
    memo: dict = {}

    def mu_series(alg, sm, key, x, y):
        k = (key, x, y)
        v = memo.get(k)
        if v is None:
            xi, yi = sm.inverse(x), sm.inverse(y)
            v = memo[k] = sm.forward_on(alg.mul(xi, yi))
        return v

    def psi_series(a, b):
        k = ("psi", a, b)
        v = memo.get(k)
        if v is None:
            mid = psi_t.apply(al.inverse(a), be.inverse(b))
            out = {}
            for (bm, am), c in mid.items():
                for rb, cb in be.forward(bm).items():
                    for ra, ca in al.forward(am).items():
                        add_term(out, (rb, ra), c * cb * ca)
            v = memo[k] = out
        return v

    def coefficient(series_fn, i):
        def rule(args):
            return {k: v.coeffs[i] for k, v in series_fn(*args).items() if v.coeffs[i]}

        return rule

    mu_a, psi_s, mu_b = [], [], []
    for i in range(1, n + 1):
        mu_a.append(Cochain(2, 0, coefficient(lambda x, y: mu_series(A_t, al, "A", x, y), i), f"mu~_A^({i})"))
        psi_s.append(Cochain(1, 1, coefficient(psi_series, i), f"Psi~^({i})"))
        mu_b.append(Cochain(0, 2, coefficient(lambda x, y: mu_series(B_t, be, "B", x, y), i), f"mu~_B^({i})"))
    return DeformationData(data.psi, n, mu_a, psi_s, mu_b, f"{data.name}~" if data.name else "gauged")


def first_order_triviality(data: DeformationData, degree_cap: int | None = None) -> GaugePair:
    """Solve ``D(alpha (+) beta) = mu_A^(1) (+) Psi^(1) (+) mu_B^(1)``.

    A solution is a first-order gauge that removes the order-1 part.  Raises
    :class:`NotTrivial` on an inconsistent system and :class:`Inconclusive`
    when caps prevent a decision.
    """
    if data.order < 1:
        raise PreconditionError("need order >= 1")
    res = solve_coboundary(data.psi, data.triple(1), degree_cap)
    if res.status == "inconsistent":
        raise NotTrivial(res)
    if res.status == "inconclusive":
        raise Inconclusive(res)
    sol = res.solution
    return GaugePair((sol.components.get((1, 0)),), (sol.components.get((0, 1)),))


def random_gauge(data: DeformationData, rng, degree_bound: int | None = None, *, order: int = 1, span: int = 2) -> GaugePair:
    """Random finitely supported gauge terms on monomials within the bound,
    mapping each monomial to a combination of monomials of the same degree."""
    A, B = data.A, data.B

    def rand_map(alg, bd):
        monos = alg.monomials(degree_bound if not alg.is_finite else None)
        table = {}
        for x in monos:
            if x == alg.unit:
                continue
            targets = [y for y in monos if alg.degree(y) == alg.degree(x)]
            val = {}
            for y in rng.sample(targets, min(span, len(targets))):
                c = rng.randint(-3, 3)
                if c:
                    val[y] = c
            if val:
                table[(x,)] = val
        return Cochain.from_table(*bd, table, "random")

    alpha = tuple(rand_map(A, (1, 0)) for _ in range(order))
    beta = tuple(rand_map(B, (0, 1)) for _ in range(order))
    return GaugePair(alpha, beta)


__all__ = [
    "DeformationData",
    "Extension",
    "GaugePair",
    "Inconclusive",
    "NonRemovable",
    "NotTrivial",
    "ObstructionClass",
    "PathMismatch",
    "PreconditionError",
    "VerdictMismatch",
    "check_order",
    "deformed_unit",
    "extend_order",
    "first_order_triviality",
    "gauge_transform",
    "infinitesimal_cocycle_check",
    "obstruction",
    "obstruction_by_extraction",
    "obstruction_formulas",
    "obstruction_is_cocycle",
    "psi_only_mixed_terms",
    "random_gauge",
]

