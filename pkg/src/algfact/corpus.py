"""Worked factorisations and their deformations, with the values they are
expected to reproduce.

Every entry builds ``(psi, data)``: the base twist and a
:class:`~algfact.deformation.DeformationData`.  Expected values carry a
``source`` label: ``"published"`` for values quoted with the example,
``"derived"`` for values computed independently here, ``"trivial"`` for
values that follow by inspection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable

from .algebra import complex_numbers, family_commutative_poly, family_q_plane
from .complex import Cochain
from .deformation import DeformationData
from .lincomb import add_term
from .scalar import QRational, TSeries, q_binomial, q_integer, q_pochhammer
from .twist import TwistMap, extend_from_generators, flip

DEFAULT_DEGREE_CAP = 6


@dataclass(frozen=True)
class Expectation:
    name: str
    value: object
    source: str  # "published" | "derived" | "trivial"


@dataclass
class CorpusEntry:
    id: str
    description: str
    build: Callable
    defaults: dict
    expectations: list = field(default_factory=list)
    degree_cap: int | None = DEFAULT_DEGREE_CAP

    def __call__(self, **params):
        kw = dict(self.defaults)
        kw.update(params)
        return self.build(**kw)


# ---------------------------------------------------------------- example: commutative plane

def commutative_plane():
    """``A = k[a, abar]`` (commuting), ``B = k[b]``, flip twist."""
    A = family_commutative_poly(["a", "abar"], "k[a,abar]")
    B = family_commutative_poly(["b"], "k[b]")
    return flip(A, B)


def plane_mu1(args):
    (k, l), (r, s) = args
    c = l * r
    return {(k + r, l + s): c} if c else {}


def plane_psi1(args):
    (k, l), (r,) = args
    out = {}
    add_term(out, ((r,), (k, l)), l * r)
    if k:
        add_term(out, ((r + 1,), (k - 1, l + 1)), -k * r)
    return out


def plane_mu2(c):
    c = Fraction(c)

    def rule(args):
        (k, l), (m, n) = args
        v = l * m * (c + Fraction(l * m, 2))
        return {(k + m, l + n): v} if v else {}

    return rule


def plane_psi2(c, last_sign: int = 1):
    """Second-order twist of the commutative plane; ``last_sign`` is the sign
    put in front of the ``b^(r+2)`` term, which is printed without one."""
    c = Fraction(c)

    def rule(args):
        (k, l), (r,) = args
        out = {}
        add_term(out, ((r,), (k, l)), l * r * (c + Fraction(l * r, 2)))
        if k >= 1:
            add_term(out, ((r + 1,), (k - 1, l + 1)), -k * r * (Fraction(k + r - 1, 2) + l * r + c))
        if k >= 2:
            add_term(out, ((r + 2,), (k - 2, l + 2)), last_sign * Fraction(k * (k - 1) * r * (r + 1), 2))
        return out

    return rule


def plane_printed_obstruction():
    """The three nonzero order-2 obstruction components as quoted.

    Argument names follow the quoted display: ``a^k abar^l, a^m abar^n,
    a^p abar^r`` for the A-part and ``b^r``/``b^s`` on the B side.
    """

    def obs_A(args):
        (k, l), (m, n), (p, r) = args
        v = l * p * (l * m - n * p)
        return {(k + m + p, l + n + r): v} if v else {}

    def obs_A_psi(args):
        (k, l), (m, n), (r,) = args
        out = {}
        if k + m >= 1:
            add_term(out, ((r + 1,), (k + m - 1, l + n + 1)), r * ((l * m + k * n) * r + k * m))
        add_term(out, ((r,), (k + m, l + n)), -l * n * r * r)
        if k + m >= 2:
            add_term(out, ((r + 2,), (k + m - 2, l + n + 2)), -k * m * r * (r + 1))
        return out

    def obs_B_psi(args):
        (k, l), (r,), (s,) = args
        out = {}
        add_term(out, ((r + s,), (k, l)), l * l * r * s)
        if k >= 1:
            add_term(out, ((r + s + 1,), (k - 1, l + 1)), -(2 * l + 1) * k * r * s)
        if k >= 2:
            add_term(out, ((r + s + 2,), (k - 2, l + 2)), (k - 1) * k * r * s)
        return out

    return (
        Cochain(3, 0, obs_A, "printed Obs_A^(2)"),
        Cochain(2, 1, obs_A_psi, "printed Obs_A,Psi^(2)"),
        Cochain(1, 2, obs_B_psi, "printed Obs_B,Psi^(2)"),
    )


def plane_q(c, order: int) -> TSeries:
    """``q = 1 + t + (c + 1/2) t^2`` as a truncated series."""
    return TSeries([1, 1, Fraction(c) + Fraction(1, 2)], order)


def _binom_shifted(r: int, i: int, q):
    """``binom(r+i-1, i)_q`` with the ``r = 0`` convention ``1`` for ``i = 0``
    and ``0`` otherwise."""
    if r == 0:
        return 1 if i == 0 else 0
    return q_binomial(r + i - 1, i, q)


def plane_closed_form(c, order: int):
    """``mu_t = q^(lr)`` and the q-binomial ``Psi_t`` as series-valued rules."""
    q = plane_q(c, order)
    powers: dict = {}

    def qpow(e):
        v = powers.get(e)
        if v is None:
            v = powers[e] = q ** e
        return v

    def mu_t(args):
        (k, l), (r, s) = args
        return {(k + r, l + s): qpow(l * r)}

    def psi_t(args):
        (k, l), (r,) = args
        out = {}
        for i in range(k + 1):
            coeff = _binom_shifted(r, i, q)
            if not coeff:
                continue
            coeff = qpow(l * r) * q_binomial(k, i, q) * coeff * q_pochhammer(i, q)
            add_term(out, ((r + i,), (k - i, l + i)), coeff)
        return out

    return mu_t, psi_t


def _coefficient_cochain(m, n, series_rule, i, name):
    memo: dict = {}

    def rule(args):
        v = memo.get(args)
        if v is None:
            v = memo[args] = series_rule(args)
        out = {}
        for k, s in v.items():
            c = s.coeffs[i] if isinstance(s, TSeries) else (s if i == 0 else 0)
            if c:
                out[k] = c
        return out

    return Cochain(m, n, rule, name)


def example_3_3(c=0, N: int = 2, mode: str = "printed", psi2_sign: int = 1):
    """Commutative plane with a twist that becomes ``ab = ba + (1-q) b^2 abar``.

    ``mode="printed"``: the explicit first- and second-order maps (``N <= 2``).
    ``mode="closed"``: coefficients of the closed form with
    ``q = 1 + t + (c + 1/2) t^2``, any ``N``.
    """
    psi = commutative_plane()
    if mode == "printed":
        if N > 2:
            raise ValueError("printed data only goes to order 2; use mode='closed'")
        mu_a = [Cochain(2, 0, plane_mu1, "mu_A^(1)")]
        ps = [Cochain(1, 1, plane_psi1, "Psi^(1)")]
        if N >= 2:
            mu_a.append(Cochain(2, 0, plane_mu2(c), "mu_A^(2)"))
            ps.append(Cochain(1, 1, plane_psi2(c, psi2_sign), "Psi^(2)"))
        data = DeformationData(psi, N, mu_a[:N], ps[:N], (), f"example_3_3(c={c})")
        return psi, data
    if mode != "closed":
        raise ValueError(f"unknown mode {mode!r}")
    mu_t, psi_t = plane_closed_form(c, N)
    mu_a = [_coefficient_cochain(2, 0, mu_t, i, f"mu_A^({i})") for i in range(1, N + 1)]
    ps = [_coefficient_cochain(1, 1, psi_t, i, f"Psi^({i})") for i in range(1, N + 1)]
    return psi, DeformationData(psi, N, mu_a, ps, (), f"example_3_3_closed(c={c})")


# ---------------------------------------------------------------- example: quantum plane

def quantum_plane_twist(q=None) -> TwistMap:
    """Quantum plane ``A``, ``B = k[b]``, ``Psi(a^k abar^l, b^r) = q^(lr) b^r, a^k abar^l``."""
    A = family_q_plane(q)
    B = family_commutative_poly(["b"], "k[b]")
    qv = QRational.q() if q is None else q

    def rule(a, b):
        (k, l), (r,) = a, b
        return {(b, a): qv ** (l * r) if l * r else 1}

    return TwistMap(A, B, rule, "q-twist")


def qplane_psi(i: int, q=None):
    """``q^(lr) [k][k-1]...[k-i+1] binom(r+i-1, i)_q`` on ``b^(r+i), a^(k-i) abar^(l+i)``."""
    qv = QRational.q() if q is None else q

    def rule(args):
        (k, l), (r,) = args
        if i > k or r == 0:
            return {}
        coeff = qv ** (l * r) if l * r else 1
        for j in range(i):
            coeff = coeff * q_integer(k - j, q)
        coeff = coeff * q_binomial(r + i - 1, i, q)
        return {((r + i,), (k - i, l + i)): coeff} if coeff else {}

    return rule


def example_3_4(N: int = 4, q=None, truncate_after: int | None = None):
    """Quantum plane with ``ab = ba + t b^2 abar``; only the twist is deformed.

    ``q=None`` keeps ``q`` formal; ``truncate_after=m`` zeroes every
    ``Psi^(i)`` with ``i > m`` (used for deliberately incomplete data).
    """
    psi = quantum_plane_twist(q)
    top = N if truncate_after is None else min(N, truncate_after)
    ps = [Cochain(1, 1, qplane_psi(i, q), f"Psi^({i})") for i in range(1, top + 1)]
    name = "example_3_4" + ("" if q is None else f"(q={q})")
    return psi, DeformationData(psi, N, (), ps, (), name)


# ---------------------------------------------------------------- example: quaternions

def quaternion_twist() -> TwistMap:
    """``A = Q[i]/(i^2+1)``, ``B = Q[j]/(j^2+1)``, ``Psi(i, j) = -j, i``."""
    A = complex_numbers("i", "C_i")
    B = complex_numbers("j", "C_j")
    return extend_from_generators(A, B, {("i", "j"): {((1,), (1,)): -1}}, name="quaternion")


def quaternion_generator() -> Cochain:
    """``Psi^(1)(i, j) = 1, 1`` and zero on the other basis pairs."""
    return Cochain.from_table(1, 1, {((1,), (1,)): {((0,), (0,)): 1}}, "Psi^(1)")


def example_3_5(N: int = 4):
    """Quaternions with ``ij + ji = t``: ``Psi_t(i, j) = -j, i + t 1, 1``."""
    psi = quaternion_twist()
    return psi, DeformationData(psi, N, (), [quaternion_generator()], (), "example_3_5")


# ---------------------------------------------------------------- Heisenberg

def heisenberg_closed(i: int):
    """``Psi^(i)(p^m, x^n) = i! C(m,i) C(n,i) x^(n-i), p^(m-i)``."""

    def rule(args):
        (m,), (n,) = args
        if i > m or i > n:
            return {}
        return {((n - i,), (m - i,)): factorial(i) * comb(m, i) * comb(n, i)}

    return rule


def heisenberg_extension(N: int, verify_degree: int | None = 4) -> TwistMap:
    """``Psi_t`` extended from ``Psi_t(p, x) = x, p + t 1, 1`` with series
    coefficients of order ``N``."""
    A = family_commutative_poly(["p"], "k[p]")
    B = family_commutative_poly(["x"], "k[x]")
    rule = {("p", "x"): {((1,), (1,)): TSeries([1], N), ((0,), (0,)): TSeries.monomial(1, 1, N)}}
    return extend_from_generators(A, B, rule, verify_degree=verify_degree, name="heisenberg_t")


def heisenberg(N: int = 3, via: str = "closed"):
    """Weyl/Heisenberg algebra ``px = xp + t`` as a deformation of ``k[x] (x) k[p]``."""
    A = family_commutative_poly(["p"], "k[p]")
    B = family_commutative_poly(["x"], "k[x]")
    psi = flip(A, B)
    if via == "closed":
        ps = [Cochain(1, 1, heisenberg_closed(i), f"Psi^({i})") for i in range(1, N + 1)]
    elif via == "extension":
        ext = heisenberg_extension(N, verify_degree=None)
        ps = [
            _coefficient_cochain(1, 1, lambda args, e=ext: e(*args), i, f"Psi^({i})")
            for i in range(1, N + 1)
        ]
    else:
        raise ValueError(f"unknown construction {via!r}")
    return psi, DeformationData(psi, N, (), ps, (), "heisenberg")


# ---------------------------------------------------------------- registry

ENTRIES = {
    "example_3_3": CorpusEntry(
        "example_3_3",
        "k[a,abar] with k[b]: flip twist deformed to ab = ba + (1-q) b^2 abar",
        example_3_3,
        {"c": 0, "N": 2, "mode": "printed"},
        [
            Expectation("Psi^(1)(a, b)", {((2,), (0, 1)): -1}, "published"),
            Expectation("mu_A^(1)(a^k, a^r abar^s)", 0, "trivial"),
            Expectation("order-1 cocycle up to degree 5", True, "published"),
            Expectation("Obs^(2) matches quoted displays up to degree 4", True, "published"),
            Expectation("sign before the b^(r+2) term of Psi^(2)", "+", "derived"),
            Expectation("closed form valid at n=3 for c in {0, 1, -1/2}", True, "published"),
        ],
    ),
    "example_3_4": CorpusEntry(
        "example_3_4",
        "quantum plane with k[b]: q-twist deformed to ab = ba + t b^2 abar",
        example_3_4,
        {"N": 4, "q": None},
        [
            Expectation("Psi^(1)(a, b)", {((2,), (0, 1)): 1}, "published"),
            Expectation("Psi^(i)(a^k abar^l, b^r) = 0 for i > k", True, "trivial"),
            Expectation("check_order at n=4 up to degree 6", True, "published"),
            Expectation("first-order triviality up to degree 4", "NotTrivial", "derived"),
        ],
    ),
    "example_3_5": CorpusEntry(
        "example_3_5",
        "quaternions H = X(C, C) with ij + ji = t",
        example_3_5,
        {"N": 4},
        [
            Expectation("dim H^2", 1, "published"),
            Expectation("(1, i)(j, 1)", {((1,), (1,)): -1}, "published"),
            Expectation("check_order at n=4", True, "derived"),
            Expectation("first-order triviality of the generator", "NotTrivial", "published"),
        ],
        degree_cap=None,
    ),
    "heisenberg": CorpusEntry(
        "heisenberg",
        "k[p] with k[x]: flip twist deformed to px = xp + t",
        heisenberg,
        {"N": 3, "via": "closed"},
        [
            Expectation("Psi^(1)(p, x)", {((0,), (0,)): 1}, "published"),
            Expectation("Psi^(2)(p, x)", {}, "trivial"),
            Expectation("Psi^(1)(p^2, x)", {((0,), (1,)): 2}, "derived"),
            Expectation("closed form equals extension for m, n <= 5", True, "derived"),
        ],
    ),
}


def get(entry_id: str) -> CorpusEntry:
    try:
        return ENTRIES[entry_id]
    except KeyError:
        raise KeyError(f"unknown corpus entry {entry_id!r}; known: {sorted(ENTRIES)}") from None


def all_factorisations():
    """One representative ``(id, psi)`` per corpus factorisation."""
    return [
        ("example_3_3", commutative_plane()),
        ("example_3_4", quantum_plane_twist()),
        ("example_3_5", quaternion_twist()),
        ("heisenberg", heisenberg()[0]),
    ]
