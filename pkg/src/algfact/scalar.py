"""Exact scalars: rationals, rational functions in a formal ``q``, and
truncated power series in the deformation parameter ``t``.

Rationals are :class:`fractions.Fraction`.  Polynomials in ``q`` keep integer
coefficients over a common positive denominator so that the hot paths
(products of ``q``-powers and ``q``-integers) stay in machine-friendly int
arithmetic.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC

Rational = Fraction

__all__ = [
    "Rational",
    "QPoly",
    "QRational",
    "TSeries",
    "parse_rational",
    "t_coefficient",
    "q_integer",
    "q_pochhammer",
    "q_binomial",
    "evaluate_poly",
    "is_zero",
]


_RATIONAL_RE = re.compile(r"^\s*[-+]?\d+(\s*/\s*\d+)?\s*$")


def parse_rational(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"not an exact rational 'p' or 'p/q': {text!r}")
    try:
        return Fraction(text.replace(" ", ""))
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in {text!r}") from None


def is_zero(c) -> bool:
    return not c


class QPoly:
    """Univariate polynomial in ``q`` over the rationals.

    Stored as sorted ``(exponent, int)`` pairs over one positive integer
    denominator, with ``gcd(coefficients, den) == 1``.
    """

    __slots__ = ("terms", "den")

    def __init__(self, terms=(), den=1, _normalized=False):
        if _normalized:
            self.terms = terms
            self.den = den
            return
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        fr = [(int(e), Fraction(c)) for e, c in items]
        lcm = 1
        for _, c in fr:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        acc = {}
        for e, c in fr:
            acc[e] = acc.get(e, 0) + int(c * lcm)
        self.terms, self.den = _normalize(acc, lcm * int(den))

    @classmethod
    def _raw(cls, acc: dict, den: int) -> "QPoly":
        terms, den = _normalize(acc, den)
        return cls(terms, den, _normalized=True)

    @classmethod
    def constant(cls, c) -> "QPoly":
        c = Fraction(c)
        if not c:
            return ZERO_POLY
        return cls(((0, c.numerator),), c.denominator, _normalized=True)

    @classmethod
    def monomial(cls, e: int, c=1) -> "QPoly":
        c = Fraction(c)
        if not c:
            return ZERO_POLY
        return cls(((e, c.numerator),), c.denominator, _normalized=True)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, QPoly):
            return self.terms == other.terms and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == QPoly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.terms, self.den))

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    def coeff(self, e: int) -> Fraction:
        for ee, c in self.terms:
            if ee == e:
                return Fraction(c, self.den)
        return Fraction(0)

    def coefficients(self) -> dict:
        return {e: Fraction(c, self.den) for e, c in self.terms}

    @property
    def leading(self) -> Fraction:
        return Fraction(self.terms[-1][1], self.den)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    def is_one(self) -> bool:
        return self.terms == ((0, 1),) and self.den == 1

    def __neg__(self):
        return QPoly(tuple((e, -c) for e, c in self.terms), self.den, _normalized=True)

    def __add__(self, other: "QPoly") -> "QPoly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        d1, d2 = self.den, other.den
        if d1 == d2:
            acc = dict(self.terms)
            for e, c in other.terms:
                acc[e] = acc.get(e, 0) + c
            return QPoly._raw(acc, d1)
        g = math.gcd(d1, d2)
        s1, s2 = d2 // g, d1 // g
        acc = {e: c * s1 for e, c in self.terms}
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c * s2
        return QPoly._raw(acc, d1 * s1)

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __mul__(self, other: "QPoly") -> "QPoly":
        if not self.terms or not other.terms:
            return ZERO_POLY
        acc = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                acc[e] = acc.get(e, 0) + c1 * c2
        return QPoly._raw(acc, self.den * other.den)

    def scale(self, c) -> "QPoly":
        c = Fraction(c)
        if not c:
            return ZERO_POLY
        acc = {e: v * c.numerator for e, v in self.terms}
        return QPoly._raw(acc, self.den * c.denominator)

    def __pow__(self, k: int) -> "QPoly":
        result = ONE_POLY
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def _dense(self) -> list:
        out = [Fraction(0)] * (self.degree + 1)
        for e, c in self.terms:
            out[e] = Fraction(c, self.den)
        return out

    @classmethod
    def _from_dense(cls, coeffs) -> "QPoly":
        return cls({e: c for e, c in enumerate(coeffs) if c})

    def divmod(self, other: "QPoly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = self._dense()
        d = other._dense()
        dd = len(d) - 1
        lc = d[-1]
        if len(r) - 1 < dd:
            return ZERO_POLY, self
        quot = [Fraction(0)] * (len(r) - dd)
        for i in range(len(r) - 1, dd - 1, -1):
            c = r[i]
            if not c:
                continue
            f = c / lc
            quot[i - dd] = f
            for j in range(dd + 1):
                r[i - dd + j] -= f * d[j]
        return QPoly._from_dense(quot), QPoly._from_dense(r[:dd] if dd else [])

    def monic(self) -> "QPoly":
        lc = self.leading
        return self.scale(1 / lc)

    def __call__(self, x):
        """Evaluate at ``x`` (any ring element supporting ``+``, ``*``)."""
        return evaluate_poly(self, x)

    def __repr__(self):
        return f"QPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            v = Fraction(c, self.den)
            if e == 0:
                mono = ""
            elif e == 1:
                mono = "q"
            else:
                mono = f"q^{e}"
            if mono and abs(v) == 1:
                body = mono
            elif mono:
                body = f"{abs(v)}*{mono}"
            else:
                body = str(abs(v))
            sign = "-" if v < 0 else "+"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def _normalize(acc: dict, den: int):
    items = sorted((e, c) for e, c in acc.items() if c)
    if not items:
        return (), 1
    g = math.gcd(den, *[c for _, c in items])
    if g != 1:
        items = [(e, c // g) for e, c in items]
        den //= g
    return tuple(items), den


ZERO_POLY = QPoly((), 1, _normalized=True)
ONE_POLY = QPoly(((0, 1),), 1, _normalized=True)


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    while b:
        _, r = a.divmod(b)
        a, b = b, r
    if not a:
        return ZERO_POLY
    return a.monic()


def evaluate_poly(p: QPoly, x):
    if not p.terms:
        return 0
    result = 0
    prev = 0
    power = 1
    for e, c in p.terms:
        for _ in range(e - prev):
            power = power * x
        prev = e
        result = result + power * c
    if p.den != 1:
        result = result * Fraction(1, p.den)
    return result


class QRational:
    """Element of the rational function field Q(q), kept reduced with a monic
    denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized=False):
        if not isinstance(num, QPoly):
            num = QPoly.constant(num)
        if den is None:
            den = ONE_POLY
        elif not isinstance(den, QPoly):
            den = QPoly.constant(den)
        if _normalized:
            self.num, self.den = num, den
            return
        if not den:
            raise ZeroDivisionError("QRational with zero denominator")
        if not num:
            self.num, self.den = ZERO_POLY, ONE_POLY
            return
        if den.is_constant():
            self.num = num.scale(1 / den.leading)
            self.den = ONE_POLY
            return
        g = poly_gcd(num, den)
        if not g.is_one():
            num, _ = num.divmod(g)
            den, _ = den.divmod(g)
        lc = den.leading
        self.num = num.scale(1 / lc)
        self.den = den.scale(1 / lc)

    @classmethod
    def q(cls) -> "QRational":
        return cls(QPoly.monomial(1), ONE_POLY, _normalized=True)

    @classmethod
    def from_poly(cls, p: QPoly) -> "QRational":
        return cls(p, ONE_POLY, _normalized=True)

    @property
    def numerator(self) -> QPoly:
        return self.num

    @property
    def denominator(self) -> QPoly:
        return self.den

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    @staticmethod
    def _coerce(other):
        if isinstance(other, QRational):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, _RationalABC):
            return QRational(QPoly.constant(other), ONE_POLY, _normalized=True)
        return None

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den.is_one() and self.num.is_constant():
            return hash(self.num.coeff(0))
        return hash((self.num, self.den))

    def __neg__(self):
        return QRational(-self.num, self.den, _normalized=True)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return QRational(self.num + o.num, ONE_POLY, _normalized=True)
        if self.den == o.den:
            return QRational(self.num + o.num, self.den)
        return QRational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return QRational(ZERO_POLY, ONE_POLY, _normalized=True)
            return QRational(self.num.scale(other), self.den, _normalized=True)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den.is_one() and o.den.is_one():
            return QRational(self.num * o.num, ONE_POLY, _normalized=True)
        return QRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("QRational division by zero")
        return QRational(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return QRational(ONE_POLY) / (self ** (-k))
        return QRational(self.num ** k, self.den ** k, _normalized=True)

    def specialize(self, value):
        """Substitute an exact value for ``q``."""
        d = evaluate_poly(self.den, value)
        if not d:
            raise ZeroDivisionError(f"denominator vanishes at q={value}")
        n = evaluate_poly(self.num, value)
        if isinstance(n, int) and isinstance(d, int):
            return Fraction(n, d)
        return n / d

    def __call__(self, value):
        return self.specialize(value)

    def __repr__(self):
        return f"QRational({self})"

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num}) / ({self.den})"


class TSeries:
    """Element of ``base[[t]]/(t^(N+1))``.

    Mixed-order arithmetic truncates to the smaller order; plain scalars are
    promoted to constant series.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, order: int | None = None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        if len(coeffs) > order + 1:
            coeffs = coeffs[: order + 1]
        coeffs.extend([0] * (order + 1 - len(coeffs)))
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, c, order: int) -> "TSeries":
        return cls([c], order)

    @classmethod
    def monomial(cls, c, power: int, order: int) -> "TSeries":
        if power > order:
            return cls([], order)
        return cls([0] * power + [c], order)

    @classmethod
    def t(cls, order: int) -> "TSeries":
        return cls.monomial(1, 1, order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, n: int):
        if not 0 <= n <= self.order:
            raise IndexError(f"t^{n} is outside truncation order {self.order}")
        return self.coeffs[n]

    def _coerce(self, other):
        if isinstance(other, TSeries):
            return other
        if isinstance(other, (int, Fraction, QRational)):
            return TSeries([other], self.order)
        return None

    def __bool__(self):
        return any(bool(c) for c in self.coeffs)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return all(self.coeffs[i] == o.coeffs[i] for i in range(n + 1))

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return TSeries([-c for c in self.coeffs])

    def __pos__(self):
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        a, b = self.coeffs, o.coeffs
        return TSeries([a[i] + b[i] for i in range(n + 1)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QRational)):
            if not other:
                return TSeries([], self.order)
            return TSeries([c * other if c else 0 for c in self.coeffs])
        if not isinstance(other, TSeries):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [0] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(n + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] = out[i + j] + ai * bj
        return TSeries(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self) -> "TSeries":
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        n = self.order
        inv0 = 1 / c0 if isinstance(c0, QRational) else Fraction(1) / c0
        out = [inv0]
        for k in range(1, n + 1):
            s = 0
            for j in range(1, k + 1):
                if self.coeffs[j]:
                    s = s + self.coeffs[j] * out[k - j]
            out.append(-s * inv0 if s else 0)
        return TSeries(out)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return (self ** (-k)).inverse()
        result = TSeries([1], self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def truncate(self, order: int) -> "TSeries":
        return TSeries(self.coeffs[: order + 1], order)

    def __repr__(self):
        return f"TSeries({list(self.coeffs)!r})"

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            cs = str(c)
            if isinstance(c, QRational) and not c.num.is_constant():
                cs = f"({cs})"
            parts.append(cs if not mono else f"{cs}*{mono}")
        body = " + ".join(parts) if parts else "0"
        return f"{body} + O(t^{self.order + 1})"


def t_coefficient(x: TSeries, n: int):
    if not isinstance(x, TSeries):
        raise TypeError("t_coefficient expects a TSeries")
    return x.coefficient(n)


# q-combinatorics.  With ``q=None`` the result is a QRational in the formal q;
# otherwise the identity is evaluated in the ring of the supplied value.

@lru_cache(maxsize=None)
def _q_integer_poly(k: int) -> QPoly:
    return QPoly({e: 1 for e in range(k)})


@lru_cache(maxsize=None)
def _q_pochhammer_poly(i: int) -> QPoly:
    p = ONE_POLY
    for j in range(1, i + 1):
        p = p * QPoly({0: 1, j: -1})
    return p


@lru_cache(maxsize=None)
def _q_binomial_poly(k: int, i: int) -> QPoly:
    quot, rem = _q_pochhammer_poly(k).divmod(
        _q_pochhammer_poly(i) * _q_pochhammer_poly(k - i)
    )
    assert not rem
    return quot


def q_integer(k: int, q=None):
    """``[k] = 1 + q + ... + q^(k-1)``; ``[0] = 0``."""
    if k < 0:
        raise ValueError("q_integer needs k >= 0")
    p = _q_integer_poly(k)
    return QRational.from_poly(p) if q is None else evaluate_poly(p, q)


def q_pochhammer(i: int, q=None):
    """``(q;q)_i = (1-q)(1-q^2)...(1-q^i)``, with ``(q;q)_{-1} = (q;q)_0 = 1``."""
    if i < -1:
        raise ValueError("q_pochhammer needs i >= -1")
    p = _q_pochhammer_poly(max(i, 0))
    return QRational.from_poly(p) if q is None else evaluate_poly(p, q)


def q_binomial(k: int, i: int, q=None):
    """Gaussian binomial coefficient, always a polynomial in ``q``.

    The quotient is taken in Q[q] before any specialisation, so ``q`` may be a
    value at which the Pochhammer symbols vanish (e.g. a series ``1 + O(t)``).
    """
    if k < 0 or i < 0 or i > k:
        raise ValueError(f"q_binomial({k}, {i}) needs 0 <= i <= k")
    p = _q_binomial_poly(k, i)
    return QRational.from_poly(p) if q is None else evaluate_poly(p, q)
