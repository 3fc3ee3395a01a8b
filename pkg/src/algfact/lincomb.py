"""Sparse linear combinations.

Internally every element is a plain ``dict`` mapping a basis key to a nonzero
coefficient; :class:`LinearCombination` wraps one for the public API.
"""

from __future__ import annotations

from collections.abc import Mapping


def add_term(d: dict, key, c) -> None:
    if not c:
        return
    v = d.get(key)
    if v is None:
        d[key] = c
        return
    v = v + c
    if v:
        d[key] = v
    else:
        del d[key]


def add_scaled(d: dict, other: Mapping, s=1) -> None:
    if s == 1:
        for k, c in other.items():
            add_term(d, k, c)
    else:
        for k, c in other.items():
            add_term(d, k, c * s)


def scaled(other: Mapping, s) -> dict:
    out = {}
    add_scaled(out, other, s)
    return out


def difference(x: Mapping, y: Mapping) -> dict:
    out = dict(x)
    add_scaled(out, y, -1)
    return out


def _key_degree(key) -> int:
    if key and isinstance(key[0], tuple):
        return sum(sum(m) for m in key)
    return sum(key)


def sort_key(key):
    """Canonical order: total degree, then lexicographic."""
    return (_key_degree(key), key)


class LinearCombination(Mapping):
    """Immutable finite linear combination of basis keys."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        d = {}
        if terms:
            for k, c in terms.items():
                add_term(d, k, c)
        self._terms = d

    def _new(self, terms):
        out = object.__new__(type(self))
        out._terms = terms
        self._copy_extra(out)
        return out

    def _copy_extra(self, out) -> None:
        pass

    def __getitem__(self, key):
        return self._terms[key]

    def get(self, key, default=0):
        return self._terms.get(key, default)

    def __iter__(self):
        return iter(sorted(self._terms, key=sort_key))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return difference(self._terms, other) == {}
        if other == 0:
            return not self._terms
        return NotImplemented

    __hash__ = None

    def __add__(self, other: Mapping):
        d = dict(self._terms)
        add_scaled(d, other)
        return self._new(d)

    def __sub__(self, other: Mapping):
        d = dict(self._terms)
        add_scaled(d, other, -1)
        return self._new(d)

    def __neg__(self):
        return self._new(scaled(self._terms, -1))

    def __mul__(self, s):
        if isinstance(s, Mapping):
            return NotImplemented
        return self._new(scaled(self._terms, s))

    def __rmul__(self, s):
        return self.__mul__(s)

    def __repr__(self):
        body = " + ".join(f"({self._terms[k]})*{k}" for k in self) or "0"
        return f"{type(self).__name__}({body})"


class AlgElement(LinearCombination):
    """Element of a based algebra: monomial index -> coefficient."""

    __slots__ = ()


class TensorElement(LinearCombination):
    """Element of a tensor product such as ``B (x) A``; keys are tuples of
    monomial indices matching ``signature``."""

    __slots__ = ("signature",)

    def __init__(self, terms: Mapping | None = None, signature=("B", "A")):
        super().__init__(terms)
        self.signature = tuple(signature)
        for k in self._terms:
            if len(k) != len(self.signature):
                raise ValueError(f"key {k} does not match signature {self.signature}")

    def _copy_extra(self, out) -> None:
        out.signature = self.signature
