from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algfact.algebra import basis_tuples
from algfact.corpus import ENTRIES
from algfact.scalar import QPoly, QRational, TSeries
from algfact.serialize import (
    InputError,
    decode_scalar,
    encode_scalar,
    export_entry,
    load_document,
    validate,
)


@settings(max_examples=60, deadline=None)
@given(st.fractions(max_denominator=30))
def test_rational_round_trip(x):
    s = encode_scalar(x)
    assert isinstance(s, str)
    assert decode_scalar(s) == x


@settings(max_examples=40, deadline=None)
@given(
    st.dictionaries(st.integers(0, 4), st.integers(-4, 4), max_size=4),
    st.dictionaries(st.integers(0, 3), st.integers(-4, 4), min_size=1, max_size=3),
)
def test_qrational_round_trip(num, den):
    d = QPoly(den)
    if not d:
        return
    x = QRational(QPoly(num), d)
    assert decode_scalar(encode_scalar(x)) == x


def test_series_round_trip():
    s = TSeries([1, Fraction(-1, 2), 0], 2)
    assert decode_scalar(encode_scalar(s)) == s


def test_scalars_are_never_floats():
    with pytest.raises(TypeError):
        encode_scalar(0.5)
    with pytest.raises(InputError):
        decode_scalar(0.5)


def test_schema_rejects_unknown_fields():
    with pytest.raises(InputError):
        validate({"corpus": "example_3_4", "extra": 1})
    with pytest.raises(InputError):
        validate({"corpus": "example_3_4", "algebras": {}})
    with pytest.raises(InputError):
        validate({"algebras": {"A": {"family": "commutative_poly", "generators": ["p"]}}})


def test_unknown_corpus_entry():
    with pytest.raises(InputError):
        load_document({"corpus": "nope"})


def test_zero_denominator_is_an_input_error():
    with pytest.raises(InputError):
        load_document({"corpus": "example_3_3", "corpus_params": {"c": "1/0"}})


@pytest.mark.parametrize("entry_id", sorted(ENTRIES))
def test_export_round_trip(entry_id):
    entry = ENTRIES[entry_id]
    doc = export_entry(entry_id, 3)
    psi, data, _ = load_document(doc)
    psi0, data0 = entry()
    cap = None if psi.A.is_finite else 3
    for a, b in basis_tuples([psi.A, psi.B], cap):
        assert psi(a, b) == psi0(a, b)
    for i in range(1, data0.order + 1):
        t, t0 = data.triple(i), data0.triple(i)
        for bd in t0.bidegrees():
            for args in data.complex.tuples(bd.m, bd.n, cap):
                assert t[bd].value(args) == t0[bd].value(args)


def test_q_override_on_explicit_document():
    doc = export_entry("example_3_4", 2)
    psi, _, _ = load_document(doc, q_override="2")
    assert psi.A.basis_product((0, 1), (1, 0)) == {(1, 1): 2}


def test_q_override_specialises_every_scalar():
    doc = export_entry("example_3_4", 2)
    psi, data, _ = load_document(doc, q_override="2")
    assert psi((0, 1), (1,)) == {((1,), (0, 1)): 2}
    assert data.Psi(2).value(((2, 0), (1,))) == {((3,), (0, 2)): 3}
    with pytest.raises(InputError):
        load_document(export_entry("example_3_4", 2, q=Fraction(2)), q_override="formal")
