import random

import pytest

from algfact.algebra import basis_tuples, complex_numbers, family_commutative_poly, family_q_plane
from algfact.corpus import all_factorisations, heisenberg_extension, quantum_plane_twist, quaternion_twist
from algfact.scalar import QRational
from algfact.twist import (
    AmbiguousExtension,
    check_axioms,
    extend_from_generators,
    flip,
    twist_chain_left,
    twist_chain_right,
    x_multiply,
)

q = QRational.q()


@pytest.mark.parametrize("name,psi", all_factorisations())
def test_corpus_twists_satisfy_axioms(name, psi):
    rep = check_axioms(psi, None if psi.A.is_finite else 4)
    assert rep.ok, rep.witness


def test_quaternion_products():
    psi = quaternion_twist()
    one, i = (0,), (1,)
    # (1 (x) i)(j (x) 1) = -j (x) i
    assert x_multiply(psi, {(one, i): 1}, {(i, one): 1}).terms == {(i, i): -1}
    # (j (x) 1)(1 (x) i) = j (x) i
    assert psi.xmul({(i, one): 1}, {(one, i): 1}) == {(i, i): 1}


def test_corrupted_rule_is_caught():
    A, B = complex_numbers("i"), complex_numbers("j")
    with pytest.raises(AmbiguousExtension) as exc:
        extend_from_generators(A, B, {("i", "j"): {((1,), (1,)): 2}})
    assert exc.value.report.witness is not None


def test_missing_generator_rule():
    A, B = family_commutative_poly(["p"]), family_commutative_poly(["x", "y"])
    with pytest.raises(ValueError):
        extend_from_generators(A, B, {("p", "x"): {((1, 0), (1,)): 1}})


def test_q_twist_from_generators_matches_closed_rule():
    A = family_q_plane()
    B = family_commutative_poly(["b"])
    ext = extend_from_generators(A, B, {
        ("a", "b"): {((1,), (1, 0)): 1},
        ("abar", "b"): {((1,), (0, 1)): q},
    }, verify_degree=4)
    closed = quantum_plane_twist()
    for a, b in basis_tuples([A, B], 6):
        assert ext(a, b) == closed(a, b)


def test_heisenberg_extension_values():
    ext = heisenberg_extension(3)
    v = ext((2,), (1,))
    # p^2 x = x p^2 + 2t p
    assert {k: s.coeffs for k, s in v.items()} == {((1,), (2,)): (1, 0, 0, 0), ((0,), (1,)): (0, 2, 0, 0)}


def test_chain_of_length_one_is_psi():
    for _, psi in all_factorisations():
        A, B = psi.A, psi.B
        for a, b in basis_tuples([A, B], None if A.is_finite else 3):
            assert psi.chain_left((a,), b) == psi(a, b)
            assert psi.chain_right(a, (b,)) == psi(a, b)


def _peel_left(psi, a_args, b):
    """``(Psi (x) id)(id (x) chain(n-1))`` computed by hand."""
    first, rest = a_args[0], a_args[1:]
    out = {}
    for key, c in psi.chain_left(rest, b).items():
        bn, tail = key[0], key[1:]
        for (b2, a2), c2 in psi(first, bn).items():
            k = (b2, a2) + tail
            out[k] = out.get(k, 0) + c * c2
    return {k: v for k, v in out.items() if v}


def _peel_right(psi, a, b_args):
    head, rest = b_args[0], b_args[1:]
    out = {}
    for (b1, a1), c in psi(a, head).items():
        for key, c2 in psi.chain_right(a1, rest).items():
            k = (b1,) + key
            out[k] = out.get(k, 0) + c * c2
    return {k: v for k, v in out.items() if v}


@pytest.mark.parametrize("name,psi", all_factorisations())
def test_chains_peel_recursively(name, psi):
    rng = random.Random(7)
    A, B = psi.A, psi.B
    cap = None if A.is_finite else 2
    amonos, bmonos = A.monomials(cap), B.monomials(cap)
    for _ in range(40):
        n = rng.randint(2, 3)
        a_args = tuple(rng.choice(amonos) for _ in range(n))
        b_args = tuple(rng.choice(bmonos) for _ in range(n))
        b, a = rng.choice(bmonos), rng.choice(amonos)
        assert twist_chain_left(psi, a_args + (b,)).terms == _peel_left(psi, a_args, b)
        assert twist_chain_right(psi, (a,) + b_args).terms == _peel_right(psi, a, b_args)


@pytest.mark.parametrize("name,psi", all_factorisations())
def test_x_is_associative(name, psi):
    rng = random.Random(3)
    A, B = psi.A, psi.B
    cap = None if A.is_finite else 2
    keys = [(b, a) for b in B.monomials(cap) for a in A.monomials(cap)]
    for _ in range(30):
        x, y, z = ({rng.choice(keys): rng.randint(1, 3)} for _ in range(3))
        assert psi.xmul(psi.xmul(x, y), z) == psi.xmul(x, psi.xmul(y, z))


def test_flip_is_a_twist():
    A, B = family_commutative_poly(["a"]), family_commutative_poly(["b"])
    assert check_axioms(flip(A, B), 5).ok
