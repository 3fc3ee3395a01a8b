import random

import pytest

from _sampling import BIDEGREES, evaluation_tuples, random_delta
from algfact.complex import Cochain, CochainComplex, TotalCochain
from algfact.corpus import all_factorisations, quaternion_twist
from algfact.lincomb import add_scaled


def _hochschild(alg, f, args):
    """Textbook Hochschild coboundary of an A-valued cochain, written out for
    one and two arguments."""
    mul = alg.mul
    if len(args) == 2:
        a2, a1 = args
        out = mul({a2: 1}, f.value((a1,)))
        add_scaled(out, f.evaluate([alg.basis_product(a2, a1)]), -1)
        add_scaled(out, mul(f.value((a2,)), {a1: 1}), 1)
        return out
    a3, a2, a1 = args
    out = mul({a3: 1}, f.value((a2, a1)))
    add_scaled(out, f.evaluate([alg.basis_product(a3, a2), {a1: 1}]), -1)
    add_scaled(out, f.evaluate([{a3: 1}, alg.basis_product(a2, a1)]), 1)
    add_scaled(out, mul(f.value((a3, a2)), {a1: 1}), -1)
    return out


def _x(psi, b=None, a=None):
    return {(b if b is not None else psi.B.unit, a if a is not None else psi.A.unit): 1}


def _mixed_d_A(cx, f, args):
    """``d_A f(a2, a1, b)`` for ``f`` of bidegree (1,1), via products in X."""
    psi = cx.psi
    a2, a1, b = args
    out = psi.xmul(_x(psi, a=a2), f.value((a1, b)))
    add_scaled(out, f.evaluate([psi.A.basis_product(a2, a1), {b: 1}]), -1)
    for (bn, an), c in psi(a1, b).items():
        add_scaled(out, psi.xmul(f.value((a2, bn)), _x(psi, a=an)), c)
    return out


def _mixed_d_B(cx, f, args):
    """``d_B f(a, b1, b2)`` for ``f`` of bidegree (1,1), via products in X."""
    psi = cx.psi
    a, b1, b2 = args
    out = {}
    for (bn, an), c in psi(a, b1).items():
        add_scaled(out, psi.xmul(_x(psi, b=bn), f.value((an, b2))), c)
    add_scaled(out, f.evaluate([{a: 1}, psi.B.basis_product(b1, b2)]), -1)
    add_scaled(out, psi.xmul(f.value((a, b1)), _x(psi, b=b2)), 1)
    return out


def _random_dense(cx, m, n, rng, cap):
    table = {}
    target = cx.A if n == 0 else cx.B if m == 0 else None
    for args in cx.tuples(m, n, cap):
        if rng.random() < 0.5:
            continue
        if target is not None:
            out = rng.choice(target.monomials(None if target.is_finite else 2))
        else:
            out = (rng.choice(cx.B.monomials(None if cx.B.is_finite else 2)),
                   rng.choice(cx.A.monomials(None if cx.A.is_finite else 2)))
        table[args] = {out: rng.randint(-3, 3) or 1}
    return Cochain.from_table(m, n, table, "random")


@pytest.mark.parametrize("name,psi", all_factorisations())
def test_edge_coboundaries_match_hochschild(name, psi):
    cx = CochainComplex(psi)
    rng = random.Random(11)
    cap = None if psi.A.is_finite else 3
    for m in (1, 2):
        f = _random_dense(cx, m, 0, rng, cap)
        df = cx.d_A(f)
        for args in cx.tuples(m + 1, 0, cap):
            assert df.value(args) == _hochschild(psi.A, f, args)
        g = _random_dense(cx, 0, m, rng, cap)
        dg = cx.d_B(g)
        for args in cx.tuples(0, m + 1, cap):
            # B's arguments run b^1, ..., b^n: the same textbook formula
            assert dg.value(args) == _hochschild(psi.B, g, args)


@pytest.mark.parametrize("name,psi", all_factorisations())
def test_mixed_coboundaries_match_x_products(name, psi):
    cx = CochainComplex(psi)
    rng = random.Random(5)
    cap = None if psi.A.is_finite else 3
    f = _random_dense(cx, 1, 1, rng, cap)
    dA, dB = cx.d_A(f), cx.d_B(f)
    for args in cx.tuples(2, 1, cap):
        assert dA.value(args) == _mixed_d_A(cx, f, args)
    for args in cx.tuples(1, 2, cap):
        assert dB.value(args) == _mixed_d_B(cx, f, args)


@pytest.mark.parametrize("name,psi", all_factorisations())
def test_D_squared_on_dense_cochains(name, psi):
    cx = CochainComplex(psi)
    rng = random.Random(2)
    cap = None if psi.A.is_finite else 3
    for k in (1, 2):
        c = TotalCochain(k, {(m, k - m): _random_dense(cx, m, k - m, rng, cap) for m in range(k + 1) if (m, k - m) != (0, 0)})
        assert cx.vanishes(cx.D(cx.D(c)), cap).ok


def test_sampler_detects_a_sign_error():
    """Dropping the sign in front of d_B breaks D o D; the neighbourhood
    sampler must see it."""
    psi = all_factorisations()[1][1]
    cx = CochainComplex(psi)
    rng = random.Random(0)
    found = False
    for _ in range(40):
        f, support = random_delta(cx, 1, 0, rng)
        wrong = Cochain.combination([(1, cx.d_B(cx.d_A(f))), (1, cx.d_A(cx.d_B(f)))])
        for args in evaluation_tuples(cx, f, support, 2, 1, rng):
            if wrong.value(args):
                found = True
                break
        if found:
            break
    assert found


def test_total_cochain_bookkeeping():
    psi = quaternion_twist()
    f = Cochain.delta(1, 1, ((1,), (1,)), ((0,), (0,)))
    c = TotalCochain(2, {(1, 1): f})
    assert [tuple(bd) for bd in c.bidegrees()] == [(2, 0), (1, 1), (0, 2)]
    assert not c[(2, 0)].value(((1,), (1,)))
    with pytest.raises(ValueError):
        TotalCochain(3, {(1, 1): f})
    with pytest.raises(ValueError):
        Cochain(0, 0, lambda args: {})
    d = CochainComplex(psi).D(c)
    assert d.degree == 3
    assert set(tuple(bd) for bd in d.components) == {(2, 1), (1, 2)}


def test_random_deltas_cover_every_bidegree():
    rng = random.Random(1)
    cx = CochainComplex(all_factorisations()[0][1])
    for m, n in BIDEGREES:
        f, support = random_delta(cx, m, n, rng)
        assert (f.m, f.n) == (m, n) and f.value(support)
