"""Random cochains and evaluation tuples for the complex tests.

A delta cochain is supported on one basis tuple, so a composite like
``d_A d_A f`` can only be nonzero on tuples related to that support by
splitting an entry into a product or inserting extra factors.  The
neighbourhood sampler walks those relations; a few unrelated random tuples
are mixed in as well.
"""

from algfact.algebra import tuple_degree
from algfact.complex import Cochain

BIDEGREES = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]


def random_mono(alg, rng, max_degree):
    if alg.is_finite:
        return rng.choice(alg.monomials())
    return rng.choice(alg.monomials(max_degree))


def splits(alg, mono):
    """Pairs ``(u, v)`` with ``mono`` in the support of ``u * v``."""
    d = alg.degree(mono)
    monos = alg.monomials(None if alg.is_finite else d)
    out = []
    for u in monos:
        for v in monos:
            if alg.is_finite or alg.degree(u) + alg.degree(v) == d:
                if mono in alg.basis_product(u, v):
                    out.append((u, v))
    return out


def random_delta(cx, m, n, rng, max_degree=6):
    """``(f, support)`` for a random delta cochain of bidegree ``(m, n)``."""
    sig = cx.signature(m, n)
    while True:
        args = tuple(random_mono(alg, rng, 3) for alg in sig)
        if cx.A.is_finite and cx.B.is_finite or tuple_degree(sig, args) <= max_degree:
            break
    target = cx.A if n == 0 else cx.B if m == 0 else None
    if target is not None:
        out = random_mono(target, rng, 3)
    else:
        out = (random_mono(cx.B, rng, 3), random_mono(cx.A, rng, 3))
    return Cochain.delta(m, n, args, out, rng.choice([1, -2, 3])), args


def _grow(cx, seq, alg, rng):
    """One extra entry in a run of arguments from ``alg``."""
    seq = list(seq)
    if seq and rng.random() < 0.6:
        i = rng.randrange(len(seq))
        opts = splits(alg, seq[i])
        if opts:
            u, v = rng.choice(opts)
            return seq[:i] + [u, v] + seq[i + 1:]
    choice = rng.random()
    if choice < 0.3:
        new = alg.unit
    elif choice < 0.7:
        new = rng.choice(list(alg.generator_monos.values()))
    else:
        new = random_mono(alg, rng, 2)
    i = rng.randrange(len(seq) + 1)
    return seq[:i] + [new] + seq[i:]


def neighbourhood(cx, support, m, n, m2, n2, rng, count=12, extra_random=4):
    """Tuples of bidegree ``(m2, n2)`` near ``support`` (bidegree ``(m, n)``)."""
    out = set()
    for _ in range(count):
        As, Bs = list(support[:m]), list(support[m:])
        while len(As) < m2:
            As = _grow(cx, As, cx.A, rng)
        while len(Bs) < n2:
            Bs = _grow(cx, Bs, cx.B, rng)
        out.add(tuple(As) + tuple(Bs))
    sig = cx.signature(m2, n2)
    for _ in range(extra_random):
        out.add(tuple(random_mono(alg, rng, 2) for alg in sig))
    return sorted(out)


def evaluation_tuples(cx, f, support, m2, n2, rng, **kw):
    """All tuples for finite factorisations, a neighbourhood otherwise."""
    if cx.A.is_finite and cx.B.is_finite:
        return list(cx.tuples(m2, n2, None))
    return neighbourhood(cx, support, f.m, f.n, m2, n2, rng, **kw)
