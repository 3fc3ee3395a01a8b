import random

import pytest
import sympy

from algfact.algebra import complex_numbers
from algfact.cohomology import (
    CapsRequired,
    CochainSpace,
    assemble_D,
    cohomology_dim,
    generator_cocycle,
    kernel_dimension,
    normalize_representative,
    solve_coboundary,
)
from algfact.complex import Cochain, CochainComplex, TotalCochain
from algfact.corpus import commutative_plane, quantum_plane_twist, quaternion_twist
from algfact.twist import flip


def _oracle_matrix(psi, k):
    """``D_k`` built column by column from delta cochains, as a sympy matrix."""
    cx = CochainComplex(psi)
    cols = CochainSpace(cx, k)
    rows = CochainSpace(cx, k + 1)
    M = sympy.zeros(len(rows), len(cols))
    for j, lab in enumerate(cols.labels):
        f = Cochain.delta(lab.bidegree.m, lab.bidegree.n, lab.args, lab.output)
        img = cx.D(TotalCochain(k, {lab.bidegree: f}))
        for i, c in rows.vector(img).items():
            M[i, j] = sympy.Rational(c)
    return M


def test_quaternion_matrices_match_delta_oracle():
    psi = quaternion_twist()
    for k in (1, 2):
        D = assemble_D(psi, k)
        O = _oracle_matrix(psi, k)
        assert D.matrix.shape == O.shape
        dense = sympy.Matrix(D.matrix.to_dense())
        assert dense == O
    assert _oracle_matrix(psi, 1).shape == (32, 8)
    assert _oracle_matrix(psi, 2).shape == (96, 32)
    r1, r2 = _oracle_matrix(psi, 1).rank(), _oracle_matrix(psi, 2).rank()
    assert 32 - r2 - r1 == 1


def test_quaternion_cohomology():
    res = cohomology_dim(quaternion_twist(), 2)
    assert res.dim == 1 and res.exact and res.label == "cohomology"
    assert res.cochain_dims == (8, 32, 96)
    assert res.kernel_dim == 32 - res.rank_out
    assert cohomology_dim(quaternion_twist(), 1).dim == 0


def test_split_quaternion_twist_is_rigid():
    psi = flip(complex_numbers("i"), complex_numbers("j"))
    assert cohomology_dim(psi, 2).dim == 0


def test_capped_dimensions_are_labelled():
    res = cohomology_dim(commutative_plane(), 2, 3)
    assert not res.exact and res.label == "sub-complex dimensions"
    assert res.dim == res.kernel_dim - res.rank_in
    with pytest.raises(CapsRequired):
        cohomology_dim(commutative_plane(), 2)


def test_rank_nullity_on_slices():
    for psi, cap in ((quaternion_twist(), None), (quantum_plane_twist(2), 3)):
        D = assemble_D(psi, 2, cap)
        assert kernel_dimension(psi, 2, cap) + cohomology_dim(psi, 2, cap).rank_out == D.matrix.ncols


def _random_cochain(cx, k, rng, cap):
    space = CochainSpace(cx, k, cap, [0])
    vec = {i: rng.randint(-2, 2) for i in rng.sample(range(len(space)), min(6, len(space)))}
    return space.cochain(vec)


@pytest.mark.parametrize("psi,cap", [(quaternion_twist(), None), (commutative_plane(), 3)])
def test_coboundaries_are_solved(psi, cap):
    cx = CochainComplex(psi)
    rng = random.Random(4)
    for _ in range(5):
        x = _random_cochain(cx, 1, rng, cap)
        target = cx.D(x)
        res = solve_coboundary(psi, target, cap)
        assert res.solved
        assert cx.vanishes(cx.D(res.solution) - target, None if cap is None else cap - 1).ok


def test_generator_is_not_a_coboundary():
    psi = quaternion_twist()
    res = solve_coboundary(psi, generator_cocycle(psi))
    assert res.status == "inconsistent"
    assert res.witness is not None


def test_normalized_representative_recovers_multiple():
    psi = quaternion_twist()
    cx = CochainComplex(psi)
    rng = random.Random(9)
    w = _random_cochain(cx, 1, rng, None)
    z = generator_cocycle(psi) * 3 + cx.D(w)
    cls = normalize_representative(psi, z)
    assert cls.multiple == 3
    assert cx.vanishes(z - cls.representative - cx.D(cls.gauge), None).ok
    with pytest.raises(ValueError):
        normalize_representative(psi, _random_cochain(cx, 2, rng, None) + generator_cocycle(psi))


def test_matrix_json_shape():
    doc = assemble_D(quaternion_twist(), 1).to_json()
    assert len(doc["columns"]) == 8 and len(doc["rows"]) == 32
