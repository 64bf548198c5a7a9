import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icsskit import _matrix as mx
from icsskit.errors import BoundarySquareNonzero
from icsskit.fixtures import klein_bottle, projective_plane, simplicial, sphere, torus
from icsskit.intlin import (
    AbelianGroup,
    ChainComplex,
    HomologyBasis,
    LatticeCoordinates,
    determinant,
    format_groups,
    homology,
    invariant_factors,
    is_unimodular,
    kernel_basis,
    matrix_rank,
    relative_homology,
    smith_normal_form,
)
from icsskit.cellcx import subcomplex

Z = AbelianGroup(1)
ZERO = AbelianGroup()

matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def _snf_ok(M, r):
    M = mx.as_matrix(M)
    S = mx.matmul(mx.matmul(r.U, M), r.V)
    if not (S == r.S).all():
        return False
    d = r.invariants
    return (
        is_unimodular(r.U) and is_unimodular(r.V)
        and all(x > 0 for x in d)
        and all(b % a == 0 for a, b in zip(d, d[1:]))
        and (mx.matmul(r.U, r.Uinv) == mx.identity(r.U.shape[0])).all()
    )


def test_snf_small_examples(backend):
    assert smith_normal_form([[2, 4], [6, 8]]).invariants == [2, 4]
    assert smith_normal_form([[2, 0], [0, 3]]).invariants == [1, 6]
    assert smith_normal_form([[0, 0], [0, 0]]).invariants == []
    assert invariant_factors([[4, 6, 10]]) == [2]


def test_snf_zero_and_empty_shapes(backend):
    r = smith_normal_form(mx.zeros(3, 0))
    assert r.S.shape == (3, 0) and r.rank == 0
    r = smith_normal_form(mx.zeros(0, 2))
    assert r.V.shape == (2, 2)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_reconstruction_property(rows):
    assert _snf_ok(rows, smith_normal_form(rows))


@settings(max_examples=100, deadline=None)
@given(matrices, st.integers(0, 2**31))
def test_invariants_survive_unimodular_change(rows, seed):
    M = mx.as_matrix(rows)
    rng = np.random.default_rng(seed)
    P = mx.identity(M.shape[0])
    for _ in range(4):
        i, j = rng.choice(M.shape[0], 2) if M.shape[0] > 1 else (0, 0)
        if i != j:
            P[i, :] += int(rng.integers(-3, 4)) * P[j, :]
    assert is_unimodular(P)
    assert invariant_factors(mx.matmul(P, M)) == invariant_factors(M)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_kernel_is_primitive_basis(rows):
    M = mx.as_matrix(rows)
    K = kernel_basis(M)
    assert K.shape == (M.shape[1], M.shape[1] - matrix_rank(M))
    assert mx.is_zero(mx.matmul(M, K))
    if K.shape[1]:
        # a primitive basis has invariant factors all 1
        assert invariant_factors(K) == [1] * K.shape[1]


def test_backends_agree_on_random_matrices():
    from icsskit.intlin import available_backends, set_backend

    if len(available_backends()) < 2:
        pytest.skip("compiled kernels not built")
    rng = np.random.default_rng(3)
    for _ in range(200):
        m, n = rng.integers(1, 8, size=2)
        M = rng.integers(-9, 10, size=(m, n)).astype(object)
        out = []
        for b in ("c", "pure"):
            prev = set_backend(b)
            try:
                r = smith_normal_form(M)
                out.append((r.invariants, mx.to_rows(kernel_basis(M))))
            finally:
                set_backend(prev)
        assert out[0] == out[1]


def test_large_entries_fall_back_to_python_ints(backend):
    big = 10**30
    M = [[big, 0], [0, 2 * big]]
    r = smith_normal_form(M)
    assert r.invariants == [big, 2 * big]
    assert _snf_ok(M, r)


def test_determinant_and_unimodular():
    assert determinant([[2, 1], [1, 1]]) == 1
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([[1, 2, 3], [4, 5, 6], [7, 8, 9]]) == 0
    assert is_unimodular([[1, 5], [0, 1]])
    assert not is_unimodular([[2, 0], [0, 1]])


def test_abelian_group_rendering_and_validation():
    assert str(AbelianGroup(3, (2,))) == "ℤ³ ⊕ ℤ/2"
    assert str(ZERO) == "0"
    assert AbelianGroup.from_factors(1, [1, 3, -6]) == AbelianGroup(1, (3, 6))
    assert format_groups([Z, ZERO, Z, ZERO]) == "(ℤ, 0, ℤ)"
    with pytest.raises(ValueError):
        AbelianGroup(0, (2, 3))
    assert AbelianGroup.from_json(AbelianGroup(2, (4,)).to_json()) == AbelianGroup(2, (4,))


@pytest.mark.parametrize("K, want", [
    (sphere(0), [AbelianGroup(2)]),
    (sphere(1), [Z, Z]),
    (sphere(3), [Z, ZERO, ZERO, Z]),
    (torus(), [Z, AbelianGroup(2), Z]),
    (projective_plane(), [Z, AbelianGroup(0, (2,)), ZERO]),
    (klein_bottle(), [Z, AbelianGroup(1, (2,)), ZERO]),
    (simplicial([(0, 1, 2, 3)]), [Z, ZERO, ZERO, ZERO]),
])
def test_classical_homology(K, want, backend):
    assert homology(K) == want


def test_simplicial_projective_plane():
    # six-vertex RP^2
    faces = [(1, 2, 4), (2, 3, 4), (3, 1, 5), (1, 4, 5), (4, 5, 6), (2, 5, 6), (2, 3, 5), (3, 4, 6),
             (1, 3, 6), (1, 2, 6)]
    K = simplicial(faces)
    assert K.euler_characteristic() == 1
    assert homology(K) == [Z, AbelianGroup(0, (2,)), ZERO]


def test_non_complex_is_rejected():
    C = ChainComplex((1, 1, 1), {1: [[1]], 2: [[1]]})
    with pytest.raises(BoundarySquareNonzero):
        homology(C)


def test_lattice_coordinates():
    L = LatticeCoordinates([[2, 0], [0, 3], [0, 0]])
    x = L.coordinates([4, -3, 0])
    assert mx.to_rows(x) == [[2], [-1]]
    assert not L.contains([1, 0, 0])
    assert not L.contains([0, 0, 1])


def test_homology_basis_of_circle():
    K = sphere(1)
    C = ChainComplex((1, 1), {1: [[0]]})
    B = HomologyBasis(C, 1)
    assert B.group == Z
    assert mx.to_rows(B.coordinates(B.free_generators)) == [[1]]
    B0 = HomologyBasis(K.chain_complex(), 0)
    assert B0.group == Z


def test_homology_basis_torsion_coordinates():
    C = ChainComplex((1, 1, 1), {1: [[0]], 2: [[2]]})
    B = HomologyBasis(C, 1)
    assert B.group == AbelianGroup(0, (2,))
    assert mx.to_rows(B.torsion_coordinates([[3]])) == [[1]]
    assert B.free_generators.shape[1] == 0


def test_relative_homology_disk_mod_boundary():
    disk = simplicial([(0, 1, 2)])
    rim = subcomplex(disk, {"0", "1", "2", "0|1", "1|2", "0|2"})
    assert relative_homology(disk, rim) == [ZERO, ZERO, Z]
