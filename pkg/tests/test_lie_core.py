import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import e
from oracles import bracket_loops, jacobi_loops
from contactlie import catalog
from contactlie.errors import AntisymmetryError, DimensionError, NotTwoStep
from contactlie.lie_core import (
    LieAlgebra,
    Nonsingularity,
    ad_matrix,
    bracket,
    center,
    is_nonsingular,
    is_two_step,
    jacobi_residual,
    lower_central_series,
    nilpotency_class,
)

H3 = LieAlgebra.from_brackets(3, {(0, 1): {2: 1.0}})
FILIFORM = catalog.filiform4().algebra
NOT_JACOBI = LieAlgebra.from_brackets(3, {(0, 1): {2: 1.0}, (0, 2): {0: 1.0}})
SOLVABLE2 = LieAlgebra.from_brackets(2, {(0, 1): {1: 1.0}})


def catalog_algebras():
    return [ex.algebra for ex in catalog.all_examples()] + [
        catalog.heisenberg(3, 1.5).algebra,
        catalog.heisenberg(2, 2.0).algebra,
    ]


def test_bracket_h3():
    np.testing.assert_array_equal(bracket(H3, e(3, 0), e(3, 1)), e(3, 2))
    np.testing.assert_array_equal(bracket(H3, e(3, 1), e(3, 0)), -e(3, 2))
    np.testing.assert_array_equal(bracket(H3, e(3, 0), e(3, 2)), np.zeros(3))


def test_bracket_dimension_error():
    with pytest.raises(DimensionError):
        bracket(H3, np.ones(2), np.ones(3))


def test_full_tensor_must_be_antisymmetric():
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0
    with pytest.raises(AntisymmetryError):
        LieAlgebra(c)


def test_storage_is_exactly_antisymmetric(rng):
    c = rng.standard_normal((4, 4, 4))
    c = c - c.transpose(1, 0, 2)
    a = LieAlgebra(c)
    np.testing.assert_array_equal(a.constants, -a.constants.transpose(1, 0, 2))


@given(st.lists(st.floats(-10, 10), min_size=8, max_size=8))
def test_bracket_matches_loops_and_is_antisymmetric(vals):
    x, y = np.array(vals[:4]), np.array(vals[4:])
    a = catalog.filiform4().algebra
    np.testing.assert_allclose(bracket(a, x, y), bracket_loops(a.constants, x, y), atol=1e-10)
    np.testing.assert_array_equal(bracket(a, x, y), -bracket(a, y, x))
    np.testing.assert_array_equal(bracket(a, x, x), np.zeros(4))


def test_jacobi_values():
    assert jacobi_residual(H3) == 0.0
    assert jacobi_residual(LieAlgebra.abelian(4)) == 0.0
    # cyclic sum on (e1, e2, e3) is e3
    assert jacobi_residual(NOT_JACOBI) == 1.0
    assert jacobi_loops(NOT_JACOBI.constants) == 1.0


@pytest.mark.parametrize("algebra", catalog_algebras())
def test_catalog_satisfies_jacobi(algebra):
    assert jacobi_residual(algebra) <= 1e-12
    assert jacobi_loops(algebra.constants) <= 1e-12


def test_jacobi_matches_loop_oracle_on_random_tensor(rng):
    c = rng.standard_normal((3, 3, 3))
    a = LieAlgebra(c - c.transpose(1, 0, 2))
    assert jacobi_residual(a) == pytest.approx(jacobi_loops(a.constants), rel=1e-12)


@pytest.mark.parametrize(
    "algebra, dims",
    [
        (H3, [3, 1, 0]),
        (LieAlgebra.abelian(4), [4, 0]),
        (H3.direct_sum(LieAlgebra.abelian(1)), [4, 1, 0]),
        (FILIFORM, [4, 2, 1, 0]),
        (SOLVABLE2, [2, 1]),
    ],
)
def test_lower_central_series(algebra, dims):
    series = lower_central_series(algebra)
    assert [s.dim for s in series] == dims
    for prev, nxt in zip(series, series[1:]):
        assert all(prev.contains(col) for col in nxt.basis.T)


def test_nilpotency_class():
    assert nilpotency_class(H3) == 2
    assert nilpotency_class(LieAlgebra.abelian(3)) == 1
    assert nilpotency_class(FILIFORM) == 3
    assert nilpotency_class(SOLVABLE2) is None


def test_is_two_step():
    assert is_two_step(H3)
    assert not is_two_step(LieAlgebra.abelian(3))
    assert not is_two_step(FILIFORM)
    assert not is_two_step(SOLVABLE2)


def test_center():
    np.testing.assert_array_equal(center(H3).basis, e(3, 2)[:, None])
    assert center(LieAlgebra.abelian(4)).dim == 4
    z = center(H3.direct_sum(LieAlgebra.abelian(1)))
    np.testing.assert_array_equal(z.basis, np.column_stack([e(4, 2), e(4, 3)]))
    # Euclidean orthonormal
    np.testing.assert_allclose(z.basis.T @ z.basis, np.eye(2))


def test_center_is_rescaling_invariant():
    scaled = LieAlgebra(H3.constants * 1e-6)
    assert center(scaled).dim == 1
    assert [s.dim for s in lower_central_series(scaled)] == [3, 1, 0]


def test_ad_matrix():
    expected = np.zeros((3, 3))
    expected[2, 1] = 1.0
    np.testing.assert_array_equal(ad_matrix(H3, e(3, 0)), expected)
    np.testing.assert_array_equal(ad_matrix(H3, np.zeros(3)), np.zeros((3, 3)))
    np.testing.assert_array_equal(ad_matrix(LieAlgebra.abelian(3), np.ones(3)), np.zeros((3, 3)))


def test_ad_matrix_columns_are_brackets(rng):
    a = catalog.heisenberg(2, 1.3).algebra
    x = rng.standard_normal(5)
    ad = ad_matrix(a, x)
    for j in range(5):
        np.testing.assert_allclose(ad[:, j], bracket_loops(a.constants, x, e(5, j)), atol=1e-14)


@pytest.mark.parametrize("algebra", catalog_algebras())
def test_nilpotent_algebras_have_nonzero_center(algebra):
    if nilpotency_class(algebra) is not None:
        assert center(algebra).dim >= 1


@pytest.mark.parametrize("algebra", catalog_algebras())
def test_center_is_an_ideal_and_two_step_brackets_are_central(algebra):
    z = center(algebra)
    n = algebra.dim
    for col in z.basis.T:
        for j in range(n):
            assert np.abs(bracket(algebra, e(n, j), col)).max() <= 1e-12
    if is_two_step(algebra):
        for i in range(n):
            for j in range(n):
                br = bracket(algebra, e(n, i), e(n, j))
                for k in range(n):
                    assert np.abs(bracket(algebra, br, e(n, k))).max() <= 1e-12


@pytest.mark.parametrize("algebra", catalog_algebras())
def test_series_strictly_decreasing(algebra):
    dims = [s.dim for s in lower_central_series(algebra)]
    assert all(a > b for a, b in zip(dims, dims[1:]))


def test_nonsingular_h3_and_h5():
    for algebra in (H3, catalog.heisenberg(2, 1.0).algebra):
        res = is_nonsingular(algebra, samples=64, seed=0)
        assert res.verdict in (Nonsingularity.NONSINGULAR, Nonsingularity.PROBABLY_NONSINGULAR)
        assert res.witness is None


def test_singular_witness():
    res = is_nonsingular(H3.direct_sum(LieAlgebra.abelian(1)), samples=64, seed=0)
    assert res.verdict is Nonsingularity.SINGULAR
    np.testing.assert_array_equal(res.witness, e(4, 0))
    assert np.linalg.matrix_rank(ad_matrix(H3.direct_sum(LieAlgebra.abelian(1)), res.witness)) == 1


def test_nonsingular_requires_two_step():
    with pytest.raises(NotTwoStep):
        is_nonsingular(FILIFORM)
    with pytest.raises(NotTwoStep):
        is_nonsingular(LieAlgebra.abelian(3))


def test_nonsingular_monte_carlo_branch_finds_degenerate_direction():
    # [e1,e2] = e5, [e3,e4] = e6: center span{e5,e6}; ad(e1) has image span{e5} only
    a = LieAlgebra.from_brackets(6, {(0, 1): {4: 1.0}, (2, 3): {5: 1.0}})
    res = is_nonsingular(a, samples=16, seed=3)
    assert res.verdict is Nonsingularity.SINGULAR


def test_nonsingular_quaternionic_type_is_probably_nonsingular():
    # H-type algebra of dimension 7 (3-dim center), nonsingular by construction
    tbl = {}
    i_, j_, k_ = (np.array(m, dtype=float) for m in (
        [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
        [[0, 0, -1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, -1, 0, 0]],
        [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
    ))
    for a in range(4):
        for b in range(a + 1, 4):
            coeffs = {4 + z: float(jz[b, a]) for z, jz in enumerate((i_, j_, k_)) if jz[b, a]}
            if coeffs:
                tbl[(a, b)] = coeffs
    alg = LieAlgebra.from_brackets(7, tbl)
    assert jacobi_residual(alg) == 0.0
    assert is_two_step(alg)
    res = is_nonsingular(alg, samples=64, seed=0)
    assert res.verdict is Nonsingularity.PROBABLY_NONSINGULAR
    assert res.tested == 4 + 64


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_change_basis_preserves_series_and_center(seed):
    rng = np.random.default_rng(seed)
    p = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    b = FILIFORM.change_basis(p)
    assert jacobi_residual(b) <= 1e-9
    assert [s.dim for s in lower_central_series(b)] == [4, 2, 1, 0]
    assert center(b).dim == 1
