import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import e
from oracles import random_orthogonal, random_spd, signed_permutation
from contactlie import catalog
from contactlie.contact_structures import (
    AlmostContactStructure,
    ContactClass,
    check_center_constraints,
    check_cosymplectic_consequences,
    classify,
    cosymplectic_bracket_grid,
    nabla_phi,
    structure_residuals,
    validate_almost_contact,
)
from contactlie.errors import DimensionError, InvalidStructure, NotCosymplectic, NotTwoStep
from contactlie.lie_core import bracket
from contactlie.metric_connection import MetricLieAlgebra, inner, levi_civita, nabla


def standard(n):
    return catalog.rotation_phi(n, n // 2), e(n, n - 1)


def bundled():
    out = []
    for ex in catalog.all_examples() + [catalog.heisenberg(3, 2.0), catalog.heisenberg(2, 2.0)]:
        for s in ex.structures:
            out.append((ex, s))
    return out


def test_validate_standard_abelian3():
    m = catalog.abelian(3).metric
    phi, xi = standard(3)
    rep = validate_almost_contact(m, AlmostContactStructure(phi, xi))
    assert rep.passed
    assert all(c.residual == 0.0 for c in rep.checks)


def test_validate_wrong_xi_length():
    m = catalog.abelian(3).metric
    phi, xi = standard(3)
    rep = validate_almost_contact(m, AlmostContactStructure(phi, 2 * xi))
    assert rep["eta_xi"].residual == 3.0
    assert not rep.passed


def test_validate_zero_phi():
    m = catalog.abelian(3).metric
    rep = validate_almost_contact(m, AlmostContactStructure(np.zeros((3, 3)), e(3, 2)))
    assert rep["phi_squared"].residual == 1.0
    assert rep["phi_squared"].witness == 0
    assert not rep.passed


def test_validate_dimension_mismatch():
    with pytest.raises(DimensionError):
        validate_almost_contact(catalog.abelian(3).metric, AlmostContactStructure(np.zeros((5, 5)), e(5, 4)))


def test_even_dimension_is_a_warning():
    m = catalog.abelian(4).metric
    phi = catalog.rotation_phi(4, 1)
    rep = validate_almost_contact(m, AlmostContactStructure(phi, e(4, 3)))
    assert not rep["odd_dimension"].passed
    assert not rep["odd_dimension"].blocking
    # e3 has phi e3 = 0 but is orthogonal to xi, so phi^2 = -I + eta(x) xi fails too
    assert not rep["phi_squared"].passed


def test_non_identity_metric_structure():
    # rescale e1, e2 so the metric is diag(4, 4, 1); phi is unchanged as a rotation
    g = np.diag([4.0, 4.0, 1.0])
    m = MetricLieAlgebra(catalog.abelian(3).algebra, g)
    phi, xi = standard(3)
    assert validate_almost_contact(m, AlmostContactStructure(phi, xi)).passed


@pytest.mark.parametrize("ex, s", bundled(), ids=lambda v: getattr(v, "name", ""))
def test_bundled_structures_are_exact(ex, s):
    rep = validate_almost_contact(ex.metric, s)
    assert rep.passed
    assert max(c.residual for c in rep.checks if c.blocking) <= 1e-12


@pytest.mark.parametrize("ex, s", bundled(), ids=lambda v: getattr(v, "name", ""))
def test_skewness_follows(ex, s):
    m = ex.metric
    n = m.dim
    for i in range(n):
        for j in range(n):
            assert abs(inner(m, s.phi @ e(n, i), e(n, j)) + inner(m, e(n, i), s.phi @ e(n, j))) <= 1e-12


def test_nabla_phi_values(h3s):
    m = h3s.metric
    t = levi_civita(m)
    s = h3s.structure()
    np.testing.assert_allclose(nabla_phi(m, t, s, e(3, 0), e(3, 0)), e(3, 2), atol=1e-15)
    np.testing.assert_allclose(nabla_phi(m, t, s, e(3, 0), e(3, 2)), -e(3, 0), atol=1e-15)
    ma = catalog.abelian(3).metric
    assert not nabla_phi(ma, levi_civita(ma), catalog.abelian(3).structure(), e(3, 0), e(3, 1)).any()


def test_nabla_phi_matches_definition(rng):
    ex = catalog.heisenberg(2, 1.7)
    m = MetricLieAlgebra(ex.algebra, random_spd(5, rng))
    t = levi_civita(m)
    phi = rng.standard_normal((5, 5))
    s = AlmostContactStructure(phi, rng.standard_normal(5))
    x, y = rng.standard_normal(5), rng.standard_normal(5)
    expected = nabla(m, t, x, phi @ y) - phi @ nabla(m, t, x, y)
    np.testing.assert_allclose(nabla_phi(m, t, s, x, y), expected, atol=1e-12)


def test_classify_abelian_cosymplectic():
    for n in (1, 3, 5, 7):
        ex = catalog.abelian(n)
        verdict, rep = classify(ex.metric, ex.structure())
        assert verdict is ContactClass.COSYMPLECTIC
        assert rep["cosymplectic.nabla_phi"].residual == 0.0
        assert rep["cosymplectic.nabla_xi"].residual == 0.0


def test_classify_h3_sasakian(h3s):
    verdict, rep = classify(h3s.metric, h3s.structure())
    assert verdict is ContactClass.SASAKIAN
    assert rep["sasakian"].residual <= 1e-12


def test_classify_h5_sasakian():
    ex = catalog.heisenberg(2, 2.0)
    verdict, _ = classify(ex.metric, ex.structure())
    assert verdict is ContactClass.SASAKIAN


def test_classify_h3_unit_constant(h3):
    verdict, rep = classify(h3.metric, h3.structure())
    assert verdict is ContactClass.NEITHER
    assert rep["sasakian"].residual == pytest.approx(0.5, abs=1e-15)
    assert rep["sasakian"].witness == (0, 0)
    assert rep["cosymplectic.nabla_phi"].residual == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("c", [0.25, 1.0, 1.5, 3.0, 4.0, -2.0])
def test_sasakian_residual_scales_with_constant(c):
    ex = catalog.heisenberg(1, c)
    _, rep = classify(ex.metric, ex.structure())
    assert rep["sasakian"].residual == pytest.approx(abs(c / 2 - 1), abs=1e-12)


def test_classify_rejects_invalid_structure():
    m = catalog.abelian(3).metric
    with pytest.raises(InvalidStructure):
        classify(m, AlmostContactStructure(np.zeros((3, 3)), e(3, 2)))


def test_cosymplectic_requires_parallel_xi():
    # every cosymplectic verdict comes with nabla xi = 0 on the basis
    for ex, s in bundled():
        verdict, rep = classify(ex.metric, s)
        if verdict is ContactClass.COSYMPLECTIC:
            t = levi_civita(ex.metric)
            n = ex.metric.dim
            for i in range(n):
                assert np.abs(nabla(ex.metric, t, e(n, i), s.xi)).max() <= 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 31 - 1), st.sampled_from(["h3-sasakian", "h3", "abelian-5", "h5-sasakian", "h3+a2"]))
def test_classify_invariant_under_orthogonal_change(seed, name):
    rng = np.random.default_rng(seed)
    ex = catalog.get_example(name)
    s = ex.structure()
    v0, r0 = classify(ex.metric, s)
    n = ex.metric.dim
    q = random_orthogonal(n, rng)
    v1, r1 = classify(ex.metric.change_basis(q), s.change_basis(q))
    assert v0 is v1
    for c0, c1 in zip(r0.checks, r1.checks):
        assert c0.passed == c1.passed
    # residuals maximise over basis vectors: equal whenever the new basis is
    # the old one up to order and sign
    p = signed_permutation(n, rng)
    v2, r2 = classify(ex.metric.change_basis(p), s.change_basis(p))
    assert v2 is v0
    for c0, c2 in zip(r0.checks, r2.checks):
        assert c2.residual == pytest.approx(c0.residual, abs=1e-8)


@pytest.mark.parametrize("n", [3, 5])
def test_cosymplectic_consequences_abelian(n):
    ex = catalog.abelian(n)
    rep = check_cosymplectic_consequences(ex.metric, ex.structure())
    assert rep.passed
    assert all(c.residual == 0.0 for c in rep.checks)


def test_cosymplectic_gate(h3s):
    m, s = h3s.metric, h3s.structure()
    with pytest.raises(NotCosymplectic):
        check_cosymplectic_consequences(m, s)
    # spot entries of the ungated grid
    c = m.algebra
    assert not bracket(c, e(3, 0), s.xi).any()
    np.testing.assert_array_equal(bracket(c, s.phi @ e(3, 0), e(3, 1)) - s.phi @ bracket(c, e(3, 0), e(3, 1)),
                                  np.zeros(3))
    np.testing.assert_array_equal(bracket(c, e(3, 0), s.phi @ e(3, 1)) - s.phi @ bracket(c, e(3, 0), e(3, 1)),
                                  np.zeros(3))
    grid = cosymplectic_bracket_grid(m, s)
    assert grid["xi_central"].residual == 0.0
    # [phi e1, e1] - phi[e1, e1] = [e2, e1] = -2 e3
    assert grid["phi_x_bracket"].residual == 2.0


def test_center_constraints_h3(h3s):
    rep = check_center_constraints(h3s.metric, h3s.structure())
    assert rep["ad_skew"].residual == pytest.approx(1.0)
    assert not rep["ad_skew"].passed
    assert rep["eta_center"].residual == 1.0
    assert rep["xi_in_center_perp"].residual == 1.0
    assert rep["phi_squared_bracket"].residual == 2.0
    # the hypothesis fails, so nothing downstream is claimed
    assert not any(rep[n].blocking for n in ("eta_center", "xi_in_center_perp", "phi_squared_bracket"))


def test_center_constraints_requires_two_step():
    ex = catalog.abelian(3)
    with pytest.raises(NotTwoStep):
        check_center_constraints(ex.metric, ex.structure())


def test_center_constraints_central_xi():
    ex = catalog.h3_plus_abelian2()
    rep = check_center_constraints(ex.metric, ex.structure())
    assert rep["eta_center"].residual == 1.0
    np.testing.assert_array_equal(rep["eta_center"].witness, e(5, 3))
    assert rep["xi_in_center_perp"].residual == 1.0
    # [x, y] is central and orthogonal to xi here: phi^2 [x,y] = -[x,y]
    assert rep["phi_squared_bracket"].residual == 0.0


def test_center_constraints_singular_two_step_with_central_xi():
    ex = catalog.singular_two_step()
    phi = catalog.rotation_phi(4, 1)
    s = AlmostContactStructure(phi, e(4, 3), "central-xi")
    rep = check_center_constraints(ex.metric, s)
    assert rep["eta_center"].residual == 1.0
    assert rep["xi_in_center_perp"].residual == 1.0


@pytest.mark.parametrize("ex, s", bundled(), ids=lambda v: getattr(v, "name", ""))
def test_phi_squared_bracket_identity(ex, s):
    m = ex.metric
    n = m.dim
    eta = s.eta(m)
    etas = []
    for i in range(n):
        for j in range(n):
            br = bracket(m.algebra, e(n, i), e(n, j))
            resid = s.phi @ s.phi @ br + br - (eta @ br) * s.xi
            assert np.abs(resid).max() <= 1e-12
            etas.append(abs(eta @ br))
    if max(etas) == 0.0:
        rep = check_center_constraints(m, s) if ex.algebra.constants.any() else None
        if rep is not None:
            assert rep["phi_squared_bracket"].residual <= 1e-12


def test_structure_residuals_has_no_precondition():
    rep = structure_residuals(catalog.abelian(3).metric, AlmostContactStructure(np.zeros((3, 3)), e(3, 2)))
    assert rep["cosymplectic.nabla_phi"].residual == 0.0
