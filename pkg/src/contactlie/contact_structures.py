"""Almost contact metric structures on metric Lie algebras.

A structure is the pair (phi, xi); the 1-form eta is always derived from the
metric as ``eta(x) = <x, xi>``. Residuals of vector-valued identities are
G-norms maximised over basis inputs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import lie_core
from .errors import DimensionError, InvalidStructure, NotCosymplectic, NotTwoStep
from .lie_core import _frozen
from .metric_connection import ConnectionTable, MetricLieAlgebra, center_perp, is_bi_invariant
from .report import DEFAULT_TOL, CheckReport


@dataclass(frozen=True, eq=False)
class AlmostContactStructure:
    phi: np.ndarray
    xi: np.ndarray
    name: str = ""

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        xi = np.asarray(self.xi, dtype=float)
        if phi.ndim != 2 or phi.shape[0] != phi.shape[1] or xi.shape != (phi.shape[0],):
            raise DimensionError(f"phi must be n x n and xi length n, got {phi.shape} and {xi.shape}")
        object.__setattr__(self, "phi", _frozen(phi))
        object.__setattr__(self, "xi", _frozen(xi))

    @property
    def dim(self) -> int:
        return self.xi.shape[0]

    def eta(self, m: MetricLieAlgebra) -> np.ndarray:
        """Covector components ``eta[i] = <e_i, xi>``."""
        return m.gram @ self.xi

    def change_basis(self, p) -> AlmostContactStructure:
        p = np.asarray(p, dtype=float)
        pinv = np.linalg.inv(p)
        return AlmostContactStructure(pinv @ self.phi @ p, pinv @ self.xi, self.name)


def _check_dims(m: MetricLieAlgebra, s: AlmostContactStructure):
    if s.dim != m.dim:
        raise DimensionError(f"structure has dimension {s.dim}, algebra has {m.dim}")


def validate_almost_contact(m: MetricLieAlgebra, s: AlmostContactStructure, tol: float = DEFAULT_TOL) -> CheckReport:
    """Axiom residuals for (phi, xi, eta, g)."""
    _check_dims(m, s)
    n, g, phi, xi = m.dim, m.gram, s.phi, s.xi
    eta = s.eta(m)
    report = CheckReport(tol)

    def worst_column(mat):
        norms = m.column_norms(mat)
        j = int(np.argmax(norms))
        return float(norms[j]), j

    r, j = worst_column(phi @ phi + np.eye(n) - np.outer(xi, eta))
    report.add("phi_squared", r, j)
    report.add("eta_xi", abs(float(eta @ xi) - 1.0))
    report.add("phi_xi", m.norm(phi @ xi))
    eta_phi = eta @ phi
    report.add("eta_phi", float(np.abs(eta_phi).max()), int(np.argmax(np.abs(eta_phi))))

    compat = phi.T @ g @ phi - g + np.outer(eta, eta)
    idx = np.unravel_index(int(np.argmax(np.abs(compat))), compat.shape)
    report.add("metric_compatible", float(np.abs(compat).max()), tuple(int(i) for i in idx))

    skew = phi.T @ g + g @ phi
    idx = np.unravel_index(int(np.argmax(np.abs(skew))), skew.shape)
    report.add("phi_skew", float(np.abs(skew).max()), tuple(int(i) for i in idx))

    report.add("odd_dimension", 0.0 if n % 2 else 1.0, blocking=False,
               note="" if n % 2 else f"dimension {n} is even")
    return report


def nabla_phi_table(m: MetricLieAlgebra, t: ConnectionTable, s: AlmostContactStructure) -> np.ndarray:
    """``out[i, j] = (nabla_{e_i} phi) e_j``."""
    gam, phi = t.coeffs, s.phi
    first = np.einsum("aj,iak->ijk", phi, gam)
    second = np.einsum("ka,ija->ijk", phi, gam)
    return first - second


def nabla_phi(m: MetricLieAlgebra, t: ConnectionTable, s: AlmostContactStructure, x, y) -> np.ndarray:
    """``nabla_x (phi y) - phi (nabla_x y)``."""
    _check_dims(m, s)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (m.dim,) or y.shape != (m.dim,):
        raise DimensionError(f"vectors must have length {m.dim}")
    return np.einsum("i,j,ijk->k", x, y, nabla_phi_table(m, t, s))


def sasaki_target_table(m: MetricLieAlgebra, s: AlmostContactStructure) -> np.ndarray:
    """``out[i, j] = <e_i, e_j> xi - eta(e_j) e_i``."""
    n = m.dim
    return np.einsum("ij,k->ijk", m.gram, s.xi) - np.einsum("j,ik->ijk", s.eta(m), np.eye(n))


class ContactClass(enum.Enum):
    COSYMPLECTIC = "cosymplectic"
    SASAKIAN = "sasakian"
    NEITHER = "neither"


def _grid_residual(m: MetricLieAlgebra, table: np.ndarray):
    n = m.dim
    flat = table.reshape(-1, n)
    norms = np.sqrt(np.maximum(np.einsum("ai,ij,aj->a", flat, m.gram, flat), 0.0))
    if norms.size == 0:
        return 0.0, None
    k = int(np.argmax(norms))
    return float(norms[k]), tuple(int(v) for v in np.unravel_index(k, table.shape[:-1]))


def structure_residuals(m: MetricLieAlgebra, s: AlmostContactStructure, tol: float = DEFAULT_TOL) -> CheckReport:
    """Cosymplectic and Sasakian residuals, computed with no precondition."""
    _check_dims(m, s)
    t = m.connection
    dphi = nabla_phi_table(m, t, s)
    nabla_xi = np.einsum("j,ijk->ik", s.xi, t.coeffs)
    report = CheckReport(tol)
    r, w = _grid_residual(m, dphi)
    report.add("cosymplectic.nabla_phi", r, w)
    r, w = _grid_residual(m, nabla_xi)
    report.add("cosymplectic.nabla_xi", r, w)
    r, w = _grid_residual(m, dphi - sasaki_target_table(m, s))
    report.add("sasakian", r, w)
    return report


def classify(m: MetricLieAlgebra, s: AlmostContactStructure, tol: float = DEFAULT_TOL):
    """Return ``(ContactClass, CheckReport)``.

    The structure must first pass ``validate_almost_contact``. Both tests
    passing at once only happens degenerately; that resolves to cosymplectic
    when the connection vanishes identically, otherwise to neither.
    """
    valid = validate_almost_contact(m, s, tol)
    if not valid.passed:
        bad = ", ".join(c.name for c in valid.failures() if c.blocking)
        raise InvalidStructure(f"not an almost contact metric structure: {bad}")
    report = structure_residuals(m, s, tol)
    cosym = report["cosymplectic.nabla_phi"].passed and report["cosymplectic.nabla_xi"].passed
    sasaki = report["sasakian"].passed
    if cosym and sasaki:
        flat = float(np.abs(m.connection.coeffs).max()) <= tol
        if flat:
            report.notes.append("cosymplectic and Sasakian residuals both vanish; flat connection, reported cosymplectic")
            return ContactClass.COSYMPLECTIC, report
        report.notes.append("cosymplectic and Sasakian residuals both vanish on a non-flat algebra; undecided")
        return ContactClass.NEITHER, report
    if cosym:
        return ContactClass.COSYMPLECTIC, report
    if sasaki:
        return ContactClass.SASAKIAN, report
    return ContactClass.NEITHER, report


def cosymplectic_bracket_grid(m: MetricLieAlgebra, s: AlmostContactStructure, tol: float = DEFAULT_TOL) -> CheckReport:
    """Residuals of [phi x, y] = [x, phi y] = phi [x, y] and [x, xi] = 0 on the basis."""
    _check_dims(m, s)
    c, phi = m.algebra.constants, s.phi
    phi_br = np.einsum("ka,ija->ijk", phi, c)
    left = np.einsum("ai,ajk->ijk", phi, c) - phi_br
    right = np.einsum("aj,iak->ijk", phi, c) - phi_br
    with_xi = np.einsum("j,ijk->ik", s.xi, c)
    report = CheckReport(tol)
    for name, table in (("phi_x_bracket", left), ("x_phi_bracket", right), ("xi_central", with_xi)):
        r, w = _grid_residual(m, table)
        report.add(name, r, w)
    return report


def check_cosymplectic_consequences(
    m: MetricLieAlgebra,
    s: AlmostContactStructure,
    tol: float = DEFAULT_TOL,
) -> CheckReport:
    verdict, _ = classify(m, s, tol)
    if verdict is not ContactClass.COSYMPLECTIC:
        raise NotCosymplectic(f"structure classifies as {verdict.value}")
    return cosymplectic_bracket_grid(m, s, tol)


def check_center_constraints(
    m: MetricLieAlgebra,
    s: AlmostContactStructure,
    tol: float = DEFAULT_TOL,
    normalize: bool = True,
    samples: int = 64,
    seed: int = 0,
) -> CheckReport:
    """Center constraints that follow from skew-adjoint ad on a 2-step algebra.

    ``ad_skew`` is the hypothesis (computed on the normalised algebra when
    ``normalize``). The remaining checks are always evaluated on the raw
    input; they are blocking only when the hypothesis holds, since otherwise
    nothing forces them.
    """
    _check_dims(m, s)
    a = m.algebra
    if not lie_core.is_two_step(a):
        raise NotTwoStep("center constraints are stated for 2-step nilpotent algebras")
    report = CheckReport(tol)
    hyp = is_bi_invariant(m, tol, normalize)["bi_invariant"]
    report.add("ad_skew", hyp.residual, hyp.witness, blocking=False, note="hypothesis")
    implied = hyp.passed

    nonsing = lie_core.is_nonsingular(a, m.gram, samples, seed)
    report.notes.append(f"nonsingular hypothesis: {nonsing.verdict.value}")
    report.notes.append("cosymplectic hypothesis is not evaluated here; see classify")

    z, _ = center_perp(m)
    eta = s.eta(m)
    zb = z.basis
    if zb.shape[1]:
        vals = np.abs(eta @ zb)
        k = int(np.argmax(vals))
        r_eta, w_eta = float(vals[k]), zb[:, k].copy()
        coef = np.linalg.solve(zb.T @ m.gram @ zb, zb.T @ m.gram @ s.xi)
        r_proj = m.norm(zb @ coef)
    else:
        r_eta, w_eta, r_proj = 0.0, None, 0.0
    note = "implied by hypothesis" if implied else "hypothesis fails; informational"
    report.add("eta_center", r_eta, w_eta, blocking=implied, note=note)
    report.add("xi_in_center_perp", r_proj, blocking=implied, note=note)

    c = a.constants
    phi2 = s.phi @ s.phi
    table = np.einsum("ka,ija->ijk", phi2, c) - c.transpose(1, 0, 2)
    r, w = _grid_residual(m, table)
    report.add("phi_squared_bracket", r, w, blocking=implied, note=note)
    if implied and report.passed:
        report.notes.append("Z(g) is then an integral subalgebra (not computed as a foliation)")
    return report
