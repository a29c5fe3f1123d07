"""Left-invariant metrics and their Levi-Civita connection."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import lie_core
from .errors import DimensionError, NotTwoStep, SingularMetric
from .lie_core import LieAlgebra, Subspace, _frozen
from .report import DEFAULT_TOL, CheckReport


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    """A Lie algebra with a positive-definite Gram matrix ``gram[i, j] = <e_i, e_j>``.

    The upper triangle of ``gram`` is authoritative; the input must be
    symmetric to 1e-12.
    """

    algebra: LieAlgebra
    gram: np.ndarray = None

    def __post_init__(self):
        n = self.algebra.dim
        g = np.eye(n) if self.gram is None else np.asarray(self.gram, dtype=float)
        if g.shape != (n, n):
            raise DimensionError(f"gram must be {n}x{n}, got {g.shape}")
        if np.abs(g - g.T).max() > 1e-12 * max(1.0, np.abs(g).max()):
            raise SingularMetric("gram matrix is not symmetric")
        g = np.triu(g) + np.triu(g, 1).T
        try:
            np.linalg.cholesky(g)
        except np.linalg.LinAlgError:
            raise SingularMetric("gram matrix is not positive definite") from None
        object.__setattr__(self, "gram", _frozen(g))

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @cached_property
    def connection(self) -> ConnectionTable:
        return levi_civita(self)

    def norm(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.sqrt(max(x @ self.gram @ x, 0.0)))

    def column_norms(self, m) -> np.ndarray:
        """G-norms of the columns of ``m``."""
        m = np.asarray(m, dtype=float).reshape(self.dim, -1)
        return np.sqrt(np.maximum(np.einsum("ia,ij,ja->a", m, self.gram, m), 0.0))

    def max_norm(self, vectors) -> float:
        """Largest G-norm over the last axis of ``vectors``."""
        v = np.asarray(vectors, dtype=float).reshape(-1, self.dim)
        if v.shape[0] == 0:
            return 0.0
        return float(np.sqrt(np.maximum(np.einsum("ai,ij,aj->a", v, self.gram, v), 0.0)).max())

    def normalized(self) -> tuple[MetricLieAlgebra, float, float]:
        """Copy with ``max|C| = 1`` and ``max|G| = 1``; returns the two factors."""
        algebra, c_scale = self.algebra.normalized()
        g_scale = float(np.abs(self.gram).max())
        return MetricLieAlgebra(algebra, self.gram / g_scale), c_scale, g_scale

    def change_basis(self, p) -> MetricLieAlgebra:
        p = np.asarray(p, dtype=float)
        g = p.T @ self.gram @ p
        return MetricLieAlgebra(self.algebra.change_basis(p), 0.5 * (g + g.T))


@dataclass(frozen=True, eq=False)
class ConnectionTable:
    """``coeffs[i, j, k]`` is the ``e_k`` component of nabla_{e_i} e_j."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(self.coeffs))


def inner(m: MetricLieAlgebra, x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (m.dim,) or y.shape != (m.dim,):
        raise DimensionError(f"vectors must have length {m.dim}")
    return float(x @ m.gram @ y)


def levi_civita(m: MetricLieAlgebra) -> ConnectionTable:
    """Solve ``2<nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>`` on the basis."""
    c, g = m.algebra.constants, m.gram
    # cg[i, j, k] = <[e_i, e_j], e_k>
    cg = np.einsum("ijl,lk->ijk", c, g)
    # transpose(2, 0, 1)[i, j, k] = cg[j, k, i]; transpose(1, 2, 0)[i, j, k] = cg[k, i, j]
    rhs = 0.5 * (cg - cg.transpose(2, 0, 1) + cg.transpose(1, 2, 0))
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise SingularMetric("gram matrix is not positive definite") from None
    n = m.dim
    flat = rhs.reshape(n * n, n).T
    sol = np.linalg.solve(chol.T, np.linalg.solve(chol, flat))
    return ConnectionTable(sol.T.reshape(n, n, n))


def nabla(m: MetricLieAlgebra, t: ConnectionTable, x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (m.dim,) or y.shape != (m.dim,):
        raise DimensionError(f"vectors must have length {m.dim}")
    return np.einsum("i,j,ijk->k", x, y, t.coeffs)


def torsion_residual(m: MetricLieAlgebra, t: ConnectionTable) -> float:
    d = t.coeffs - t.coeffs.transpose(1, 0, 2) - m.algebra.constants
    return float(np.abs(d).max())


def compatibility_residual(m: MetricLieAlgebra, t: ConnectionTable) -> float:
    # lowered[i, j, k] = <nabla_{e_i} e_j, e_k>
    lowered = np.einsum("ijl,lk->ijk", t.coeffs, m.gram)
    return float(np.abs(lowered + lowered.transpose(0, 2, 1)).max())


def center_perp(m: MetricLieAlgebra) -> tuple[Subspace, Subspace]:
    """Z(g) (Euclidean-orthonormal) and its G-orthogonal complement (G-orthonormal)."""
    z = lie_core.center(m.algebra)
    return z, lie_core.orthogonal_complement(z, m.gram)


def _scaled(m: MetricLieAlgebra, normalize: bool):
    return m.normalized()[0] if normalize else m


def half_bracket_residual(m: MetricLieAlgebra, complement: Subspace = None):
    """max ||nabla_X Y - [X, Y]/2|| over basis pairs of ``complement`` (default Z-perp).

    Returns ``(residual, (a, b))`` with the witnessing column pair.
    """
    if complement is None:
        complement = center_perp(m)[1]
    b = complement.basis
    if b.shape[1] == 0:
        return 0.0, None
    nab = np.einsum("ia,jb,ijk->abk", b, b, m.connection.coeffs)
    half = 0.5 * np.einsum("ia,jb,ijk->abk", b, b, m.algebra.constants)
    diff = nab - half
    norms = np.sqrt(np.maximum(np.einsum("abi,ij,abj->ab", diff, m.gram, diff), 0.0))
    a, c = np.unravel_index(int(np.argmax(norms)), norms.shape)
    return float(norms[a, c]), (int(a), int(c))


def check_half_bracket(
    m: MetricLieAlgebra,
    tol: float = DEFAULT_TOL,
    normalize: bool = True,
    require_two_step: bool = True,
) -> CheckReport:
    """Check nabla_X Y = [X, Y]/2 on Z(g)-perp.

    With ``require_two_step=False`` the same residual is computed for any
    algebra, which is how the identity is shown to fail beyond step 2.
    """
    two_step = lie_core.is_two_step(m.algebra)
    if require_two_step and not two_step:
        raise NotTwoStep("half-bracket formula requires a 2-step nilpotent algebra")
    mm = _scaled(m, normalize)
    residual, witness = half_bracket_residual(mm)
    report = CheckReport(tol)
    report.add("half_bracket", residual, witness, blocking=two_step,
               note="" if two_step else "algebra is not 2-step; formula not expected to hold")
    return report


def is_ad_skew_adjoint(m: MetricLieAlgebra, x, tol: float = DEFAULT_TOL, normalize: bool = True) -> CheckReport:
    """max |<[x,Y],Z> + <Y,[x,Z]>| over basis pairs (Y, Z)."""
    mm = _scaled(m, normalize)
    x = np.asarray(x, dtype=float)
    ad = lie_core.ad_matrix(mm.algebra, x)
    sym = ad.T @ mm.gram + mm.gram @ ad
    idx = np.unravel_index(int(np.argmax(np.abs(sym))), sym.shape)
    report = CheckReport(tol)
    report.add("ad_skew", float(np.abs(sym).max()), (int(idx[0]), int(idx[1])))
    return report


def is_bi_invariant(m: MetricLieAlgebra, tol: float = DEFAULT_TOL, normalize: bool = True) -> CheckReport:
    """ad(e_i) skew-adjoint for every basis vector; enough by linearity in x."""
    report = CheckReport(tol)
    worst, witness = 0.0, None
    for i in range(m.dim):
        r = is_ad_skew_adjoint(m, np.eye(m.dim)[i], tol, normalize)["ad_skew"].residual
        if r > worst:
            worst, witness = r, i
    report.add("bi_invariant", worst, witness)
    return report
