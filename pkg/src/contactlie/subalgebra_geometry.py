"""Subalgebras of a metric Lie algebra treated as submanifolds.

Everything is evaluated on left-invariant fields, so the second fundamental
form, shape operator and the tangential/normal parts of phi are finite
matrices. Vectors are always given in ambient coordinates.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
import scipy.linalg

from . import lie_core
from .contact_structures import AlmostContactStructure
from .errors import DependentBasis, NoStructure, NotClosed, NotNormal, NotTangent, ZeroVector
from .lie_core import _frozen
from .metric_connection import MetricLieAlgebra
from .report import DEFAULT_TOL, CheckReport

CLUSTER_TOL = 1e-7


class OpenSubspaceWarning(UserWarning):
    """A Gauss/Weingarten split was taken along a span that is not a subalgebra."""


@dataclass(frozen=True, eq=False)
class Subalgebra:
    """G-orthonormal basis (columns of ``basis``) of a subspace of ``ambient``.

    ``closure_residual`` is the largest normal component of a bracket of two
    basis columns; ``closed`` records whether it is within tolerance.
    """

    ambient: MetricLieAlgebra
    basis: np.ndarray
    structure: Optional[AlmostContactStructure] = None
    closure_residual: float = 0.0
    closure_witness: Optional[tuple[int, int]] = None
    closed: bool = True
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "basis", _frozen(self.basis))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def n(self) -> int:
        return self.ambient.dim

    @cached_property
    def normal_basis(self) -> np.ndarray:
        sub = lie_core.Subspace(self.n, self.basis)
        return lie_core.orthogonal_complement(sub, self.ambient.gram).basis

    @cached_property
    def _coords(self) -> np.ndarray:
        # x -> coordinates of its tangent part in the orthonormal basis
        return self.basis.T @ self.ambient.gram

    def require_structure(self) -> AlmostContactStructure:
        if self.structure is None:
            raise NoStructure("ambient algebra carries no almost contact structure")
        return self.structure


def orthonormalize(
    ambient: MetricLieAlgebra,
    raw_basis,
    structure: AlmostContactStructure = None,
    tol: float = DEFAULT_TOL,
    require_closed: bool = True,
    name: str = "",
) -> Subalgebra:
    """Gram-Schmidt ``raw_basis`` (columns) in the ambient metric.

    Raises ``DependentBasis`` for dependent columns and ``NotClosed`` when the
    span is not a subalgebra, unless ``require_closed`` is false, in which
    case the result is flagged ``closed=False``.
    """
    raw = np.asarray(raw_basis, dtype=float)
    if raw.ndim == 1:
        raw = raw[:, None]
    n = ambient.dim
    if raw.shape[0] != n:
        raise DependentBasis(f"basis vectors must have length {n}")
    g = ambient.gram
    cols: list[np.ndarray] = []
    for a in range(raw.shape[1]):
        v = raw[:, a].copy()
        start = np.sqrt(v @ g @ v)
        for _ in range(2):
            for q in cols:
                v -= (q @ g @ v) * q
        nv = np.sqrt(max(v @ g @ v, 0.0))
        if start == 0.0 or nv <= 1e-9 * start:
            raise DependentBasis(f"column {a} is dependent on the preceding columns")
        cols.append(v / nv)
    basis = np.column_stack(cols) if cols else np.zeros((n, 0))

    worst, witness = 0.0, None
    c = ambient.algebra.constants
    if basis.shape[1] >= 2:
        br = np.einsum("ia,jb,ijk->abk", basis, basis, c)
        tangent = np.einsum("kc,cab->abk", basis, np.einsum("ci,abi->cab", basis.T @ g, br))
        normal = br - tangent
        norms = np.sqrt(np.maximum(np.einsum("abi,ij,abj->ab", normal, g, normal), 0.0))
        a, b = np.unravel_index(int(np.argmax(norms)), norms.shape)
        worst, witness = float(norms[a, b]), (int(min(a, b)), int(max(a, b)))
    closed = worst <= tol
    if require_closed and not closed:
        raise NotClosed(worst, witness)
    return Subalgebra(ambient, basis, structure, worst, witness if not closed else None, closed, name)


def project(s: Subalgebra, x):
    """G-orthogonal split ``x = tangent + normal``."""
    x = np.asarray(x, dtype=float)
    tangent = s.basis @ (s._coords @ x)
    return tangent, x - tangent


def _require_tangent(s: Subalgebra, x, what="x"):
    x = np.asarray(x, dtype=float)
    _, nor = project(s, x)
    if s.ambient.norm(nor) > 1e-9 * max(1.0, s.ambient.norm(x)):
        raise NotTangent(f"{what} is not tangent to the subalgebra")
    return x


def _require_normal(s: Subalgebra, v, what="v"):
    v = np.asarray(v, dtype=float)
    tan, _ = project(s, v)
    if s.ambient.norm(tan) > 1e-9 * max(1.0, s.ambient.norm(v)):
        raise NotNormal(f"{what} is not normal to the subalgebra")
    return v


def _warn_open(s: Subalgebra):
    if not s.closed:
        warnings.warn(
            f"span is not closed under the bracket (residual {s.closure_residual:.3g})",
            OpenSubspaceWarning,
            stacklevel=3,
        )


def _ambient_nabla(s: Subalgebra, x, y):
    return np.einsum("i,j,ijk->k", x, y, s.ambient.connection.coeffs)


def gauss_decompose(s: Subalgebra, x, y):
    """Split the ambient covariant derivative: ``(nabla_x y, h(x, y))``."""
    x = _require_tangent(s, x, "x")
    y = _require_tangent(s, y, "y")
    _warn_open(s)
    return project(s, _ambient_nabla(s, x, y))


def second_fundamental_form(s: Subalgebra, x, y) -> np.ndarray:
    return gauss_decompose(s, x, y)[1]


def induced_nabla(s: Subalgebra, x, y) -> np.ndarray:
    return gauss_decompose(s, x, y)[0]


def weingarten(s: Subalgebra, v, x):
    """``(A_v x, nabla^perp_x v)`` from the split of the ambient derivative."""
    v = _require_normal(s, v)
    x = _require_tangent(s, x)
    _warn_open(s)
    tan, nor = project(s, _ambient_nabla(s, x, v))
    return -tan, nor


def normal_connection(s: Subalgebra, x, v) -> np.ndarray:
    return weingarten(s, v, x)[1]


def duality_residual(s: Subalgebra) -> float:
    """max |<A_v x, y> - <h(x, y), v>| over tangent pairs and normal basis vectors.

    The two sides come from separate evaluations (the ambient derivative of
    the normal vector versus that of the tangent one).
    """
    b, nb, g = s.basis, s.normal_basis, s.ambient.gram
    if b.shape[1] == 0 or nb.shape[1] == 0:
        return 0.0
    gam = s.ambient.connection.coeffs
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", OpenSubspaceWarning)
        for a in range(b.shape[1]):
            for c in range(b.shape[1]):
                x, y = b[:, a], b[:, c]
                h = project(s, np.einsum("i,j,ijk->k", x, y, gam))[1]
                for v in nb.T:
                    shape = -project(s, np.einsum("i,j,ijk->k", x, v, gam))[0]
                    worst = max(worst, abs(shape @ g @ y - h @ g @ v))
    return float(worst)


def reconstruction_residual(s: Subalgebra) -> float:
    """max |induced + h - ambient nabla| over tangent basis pairs."""
    b = s.basis
    gam = s.ambient.connection.coeffs
    worst = 0.0
    for x in b.T:
        for y in b.T:
            amb = np.einsum("i,j,ijk->k", x, y, gam)
            tan, nor = project(s, amb)
            worst = max(worst, float(np.abs(tan + nor - amb).max()))
    return worst


def second_fundamental_symmetry(s: Subalgebra) -> float:
    """max ||h(x, y) - h(y, x)||; vanishes on a closed subalgebra."""
    b = s.basis
    gam = s.ambient.connection.coeffs
    worst = 0.0
    for x in b.T:
        for y in b.T:
            hxy = project(s, np.einsum("i,j,ijk->k", x, y, gam))[1]
            hyx = project(s, np.einsum("i,j,ijk->k", y, x, gam))[1]
            worst = max(worst, s.ambient.norm(hxy - hyx))
    return worst


def phi_split(s: Subalgebra, x):
    """``(Psi x, Gamma x)``: tangential and normal parts of phi x, x tangent."""
    st = s.require_structure()
    x = _require_tangent(s, x)
    return project(s, st.phi @ x)


def phi_split_normal(s: Subalgebra, v):
    """``(psi v, gamma v)``: tangential and normal parts of phi v, v normal."""
    st = s.require_structure()
    v = _require_normal(s, v)
    return project(s, st.phi @ v)


def psi_matrix(s: Subalgebra) -> np.ndarray:
    """Psi in the orthonormal subalgebra basis (m x m)."""
    st = s.require_structure()
    return s._coords @ st.phi @ s.basis


def gamma_gram(s: Subalgebra) -> np.ndarray:
    """``out[a, b] = <Gamma b_a, Gamma b_b>``."""
    st = s.require_structure()
    _, nor = project(s, st.phi @ s.basis)
    return nor.T @ s.ambient.gram @ nor


def _clusters(values, gap=CLUSTER_TOL):
    groups: list[list[float]] = []
    for v in sorted(values):
        if groups and v - groups[-1][-1] <= gap:
            groups[-1].append(v)
        else:
            groups.append([v])
    return groups


@dataclass(frozen=True, eq=False)
class QSpectrum:
    q: np.ndarray
    eigenvalues: np.ndarray
    clusters: list
    report: CheckReport


def q_operator(s: Subalgebra, tol: float = DEFAULT_TOL, cluster_tol: float = CLUSTER_TOL) -> QSpectrum:
    """Q = Psi^2 on the subalgebra, its spectrum and the spectral checks."""
    psi = psi_matrix(s)
    q = psi @ psi
    report = CheckReport(tol)
    report.add("psi_skew", float(np.abs(psi + psi.T).max()) if psi.size else 0.0)
    report.add("q_self_adjoint", float(np.abs(q - q.T).max()) if q.size else 0.0)
    evals = np.linalg.eigvalsh(0.5 * (q + q.T)) if q.size else np.zeros(0)
    out_of_range = 0.0
    if evals.size:
        out_of_range = max(0.0, float(-1.0 - evals.min()), float(evals.max()))
    report.add("q_spectrum_range", out_of_range)
    groups = _clusters(evals.tolist(), cluster_tol)
    odd = [g for g in groups if abs(float(np.mean(g))) > tol and len(g) % 2]
    report.add("q_even_multiplicity", float(len(odd)),
               witness=[float(np.mean(g)) for g in odd] or None)
    clusters = [(float(np.mean(g)), len(g)) for g in groups]
    return QSpectrum(q, evals, clusters, report)


def operator_covariant_derivative(s: Subalgebra, which: str, x, y) -> np.ndarray:
    """(nabla_x T) y for T in {"Psi", "Q", "N"}, with N the normal part Gamma of phi.

    The Psi and Q cases use the induced connection throughout; the N case
    differentiates ``N y`` with the normal connection.
    """
    st = s.require_structure()
    x = _require_tangent(s, x, "x")
    y = _require_tangent(s, y, "y")

    def induced(u, w):
        return project(s, _ambient_nabla(s, u, w))[0]

    def psi(w):
        return project(s, st.phi @ w)[0]

    def gamma(w):
        return project(s, st.phi @ w)[1]

    if which == "Psi":
        return induced(x, psi(y)) - psi(induced(x, y))
    if which == "Q":
        return induced(x, psi(psi(y))) - psi(psi(induced(x, y)))
    if which == "N":
        return project(s, _ambient_nabla(s, x, gamma(y)))[1] - gamma(induced(x, y))
    raise ValueError(f"unknown operator {which!r}; expected 'Psi', 'Q' or 'N'")


def wirtinger_angle(s: Subalgebra, x, tol: float = DEFAULT_TOL) -> Optional[float]:
    """Angle between phi x and the subalgebra, or ``None`` where phi x vanishes.

    Computed as ``atan2(|Gamma x|, |Psi x|)``, which equals
    ``arccos(|Psi x| / |phi x|)`` but keeps full precision near 0 and pi/2.
    """
    st = s.require_structure()
    x = _require_tangent(s, x)
    nx = s.ambient.norm(x)
    if nx == 0.0:
        raise ZeroVector("Wirtinger angle of the zero vector")
    tan, nor = project(s, st.phi @ x)
    if s.ambient.norm(st.phi @ x) <= tol * nx:
        return None
    return float(np.arctan2(s.ambient.norm(nor), s.ambient.norm(tan)))


class SlantKind(enum.Enum):
    SLANT = "slant"
    NOT_SLANT = "not_slant"
    DEGENERATE = "degenerate_all_undefined"


@dataclass(frozen=True, eq=False)
class SlantResult:
    kind: SlantKind
    angle: Optional[float] = None
    witness: Optional[tuple[np.ndarray, np.ndarray]] = None
    angle_range: Optional[tuple[float, float]] = None


def is_slant(s: Subalgebra, samples: int = 64, seed: int = 0, tol: float = DEFAULT_TOL) -> SlantResult:
    """Decide whether the Wirtinger angle is constant on the subalgebra.

    ``|Psi x|^2 / |phi x|^2`` is the Rayleigh quotient of the pencil
    ``(-Q, K)`` with ``K`` the Gram form of phi on the subalgebra, so its
    extreme generalized eigenvectors realise the extreme angles. The angle
    spread over those directions decides; random unit vectors corroborate.
    """
    st = s.require_structure()
    m = s.dim
    if m == 0:
        return SlantResult(SlantKind.DEGENERATE)
    phib = st.phi @ s.basis
    k = phib.T @ s.ambient.gram @ phib
    k = 0.5 * (k + k.T)
    kvals, kvecs = np.linalg.eigh(k)
    keep = kvals > tol
    if not keep.any():
        return SlantResult(SlantKind.DEGENERATE)
    w = kvecs[:, keep]
    neg_q = -psi_matrix(s) @ psi_matrix(s)
    a = w.T @ (0.5 * (neg_q + neg_q.T)) @ w
    bmat = w.T @ k @ w
    _, gvecs = scipy.linalg.eigh(0.5 * (a + a.T), 0.5 * (bmat + bmat.T))
    directions = [s.basis @ (w @ gvecs[:, i]) for i in range(gvecs.shape[1])]
    angles = [wirtinger_angle(s, d, tol) for d in directions]
    pairs = [(ang, d) for ang, d in zip(angles, directions) if ang is not None]
    lo = min(pairs, key=lambda p: p[0])
    hi = max(pairs, key=lambda p: p[0])
    if hi[0] - lo[0] > tol:
        return SlantResult(SlantKind.NOT_SLANT, None, (lo[1], hi[1]), (lo[0], hi[0]))

    theta = float(np.mean([p[0] for p in pairs]))
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = s.basis @ rng.standard_normal(m)
        ang = wirtinger_angle(s, x, tol)
        if ang is not None and abs(ang - theta) > tol:
            return SlantResult(SlantKind.NOT_SLANT, None, (x, lo[1]), (min(ang, lo[0]), max(ang, hi[0])))
    return SlantResult(SlantKind.SLANT, theta, None, (lo[0], hi[0]))


def xi_decomposition(s: Subalgebra):
    """Tangent and normal parts of xi with a label: tangent, normal or oblique."""
    st = s.require_structure()
    tan, nor = project(s, st.xi)
    nt, nn = s.ambient.norm(tan), s.ambient.norm(nor)
    if nn <= 1e-9:
        kind = "tangent"
    elif nt <= 1e-9:
        kind = "normal"
    else:
        kind = "oblique"
    return tan, nor, kind
