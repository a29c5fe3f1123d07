"""Finite-dimensional real Lie algebras given by structure constants.

Conventions: basis indices are 0-based and ``constants[i, j, k]`` is the
coefficient of ``e_k`` in ``[e_i, e_j]``. Subspaces carry their basis as the
columns of an ``n x m`` matrix.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import AntisymmetryError, DimensionError, NotTwoStep

RANK_RTOL = 1e-9


def rank_tol(singular_values) -> float:
    """Threshold below which a singular value counts as zero."""
    s = np.asarray(singular_values, dtype=float)
    smax = float(s.max()) if s.size else 0.0
    return RANK_RTOL * max(1.0, smax)


def numerical_rank(matrix) -> int:
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    return int(np.sum(s > rank_tol(s)))


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _canonical_columns(orthonormal: np.ndarray) -> np.ndarray:
    """Deterministic Euclidean-orthonormal basis for the span of ``orthonormal``.

    Standard basis vectors are projected onto the span and Gram-Schmidt'ed
    greedily (largest residual first, lowest index on ties), so coordinate
    subspaces come back as coordinate vectors.
    """
    n, d = orthonormal.shape
    if d == 0:
        return np.zeros((n, 0))
    projected = orthonormal @ orthonormal.T
    chosen: list[np.ndarray] = []
    for _ in range(d):
        residuals = projected.copy()
        for q in chosen:
            residuals -= np.outer(q, q @ residuals)
        norms = np.linalg.norm(residuals, axis=0)
        best = int(np.argmax(norms >= norms.max() - 1e-12))
        chosen.append(residuals[:, best] / norms[best])
    out = np.column_stack(chosen)
    out[np.abs(out) < 1e-15] = 0.0
    return out


def _range_basis(matrix: np.ndarray) -> np.ndarray:
    n = matrix.shape[0]
    if matrix.size == 0:
        return np.zeros((n, 0))
    u, s, _ = np.linalg.svd(matrix, full_matrices=False)
    r = int(np.sum(s > rank_tol(s)))
    return _canonical_columns(u[:, :r])


def _null_basis(matrix: np.ndarray, n: int) -> np.ndarray:
    if matrix.size == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(matrix, full_matrices=True)
    r = int(np.sum(s > rank_tol(s)))
    return _canonical_columns(vt[r:].T)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of R^n, basis stored as columns."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float).reshape(self.ambient_dim, -1)
        if basis.shape[1] > 0:
            s = np.linalg.svd(basis, compute_uv=False)
            if s.min() <= rank_tol(s):
                raise DimensionError("subspace basis is linearly dependent")
        object.__setattr__(self, "basis", _frozen(basis))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def contains(self, x, tol=1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if self.dim == 0:
            return bool(np.linalg.norm(x) <= tol)
        coef, *_ = np.linalg.lstsq(self.basis, x, rcond=None)
        return bool(np.linalg.norm(self.basis @ coef - x) <= tol * max(1.0, np.linalg.norm(x)))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Real Lie algebra with structure constants ``constants[i, j, k]``.

    Only the ``i < j`` entries are kept; the rest of the tensor is rebuilt by
    reflection so antisymmetry holds exactly. A full tensor passed in must be
    antisymmetric to 1e-12 or ``AntisymmetryError`` is raised.
    """

    constants: np.ndarray
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        c = np.asarray(self.constants, dtype=float)
        if c.ndim != 3 or c.shape[0] != c.shape[1] or c.shape[1] != c.shape[2] or c.shape[0] < 1:
            raise DimensionError(f"structure constants must have shape (n, n, n), got {c.shape}")
        n = c.shape[0]
        scale = max(1.0, float(np.abs(c).max()))
        if np.abs(c + c.transpose(1, 0, 2)).max() > 1e-12 * scale:
            raise AntisymmetryError("structure constants are not antisymmetric in (i, j)")
        upper = np.triu(np.ones((n, n), dtype=bool), k=1)
        full = np.where(upper[:, :, None], c, 0.0)
        full = full - full.transpose(1, 0, 2)
        object.__setattr__(self, "constants", _frozen(full))
        labels = tuple(self.labels) if self.labels is not None else tuple(f"e{i + 1}" for i in range(n))
        if len(labels) != n:
            raise DimensionError(f"expected {n} labels, got {len(labels)}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, labels=None) -> LieAlgebra:
        """Build from ``{(i, j): {k: coeff}}`` with 0-based ``i < j``."""
        c = np.zeros((dim, dim, dim))
        for (i, j), coeffs in brackets.items():
            for k, v in coeffs.items():
                c[i, j, k] += v
                c[j, i, k] -= v
        return cls(c, labels)

    @classmethod
    def abelian(cls, dim: int) -> LieAlgebra:
        return cls(np.zeros((dim, dim, dim)))

    @property
    def dim(self) -> int:
        return self.constants.shape[0]

    def normalized(self) -> tuple[LieAlgebra, float]:
        """Copy with ``max|C| = 1`` and the factor divided out."""
        scale = float(np.abs(self.constants).max())
        if scale == 0.0:
            return self, 1.0
        return LieAlgebra(self.constants / scale, self.labels), scale

    def change_basis(self, p) -> LieAlgebra:
        """Constants in the basis ``f_a = sum_i p[i, a] e_i``."""
        p = np.asarray(p, dtype=float)
        pinv = np.linalg.inv(p)
        c = np.einsum("ia,jb,ijl,kl->abk", p, p, self.constants, pinv)
        c = c - c.transpose(1, 0, 2)
        return LieAlgebra(0.5 * c)

    def direct_sum(self, other: LieAlgebra) -> LieAlgebra:
        n, m = self.dim, other.dim
        c = np.zeros((n + m,) * 3)
        c[:n, :n, :n] = self.constants
        c[n:, n:, n:] = other.constants
        return LieAlgebra(c)


def _check_vec(a: LieAlgebra, x, name="x"):
    x = np.asarray(x, dtype=float)
    if x.shape != (a.dim,):
        raise DimensionError(f"{name} must have length {a.dim}, got shape {x.shape}")
    return x


def bracket(a: LieAlgebra, x, y) -> np.ndarray:
    x = _check_vec(a, x, "x")
    y = _check_vec(a, y, "y")
    return np.einsum("i,j,ijk->k", x, y, a.constants)


def ad_matrix(a: LieAlgebra, x) -> np.ndarray:
    """Matrix of ``y -> [x, y]``; column ``j`` is ``[x, e_j]``."""
    x = _check_vec(a, x)
    return np.einsum("i,ijk->kj", x, a.constants)


def jacobi_residual(a: LieAlgebra) -> float:
    """Largest sup-norm of the cyclic Jacobi sum over basis triples."""
    c = a.constants
    # dd[i, j, k] = [e_i, [e_j, e_k]]
    dd = np.einsum("jkl,ilm->ijkm", c, c)
    cyclic = dd + dd.transpose(2, 0, 1, 3) + dd.transpose(1, 2, 0, 3)
    return float(np.abs(cyclic).max()) if cyclic.size else 0.0


def _bracket_span(a: LieAlgebra, basis: np.ndarray) -> np.ndarray:
    """Columns spanning [g, span(basis)]."""
    if basis.shape[1] == 0:
        return np.zeros((a.dim, 0))
    # images[k, i, b] = component k of [e_i, basis_b]
    images = np.einsum("ijk,jb->kib", a.constants, basis)
    return images.reshape(a.dim, -1)


def lower_central_series(a: LieAlgebra) -> list[Subspace]:
    """Terms g, [g, g], [g, [g, g]], ... until the dimension stops dropping.

    The last term is either zero or the first repeated term.
    """
    n = a.dim
    series = [Subspace(n, np.eye(n))]
    while series[-1].dim > 0:
        nxt = _range_basis(_bracket_span(a, series[-1].basis))
        if nxt.shape[1] == series[-1].dim:
            break
        series.append(Subspace(n, nxt))
    return series


def nilpotency_class(a: LieAlgebra) -> Optional[int]:
    """Smallest ``c`` with ``g^c = 0``; ``None`` if the series stalls above zero."""
    series = lower_central_series(a)
    if series[-1].dim != 0:
        return None
    return len(series) - 1


def is_nilpotent(a: LieAlgebra) -> bool:
    return nilpotency_class(a) is not None


def is_two_step(a: LieAlgebra) -> bool:
    # abelian algebras are excluded: [g, g] must be nonzero
    return nilpotency_class(a) == 2


def center(a: LieAlgebra) -> Subspace:
    n = a.dim
    # row block j holds the matrix of x -> [x, e_j]
    stacked = np.einsum("ijk->jki", a.constants).reshape(n * n, n)
    return Subspace(n, _null_basis(stacked, n))


def orthogonal_complement(sub: Subspace, gram=None) -> Subspace:
    """Complement with respect to ``gram`` (identity if omitted), G-orthonormal."""
    n = sub.ambient_dim
    g = np.eye(n) if gram is None else np.asarray(gram, dtype=float)
    b = sub.basis
    if b.shape[1]:
        proj = np.eye(n) - b @ np.linalg.solve(b.T @ g @ b, b.T @ g)
    else:
        proj = np.eye(n)
    target = n - sub.dim
    chosen: list[np.ndarray] = []
    candidates = proj.copy()
    for _ in range(target):
        residuals = candidates.copy()
        for q in chosen:
            residuals -= np.outer(q, q @ g @ residuals)
        norms = np.sqrt(np.maximum(np.einsum("ia,ij,ja->a", residuals, g, residuals), 0.0))
        best = int(np.argmax(norms >= norms.max() - 1e-12))
        chosen.append(residuals[:, best] / norms[best])
    basis = np.column_stack(chosen) if chosen else np.zeros((n, 0))
    basis[np.abs(basis) < 1e-15] = 0.0
    return Subspace(n, basis)


class Nonsingularity(enum.Enum):
    NONSINGULAR = "nonsingular"
    PROBABLY_NONSINGULAR = "probably_nonsingular"
    SINGULAR = "singular"


@dataclass(frozen=True, eq=False)
class NonsingularityResult:
    verdict: Nonsingularity
    witness: Optional[np.ndarray] = None
    tested: int = 0

    @property
    def singular(self) -> bool:
        return self.verdict is Nonsingularity.SINGULAR


def is_nonsingular(a: LieAlgebra, gram=None, samples: int = 64, seed: int = 0) -> NonsingularityResult:
    """Test whether ``ad x`` maps g onto Z(g) for every nonzero x in Z(g)-perp.

    Basis vectors of the complement are tried first, then ``samples`` random
    unit vectors. A failure returns the offending x. When the complement is a
    line, or the center is a line (then the condition is linear in x), the
    answer is exact; otherwise a clean run is only ``PROBABLY_NONSINGULAR``.
    """
    if not is_two_step(a):
        raise NotTwoStep("nonsingularity is defined for 2-step nilpotent algebras")
    n = a.dim
    g = np.eye(n) if gram is None else np.asarray(gram, dtype=float)
    z = center(a)
    perp = orthogonal_complement(z, g).basis

    def fails(x):
        return numerical_rank(ad_matrix(a, x)) < z.dim

    tested = 0
    for col in perp.T:
        tested += 1
        if fails(col):
            return NonsingularityResult(Nonsingularity.SINGULAR, col.copy(), tested)

    if perp.shape[1] == 1:
        return NonsingularityResult(Nonsingularity.NONSINGULAR, None, tested)

    if z.dim == 1:
        # ad_x != 0 is linear in x: inject x -> ad_x on the complement
        lin = np.einsum("ia,ijk->kja", perp, a.constants).reshape(n * n, -1)
        kernel = _null_basis(lin, perp.shape[1])
        if kernel.shape[1]:
            x = perp @ kernel[:, 0]
            x = x / np.sqrt(x @ g @ x)
            return NonsingularityResult(Nonsingularity.SINGULAR, x, tested)
        return NonsingularityResult(Nonsingularity.NONSINGULAR, None, tested)

    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = perp @ rng.standard_normal(perp.shape[1])
        x = x / np.sqrt(x @ g @ x)
        tested += 1
        if fails(x):
            return NonsingularityResult(Nonsingularity.SINGULAR, x, tested)
    return NonsingularityResult(Nonsingularity.PROBABLY_NONSINGULAR, None, tested)


def structure_pairs(n: int) -> Sequence[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))
