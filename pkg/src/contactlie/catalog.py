"""Built-in example algebras addressable by name."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .contact_structures import AlmostContactStructure
from .errors import InvalidParameter
from .lie_core import LieAlgebra
from .metric_connection import MetricLieAlgebra


@dataclass(frozen=True, eq=False)
class NamedExample:
    name: str
    algebra: LieAlgebra
    metric: MetricLieAlgebra
    structures: list = field(default_factory=list)
    # (name, n x m raw basis with columns spanning the subspace)
    subalgebras: list = field(default_factory=list)

    def structure(self, name=None) -> AlmostContactStructure:
        if not self.structures:
            raise KeyError(f"{self.name} bundles no structure")
        if name is None:
            return self.structures[0]
        for s in self.structures:
            if s.name == name:
                return s
        raise KeyError(name)

    def subalgebra_basis(self, name) -> np.ndarray:
        for key, basis in self.subalgebras:
            if key == name:
                return basis
        raise KeyError(name)


def rotation_phi(n: int, pairs: int) -> np.ndarray:
    """phi with e_{2i-1} -> e_{2i}, e_{2i} -> -e_{2i-1} for the first ``pairs`` blocks."""
    phi = np.zeros((n, n))
    for i in range(pairs):
        a, b = 2 * i, 2 * i + 1
        phi[b, a] = 1.0
        phi[a, b] = -1.0
    return phi


def _unit(n, i):
    e = np.zeros(n)
    e[i] = 1.0
    return e


def _cols(*vectors):
    return np.column_stack(vectors)


def heisenberg(k: int, c: float = 1.0) -> NamedExample:
    """Heisenberg algebra of dimension 2k+1 with [e_{2i-1}, e_{2i}] = c e_{2k+1}."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidParameter(f"k must be a positive integer, got {k!r}")
    if c == 0 or not math.isfinite(c):
        raise InvalidParameter(f"c must be finite and nonzero, got {c!r}")
    n = 2 * k + 1
    algebra = LieAlgebra.from_brackets(n, {(2 * i, 2 * i + 1): {n - 1: float(c)} for i in range(k)})
    metric = MetricLieAlgebra(algebra)
    standard = AlmostContactStructure(rotation_phi(n, k), _unit(n, n - 1), "standard")
    e = [_unit(n, i) for i in range(n)]
    subs = [
        ("e1e3", _cols(e[0], e[n - 1])),
        ("e1e2", _cols(e[0], e[1])),
        ("center", _cols(e[n - 1])),
    ]
    if k >= 2:
        subs.append(("e1e3-iso", _cols(e[0], e[2])))
    name = f"heisenberg-{k}-{c:g}"
    return NamedExample(name, algebra, metric, [standard], subs)


def _slant_plane(n, theta):
    e1 = _unit(n, 0)
    u = math.cos(theta) * _unit(n, 1) + math.sin(theta) * _unit(n, 3)
    return _cols(e1, u)


def abelian(n: int) -> NamedExample:
    """Abelian algebra; odd ``n`` bundles the rotation-block structure with xi = e_n."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidParameter(f"n must be a positive integer, got {n!r}")
    algebra = LieAlgebra.abelian(n)
    metric = MetricLieAlgebra(algebra)
    structures = []
    if n % 2:
        structures.append(AlmostContactStructure(rotation_phi(n, n // 2), _unit(n, n - 1), "standard"))
    e = [_unit(n, i) for i in range(n)]
    subs = []
    if n >= 3:
        subs.append(("e1e3", _cols(e[0], e[2])))
        subs.append(("xi", _cols(e[n - 1])))
    if n >= 5:
        subs.extend([
            ("invariant", _cols(e[0], e[1])),
            ("slant-0", _slant_plane(n, 0.0)),
            ("slant-pi/4", _slant_plane(n, math.pi / 4)),
            ("slant-pi/2", _slant_plane(n, math.pi / 2)),
            ("e1e2e3", _cols(e[0], e[1], e[2])),
            ("e1e2xi", _cols(e[0], e[1], e[n - 1])),
        ])
    return NamedExample(f"abelian-{n}", algebra, metric, structures, subs)


def singular_two_step() -> NamedExample:
    """h3 + R: 2-step with a 2-dimensional center, singular."""
    h3 = LieAlgebra.from_brackets(3, {(0, 1): {2: 1.0}})
    algebra = h3.direct_sum(LieAlgebra.abelian(1))
    e = [_unit(4, i) for i in range(4)]
    subs = [("e1e3", _cols(e[0], e[2])), ("center", _cols(e[2], e[3]))]
    return NamedExample("singular-two-step", algebra, MetricLieAlgebra(algebra), [], subs)


def h3_plus_abelian2() -> NamedExample:
    """h3 + R^2 with a structure whose xi = e4 lies in the center."""
    h3 = LieAlgebra.from_brackets(3, {(0, 1): {2: 1.0}})
    algebra = h3.direct_sum(LieAlgebra.abelian(2))
    phi = np.zeros((5, 5))
    phi[1, 0], phi[0, 1] = 1.0, -1.0
    phi[4, 2], phi[2, 4] = 1.0, -1.0
    s = AlmostContactStructure(phi, _unit(5, 3), "central-xi")
    e = [_unit(5, i) for i in range(5)]
    subs = [("e1e3", _cols(e[0], e[2])), ("center", _cols(e[2], e[3], e[4]))]
    return NamedExample("h3+a2", algebra, MetricLieAlgebra(algebra), [s], subs)


def filiform4() -> NamedExample:
    """[e1, e2] = e3, [e1, e3] = e4: nilpotent of class 3."""
    algebra = LieAlgebra.from_brackets(4, {(0, 1): {2: 1.0}, (0, 2): {3: 1.0}})
    e = [_unit(4, i) for i in range(4)]
    subs = [("e3e4", _cols(e[2], e[3])), ("e2e3e4", _cols(e[1], e[2], e[3]))]
    return NamedExample("filiform4", algebra, MetricLieAlgebra(algebra), [], subs)


_ALIASES = {
    "h3": lambda: heisenberg(1, 1.0),
    "h3-sasakian": lambda: heisenberg(1, 2.0),
    "h5": lambda: heisenberg(2, 1.0),
    "h5-sasakian": lambda: heisenberg(2, 2.0),
    "singular-two-step": singular_two_step,
    "h3+a2": h3_plus_abelian2,
    "filiform4": filiform4,
}

_PATTERNS = [
    (re.compile(r"abelian-?(\d+)$"), lambda mt: abelian(int(mt.group(1)))),
    (re.compile(r"heisenberg-(\d+)-([-+0-9.eE]+)$"), lambda mt: heisenberg(int(mt.group(1)), float(mt.group(2)))),
]


def example_names() -> list[str]:
    return sorted(_ALIASES) + [f"abelian-{n}" for n in range(1, 8)]


def get_example(name: str) -> NamedExample:
    """Look up a bundled example, e.g. ``h3-sasakian``, ``abelian-5``, ``heisenberg-2-2``."""
    if name in _ALIASES:
        ex = _ALIASES[name]()
        return NamedExample(name, ex.algebra, ex.metric, ex.structures, ex.subalgebras)
    for pattern, build in _PATTERNS:
        mt = pattern.match(name)
        if mt:
            return build(mt)
    raise KeyError(f"unknown example {name!r}; known: {', '.join(example_names())}")


def all_examples() -> list[NamedExample]:
    return [get_example(n) for n in example_names()]
