"""Reference computations that share no code path with the package.

Everything here is written with explicit loops or generic linear solves, so
agreement with the vectorised implementation is meaningful.
"""

import itertools

import numpy as np


def bracket_loops(c, x, y):
    n = len(x)
    out = np.zeros(n)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                out[k] += x[i] * y[j] * c[i][j][k]
    return out


def jacobi_loops(c):
    n = len(c)
    e = np.eye(n)
    worst = 0.0
    for i, j, k in itertools.product(range(n), repeat=3):
        br = lambda a, b: bracket_loops(c, a, b)  # noqa: E731
        s = br(e[i], br(e[j], e[k])) + br(e[k], br(e[i], e[j])) + br(e[j], br(e[k], e[i]))
        worst = max(worst, np.abs(s).max())
    return worst


def connection_by_constraints(c, g):
    """Solve torsion-free + metric-compatible as one linear system in n^3 unknowns."""
    c = np.asarray(c, dtype=float)
    g = np.asarray(g, dtype=float)
    n = c.shape[0]
    idx = lambda i, j, k: (i * n + j) * n + k  # noqa: E731
    rows, rhs = [], []
    for i, j, k in itertools.product(range(n), repeat=3):
        r = np.zeros(n ** 3)
        r[idx(i, j, k)] += 1.0
        r[idx(j, i, k)] -= 1.0
        rows.append(r)
        rhs.append(c[i, j, k])
    for i, j, k in itertools.product(range(n), repeat=3):
        r = np.zeros(n ** 3)
        for l in range(n):
            r[idx(i, j, l)] += g[l, k]
            r[idx(i, k, l)] += g[j, l]
        rows.append(r)
        rhs.append(0.0)
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return sol.reshape(n, n, n)


def random_spd(n, rng, cond=10.0):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    d = np.exp(rng.uniform(0, np.log(cond), n))
    g = q @ np.diag(d) @ q.T
    return 0.5 * (g + g.T)


def random_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def signed_permutation(n, rng):
    p = np.eye(n)[:, rng.permutation(n)]
    return p * rng.choice([-1.0, 1.0], n)
