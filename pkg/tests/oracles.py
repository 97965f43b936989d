"""Independent brute-force oracles used to pin expected values.

Everything here is deliberately written as plain double loops over
table cells, sharing no code with the library implementations.
"""

from __future__ import annotations

import math

import numpy as np


def npmi_bruteforce(matrix: np.ndarray) -> np.ndarray:
    rows, cols = matrix.shape
    pa = [sum(matrix[a][b] for b in range(cols)) for a in range(rows)]
    pb = [sum(matrix[a][b] for a in range(rows)) for b in range(cols)]
    out = np.empty((rows, cols))
    for a in range(rows):
        for b in range(cols):
            pab = matrix[a][b]
            if pab == 0:
                out[a][b] = -1.0
            elif pab >= 1.0:
                out[a][b] = 0.0
            else:
                out[a][b] = math.log(pab / (pa[a] * pb[b])) / -math.log(pab)
    return out


def entropy_bruteforce(marginal) -> float:
    return -sum(p * math.log(p) for p in marginal if p > 0)


def mi_bruteforce(matrix: np.ndarray) -> float:
    rows, cols = matrix.shape
    pa = [sum(matrix[a][b] for b in range(cols)) for a in range(rows)]
    pb = [sum(matrix[a][b] for a in range(rows)) for b in range(cols)]
    total = 0.0
    for a in range(rows):
        for b in range(cols):
            pab = matrix[a][b]
            if pab > 0:
                total += pab * math.log(pab / (pa[a] * pb[b]))
    return total


def nmi_bruteforce(matrix: np.ndarray) -> float:
    rows, cols = matrix.shape
    pa = [sum(matrix[a][b] for b in range(cols)) for a in range(rows)]
    pb = [sum(matrix[a][b] for a in range(rows)) for b in range(cols)]
    return 2.0 * mi_bruteforce(matrix) / (entropy_bruteforce(pa) + entropy_bruteforce(pb))


def kl_bruteforce(p, q) -> float:
    total = 0.0
    for pi, qi in zip(p, q):
        if pi > 0:
            if qi == 0:
                return math.inf
            total += pi * math.log(pi / qi)
    return total


def dirichlet_mean(alpha: np.ndarray) -> np.ndarray:
    return alpha / alpha.sum()


def dirichlet_var(alpha: np.ndarray) -> np.ndarray:
    a0 = alpha.sum()
    return alpha * (a0 - alpha) / (a0**2 * (a0 + 1.0))


def random_joint(rng: np.random.Generator, rows: int, cols: int, sparsity: float = 0.0) -> np.ndarray:
    """Random normalized nonnegative table, optionally with zero cells."""
    m = rng.random((rows, cols))
    if sparsity > 0:
        m[rng.random((rows, cols)) < sparsity] = 0.0
        if m.sum() == 0:
            m[0, 0] = 1.0
    return m / m.sum()
