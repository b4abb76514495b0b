"""Small dense linear solver.

The reconstruction systems in this package are tiny (at most 5x5 here, 2J x 2J
for J eigenvalues in general) but their entries can span many orders of
magnitude because they carry lattice exponentials.  Gaussian elimination with
scaled partial pivoting is robust for that; no external solver is needed and
the singularity test stays under our control.
"""

from __future__ import annotations

import numpy as np

from .errors import SingularSystemError

# A pivot below this fraction of its row's largest entry marks the system
# as numerically singular.
PIVOT_TOL = 1e-13


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ x = b by elimination with scaled partial pivoting.

    The matrix is first equilibrated with powers of two (exact in floating
    point): lattice exponentials make entries span hundreds of orders of
    magnitude, and without balancing a perfectly regular system looks
    singular to any relative pivot test.  Raises SingularSystemError
    (carrying a cheap condition estimate) when a pivot of the balanced
    matrix falls below PIVOT_TOL times the row scale.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = b.size

    col_max = np.max(np.abs(a), axis=0)
    if np.any(col_max == 0.0):
        raise SingularSystemError("zero column in system matrix")
    col_scale = np.exp2(-np.round(np.log2(col_max)))
    a *= col_scale
    row_max = np.max(np.abs(a), axis=1)
    if np.any(row_max == 0.0):
        raise SingularSystemError("zero row in system matrix")
    row_scale = np.exp2(-np.round(np.log2(row_max)))
    a *= row_scale[:, None]
    b = b * row_scale

    scale = np.max(np.abs(a), axis=1)

    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k]) / scale[k:]))
        if abs(a[p, k]) <= PIVOT_TOL * scale[p]:
            raise SingularSystemError(
                f"singular pivot at column {k}", condition=condition_estimate(a)
            )
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[[k, p]] = b[[p, k]]
            scale[[k, p]] = scale[[p, k]]
        m = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k + 1 :] -= np.outer(m, a[k, k + 1 :])
        b[k + 1 :] -= m * b[k]

    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
    return col_scale * x


def condition_estimate(a: np.ndarray) -> float:
    """Infinity-norm condition estimate; inf for a singular matrix.

    Matrices here are at most a few rows, so forming the inverse explicitly
    is cheaper than an iterative estimator.
    """
    a = np.asarray(a, dtype=float)
    try:
        inv = np.linalg.inv(a)
    except np.linalg.LinAlgError:
        return float("inf")
    norm = np.max(np.sum(np.abs(a), axis=1))
    inv_norm = np.max(np.sum(np.abs(inv), axis=1))
    return float(norm * inv_norm)


def balanced_condition_estimate(a: np.ndarray) -> float:
    """Condition estimate after the same equilibration solve() applies.

    This is the number that governs the accuracy of solve(); the raw
    condition of an exponentially scaled system says nothing useful.
    """
    a = np.array(a, dtype=float)
    col_max = np.max(np.abs(a), axis=0)
    if np.any(col_max == 0.0):
        return float("inf")
    a *= np.exp2(-np.round(np.log2(col_max)))
    row_max = np.max(np.abs(a), axis=1)
    if np.any(row_max == 0.0):
        return float("inf")
    a *= np.exp2(-np.round(np.log2(row_max)))[:, None]
    return condition_estimate(a)
