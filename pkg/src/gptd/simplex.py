"""Dense tableau simplex for small linear programs.

Solves ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``, so the slack
basis is feasible from the start and no phase one is needed. Pivoting uses
Bland's rule, which cannot cycle on degenerate vertices.
"""

from __future__ import annotations

import numpy as np

from .errors import LPFailure

PIVOT_TOL = 1e-12


def simplex_max(c, a, b, max_pivots: int = 50_000):
    """Return ``(x, value)`` maximizing ``c.x`` over ``{A x <= b, x >= 0}``.

    Raises :class:`LPFailure` if ``b`` has negative entries, if the problem
    is unbounded, or if the pivot budget is exhausted.
    """
    c = np.asarray(c, dtype=float)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = a.shape
    if np.any(b < 0):
        raise LPFailure("right-hand side must be non-negative (origin must be feasible)")

    # rows 0..m-1: [A | I | b]; last row: reduced costs [-c | 0 | value]
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = a
    tab[:m, n : n + m] = np.eye(m)
    tab[:m, -1] = b
    tab[m, :n] = -c
    basis = list(range(n, n + m))

    for _ in range(max_pivots):
        entering = next((j for j in range(n + m) if tab[m, j] < -PIVOT_TOL), None)
        if entering is None:
            break
        col = tab[:m, entering]
        candidates = [i for i in range(m) if col[i] > PIVOT_TOL]
        if not candidates:
            raise LPFailure("linear program is unbounded")
        ratios = [tab[i, -1] / col[i] for i in candidates]
        best = min(ratios)
        # Bland: among tied ratios, leave the row whose basic variable has the smallest index
        tied = [i for i, r in zip(candidates, ratios) if r <= best + PIVOT_TOL * max(1.0, abs(best))]
        leaving = min(tied, key=lambda i: basis[i])
        tab[leaving] /= tab[leaving, entering]
        for i in range(m + 1):
            if i != leaving and tab[i, entering] != 0.0:
                tab[i] -= tab[i, entering] * tab[leaving]
        basis[leaving] = entering
    else:
        raise LPFailure(f"simplex did not terminate within {max_pivots} pivots")

    x = np.zeros(n + m)
    for i, j in enumerate(basis):
        x[j] = tab[i, -1]
    return x[:n], float(tab[m, -1])


def maximize_free(c, a, b, bound: float | None = None):
    """Maximize ``c.x`` over free ``x`` with ``A x <= b`` (``b >= 0``).

    Free variables are split as ``x = x+ - x-``. An optional box
    ``|x_k| <= bound`` keeps otherwise unbounded directions finite.
    """
    c = np.asarray(c, dtype=float)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float)
    n = a.shape[1]
    a2 = np.hstack([a, -a])
    c2 = np.concatenate([c, -c])
    if bound is not None:
        a2 = np.vstack([a2, np.eye(2 * n)])
        b = np.concatenate([b, np.full(2 * n, bound)])
    z, value = simplex_max(c2, a2, b)
    return z[:n] - z[n:], value
