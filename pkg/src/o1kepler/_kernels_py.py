"""Pure-Python implementations of the hot kernels.

These mirror ``_ckernels.pyx`` one to one and are used whenever the compiled
extension is unavailable (or ``O1KEPLER_PURE_PYTHON=1`` is set).
"""
from __future__ import annotations

from math import comb, sqrt

import numpy as np


def laguerre_values(alpha, degree, x):
    """L^alpha_degree at every point of ``x`` by upward degree recurrence."""
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if degree == 0:
        return prev
    cur = 1.0 + alpha - x
    for k in range(1, degree):
        nxt = ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
        prev, cur = cur, nxt
    return cur


def fock_rank(nu, n):
    level = sum(nu)
    rank = comb(level - 1 + n, n) if level > 0 else 0
    remaining = level
    for i in range(n - 1):
        parts = n - i - 1
        for v in range(nu[i]):
            rank += comb(remaining - v + parts - 1, parts - 1)
        remaining -= nu[i]
    return rank


def fock_lower_entries(states, mode):
    """Nonzero entries of the annihilation operator on ``mode``.

    ``states`` is the (count, n) occupation array in basis order; returns
    (rows, cols, values) with a|nu> = sqrt(nu_i) |nu - e_i>.
    """
    states = np.asarray(states, dtype=np.int64)
    n = states.shape[1]
    rows, cols, vals = [], [], []
    for col, nu in enumerate(states.tolist()):
        occ = nu[mode]
        if occ == 0:
            continue
        nu[mode] = occ - 1
        rows.append(fock_rank(nu, n))
        cols.append(col)
        vals.append(sqrt(occ))
    return (
        np.asarray(rows, dtype=np.int64),
        np.asarray(cols, dtype=np.int64),
        np.asarray(vals, dtype=float),
    )
