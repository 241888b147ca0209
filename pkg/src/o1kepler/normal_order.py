"""Symbolic normal-ordering oracle for polynomials in a_i, a_i^dagger.

Independent of the matrix path in ``fock``: elements of the Weyl algebra are
dicts mapping a normal-ordered monomial ``(creation exponents, annihilation
exponents)`` to a coefficient, and products are normal-ordered with

    a^q (a^dag)^r = sum_t C(q, t) C(r, t) t! (a^dag)^(r-t) a^(q-t)

mode by mode.  Used as ground truth for the structure constants of the
quadratic generators.
"""
from __future__ import annotations

import itertools
from math import comb, factorial, sqrt

import numpy as np

from .errors import NumericalError


class WeylPoly:
    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def identity(cls, n, coeff=1.0):
        return cls(n, {((0,) * n, (0,) * n): coeff})

    @classmethod
    def create(cls, n, i):
        cre = [0] * n
        cre[i] = 1
        return cls(n, {(tuple(cre), (0,) * n): 1.0})

    @classmethod
    def annihilate(cls, n, i):
        ann = [0] * n
        ann[i] = 1
        return cls(n, {((0,) * n, tuple(ann)): 1.0})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) + v
        return WeylPoly(self.n, out)

    def __sub__(self, other):
        return self + other * -1.0

    def __mul__(self, other):
        if not isinstance(other, WeylPoly):
            return WeylPoly(self.n, {k: v * other for k, v in self.terms.items()})
        out = {}
        for (p, q), c1 in self.terms.items():
            for (r, s), c2 in other.terms.items():
                for key, c in _normal_product(p, q, r, s):
                    out[key] = out.get(key, 0.0) + c1 * c2 * c
        return WeylPoly(self.n, out)

    __rmul__ = __mul__

    def commutator(self, other):
        return self * other - other * self

    def cleaned(self, tol=1e-15):
        return WeylPoly(self.n, {k: v for k, v in self.terms.items() if abs(v) > tol})


def _normal_product(p, q, r, s):
    """(a^dag)^p a^q (a^dag)^r a^s as a list of (monomial, coefficient)."""
    per_mode = []
    for qi, ri in zip(q, r):
        per_mode.append(
            [(t, comb(qi, t) * comb(ri, t) * factorial(t)) for t in range(min(qi, ri) + 1)]
        )
    out = []
    for choice in itertools.product(*per_mode):
        coeff = 1
        cre, ann = [], []
        for i, (t, c) in enumerate(choice):
            coeff *= c
            cre.append(p[i] + r[i] - t)
            ann.append(q[i] - t + s[i])
        out.append(((tuple(cre), tuple(ann)), float(coeff)))
    return out


def generator_poly(gen, n) -> WeylPoly:
    """Symbolic expression of a quadratic generator (see ``fock.Generator``)."""
    cr = lambda i: WeylPoly.create(n, i)  # noqa: E731
    an = lambda i: WeylPoly.annihilate(n, i)  # noqa: E731
    j, k = gen.j - 1, (gen.k - 1 if gen.k else None)
    if gen.kind == "cartan":
        return (cr(j) * an(j) + WeylPoly.identity(n, 0.5)) * -1.0
    if gen.kind == "hamiltonian":
        out = WeylPoly.identity(n, n / 2)
        for i in range(n):
            out = out + cr(i) * an(i)
        return out
    if gen.kind == "diff":
        return cr(k) * an(j) if gen.dagger else cr(j) * an(k)
    if gen.kind == "sum":
        return an(k) * an(j) if gen.dagger else cr(j) * cr(k)
    if gen.kind == "double":
        return (an(j) * an(j) if gen.dagger else cr(j) * cr(j)) * (1 / sqrt(2))
    raise ValueError(f"unknown generator kind {gen.kind!r}")


def decompose(target: WeylPoly, basis: list[WeylPoly], with_identity=True, tol=1e-12):
    """Coefficients expressing ``target`` in span(basis [+ identity]).

    Returns (coefficients, identity_coefficient, residual).  The residual is
    the max-abs coefficient mismatch of the least-squares fit.
    """
    n = target.n
    elems = list(basis) + ([WeylPoly.identity(n)] if with_identity else [])
    keys = sorted(set(target.terms).union(*(e.terms for e in elems)))
    index = {key: i for i, key in enumerate(keys)}
    A = np.zeros((len(keys), len(elems)))
    for col, e in enumerate(elems):
        for key, v in e.terms.items():
            A[index[key], col] = v
    b = np.zeros(len(keys))
    for key, v in target.terms.items():
        b[index[key]] = v
    coeffs, *_ = np.linalg.lstsq(A, b, rcond=None)
    coeffs[np.abs(coeffs) < tol] = 0.0
    residual = float(np.max(np.abs(A @ coeffs - b))) if len(keys) else 0.0
    if not np.isfinite(residual):  # pragma: no cover
        raise NumericalError("normal-ordering decomposition produced non-finite values")
    if with_identity:
        return coeffs[:-1], float(coeffs[-1]), residual
    return coeffs, 0.0, residual
