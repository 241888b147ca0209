"""Generalized Laguerre polynomials, Gauss-Laguerre quadrature and exact binomials."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from . import _backend
from .errors import DomainError, NumericalError, ParameterError

INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class LaguerreParams:
    alpha: float
    degree: int

    def __post_init__(self):
        if not self.alpha > -1:
            raise ParameterError(f"Laguerre alpha must exceed -1, got {self.alpha}")
        if int(self.degree) != self.degree or self.degree < 0:
            raise ParameterError(f"Laguerre degree must be a non-negative integer, got {self.degree}")


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    alpha: float

    def integrate(self, values):
        """Sum of ``weights * values`` (the integral of x^alpha e^-x f(x))."""
        return float(np.dot(self.weights, values))


def _check_x(x):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(~np.isfinite(arr)):
        raise DomainError("Laguerre evaluation requires finite x >= 0")
    return arr


def laguerre_eval(params: LaguerreParams, x):
    """Evaluate L^alpha_n(x) by the upward three-term recurrence.

    ``x`` may be a scalar or an array; the result has the same shape.
    """
    arr = _check_x(x)
    out = _backend.laguerre_values(float(params.alpha), int(params.degree), arr)
    return float(out) if np.ndim(x) == 0 else out


def laguerre_deriv(params: LaguerreParams, x, order: int = 1):
    """Derivative of L^alpha_n of the given order.

    Uses d/dx L^alpha_n = -L^(alpha+1)_(n-1) repeatedly.
    """
    arr = _check_x(x)
    if order < 0:
        raise ParameterError("derivative order must be non-negative")
    if order > params.degree:
        out = np.zeros_like(arr)
    else:
        sign = -1.0 if order % 2 else 1.0
        out = sign * _backend.laguerre_values(
            float(params.alpha) + order, int(params.degree) - order, arr
        )
    return float(out) if np.ndim(x) == 0 else out


def gauss_laguerre_rule(alpha: float, npoints: int) -> QuadratureRule:
    """Gauss-Laguerre nodes and weights for the weight x^alpha e^-x (Golub-Welsch).

    The Jacobi matrix has diagonal 2k + alpha + 1 and off-diagonal
    sqrt(k (k + alpha)); weights are Gamma(alpha + 1) times the squared first
    eigenvector components.
    """
    if not alpha > -1:
        raise ParameterError(f"quadrature alpha must exceed -1, got {alpha}")
    if int(npoints) != npoints or npoints < 1:
        raise ParameterError(f"npoints must be a positive integer, got {npoints}")
    k = np.arange(npoints, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    try:
        nodes, vecs = eigh_tridiagonal(diag, off)
    except LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(
            f"Golub-Welsch eigen-decomposition failed for alpha={alpha}, npoints={npoints}: {exc}"
        ) from exc
    weights = math.gamma(alpha + 1.0) * vecs[0, :] ** 2
    if not (np.all(np.diff(nodes) > 0) and nodes[0] > 0):
        raise NumericalError(f"non-monotone Gauss-Laguerre nodes for alpha={alpha}, npoints={npoints}")
    return QuadratureRule(nodes=nodes, weights=weights, alpha=float(alpha))


def exact_binomial(n: int, k: int) -> int:
    """C(n, k) in exact integer arithmetic; 0 when k is outside [0, n] or n < 0.

    Raises OverflowError when the value does not fit a signed 64-bit integer.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    value = math.comb(n, k)
    if value > INT64_MAX:
        raise OverflowError(f"C({n}, {k}) exceeds the 64-bit integer range")
    return value
