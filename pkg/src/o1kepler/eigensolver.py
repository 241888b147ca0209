"""Finite-difference oracle for the radial Coulomb family.

The family is

    -1/(2 r^m) d/dr r^m dR/dr + l(l+m-1)/(2 r^2) R - g R/r = E R

with measure r^m dr.  Two discretizations are offered:

``levi-civita`` (default)
    Substitute r = s^2 and P(s) = R(s^2).  Multiplying by s^2 gives the
    symmetric-definite pencil

        -(1/8) s^-(2m-1) (s^(2m-1) P')' + l(l+m-1)/(2 s^2) P - g P = E s^2 P,

    a radial oscillator in 2m dimensions whose regular solutions are
    s^(2l) times a smooth function of s^2, so flux-form central differences
    on a cell-centred uniform s-grid converge at a clean O(h^2) for every
    channel, including l' = -1/2.  Requires m >= 1.

``symmetric``
    u = r^(m/2) R on a uniform r-grid with Dirichlet ends,
    -u''/2 + [l'(l'+1)/(2 r^2) - g/r] u = E u.  Converges at O(h^2) only when
    l' is a non-negative integer; kept for comparison.

Both produce a symmetric tridiagonal matrix solved by LAPACK bisection with an
absolute tolerance far below the matrix norm (the default eps*||T|| would
swamp E for the 1/h^4 entries near s = 0), followed by Richardson (Romberg)
extrapolation in h^2 across refinement levels.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import AccuracyWarning, BoxSizeError, NumericalError, ParameterError
from .specialfn import LaguerreParams, laguerre_eval
from .spectrum import QuantumChannel, RadialFamilyParams

SCHEMES = ("levi-civita", "symmetric")
BISECTION_TOL = 1e-15
CONVERGED_REL = 1e-8


@dataclass(frozen=True)
class SolverConfig:
    num_levels: int = 3
    npoints: int = 4000
    refinement_levels: int = 3
    rmax: float | None = None
    rmin: float | None = None
    scheme: str = "levi-civita"

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ParameterError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.npoints < 200:
            raise ParameterError(f"npoints must be >= 200, got {self.npoints}")
        if self.num_levels < 1 or self.num_levels >= self.npoints / 10:
            raise ParameterError(f"num_levels must be in [1, npoints/10), got {self.num_levels}")
        if self.refinement_levels < 2:
            raise ParameterError(f"refinement_levels must be >= 2, got {self.refinement_levels}")
        if self.rmax is not None and not self.rmax > 0:
            raise ParameterError("rmax must be positive")
        if self.rmin is not None and not (self.rmin > 0 and (self.rmax is None or self.rmin < self.rmax)):
            raise ParameterError("need 0 < rmin < rmax")

    def box(self, lprime: float) -> float:
        """rmax; default 40 (num_levels + l' + 1)^2 (Coulomb radii grow like k^2)."""
        if self.rmax is not None:
            return float(self.rmax)
        return 40.0 * (self.num_levels + lprime + 1.0) ** 2


@dataclass
class EigenResult:
    """Extrapolated eigenvalues plus the raw refinement data behind them."""

    energies: np.ndarray
    raw: np.ndarray  # shape (refinement_levels, num_levels)
    steps: np.ndarray
    error_estimate: np.ndarray
    scheme: str
    rmax: float
    warning: str | None = None
    observed_order: np.ndarray = field(default_factory=lambda: np.array([]))

    def __iter__(self):
        return iter(self.energies.tolist())

    def __len__(self):
        return len(self.energies)

    def __getitem__(self, i):
        return float(self.energies[i])


def symmetrized_centrifugal(p: RadialFamilyParams) -> Fraction:
    """l^2 + (m-1) l + (m/2)(m/2 - 1), which equals l'(l'+1)."""
    return p.l**2 + (p.m - 1) * p.l + (p.m / 2) * (p.m / 2 - 1)


def _levi_civita_matrix(p: RadialFamilyParams, smax: float, N: int, coupling: float):
    m, l = float(p.m), float(p.l)
    h = smax / N
    s = h * (np.arange(1, N + 1) - 0.5)
    power = 2 * m - 1
    a_plus = (s + h / 2) ** power
    a_minus = (s - h / 2) ** power
    w = s**power
    kd = (a_plus + a_minus) / (8 * h * h) + w * (l * (l + m - 1) / (2 * s * s) - coupling)
    ko = -a_plus[:-1] / (8 * h * h)
    mass = w * s * s
    diag = kd / mass
    off = ko / np.sqrt(mass[:-1] * mass[1:])
    return diag, off, s, h


def _symmetric_matrix(p: RadialFamilyParams, rmax: float, N: int, coupling: float):
    lp = float(p.lprime)
    h = rmax / (N + 1)
    r = h * np.arange(1, N + 1)
    diag = 1.0 / (h * h) + lp * (lp + 1) / (2 * r * r) - coupling / r
    off = np.full(N - 1, -0.5 / (h * h))
    return diag, off, r, h


def _assemble(p, cfg: SolverConfig, N: int, coupling: float):
    rmax = cfg.box(float(p.lprime))
    if cfg.scheme == "levi-civita":
        if p.m < 1:
            raise ParameterError("the levi-civita scheme needs m >= 1; use scheme='symmetric'")
        return _levi_civita_matrix(p, math.sqrt(rmax), N, coupling)
    return _symmetric_matrix(p, rmax, N, coupling)


def _lowest(diag, off, count, vectors=False):
    try:
        return eigh_tridiagonal(
            diag, off, select="i", select_range=(0, count - 1),
            eigvals_only=not vectors, lapack_driver="stebz", tol=BISECTION_TOL,
        )
    except LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"tridiagonal eigensolver failed: {exc}") from exc


def _romberg(values: np.ndarray):
    """Richardson table for errors in powers of h^2 with h halving per row."""
    T = [[np.asarray(v, dtype=float) for v in values]]
    for j in range(1, len(values)):
        factor = 4.0**j
        prev = T[-1]
        T.append([(factor * prev[i + 1] - prev[i]) / (factor - 1) for i in range(len(prev) - 1)])
    best = T[-1][-1]
    return best, np.abs(best - T[-2][-1])


def solve_radial_family(p: RadialFamilyParams, cfg: SolverConfig | None = None, coupling: float = 1.0) -> EigenResult:
    """Lowest ``cfg.num_levels`` eigenvalues of the radial family, ascending."""
    cfg = cfg or SolverConfig()
    levels = cfg.refinement_levels
    if cfg.scheme == "symmetric" and -0.5 < p.lprime <= 0:
        levels *= 2  # degraded endpoint order; documented in the README
    raw, steps = [], []
    for j in range(levels):
        N = cfg.npoints * 2**j
        diag, off, _, h = _assemble(p, cfg, N, coupling)
        ev = _lowest(diag, off, cfg.num_levels)
        raw.append(ev)
        steps.append(h)
    raw = np.array(raw)
    if np.any(raw[0] >= 0):
        found = int(np.sum(raw[0] < 0))
        raise BoxSizeError(
            f"only {found} of {cfg.num_levels} requested bound states fit in the box "
            f"rmax={cfg.box(float(p.lprime)):.4g}; increase rmax"
        )
    best, err = _romberg(raw)
    order = np.array([])
    if len(raw) >= 3:
        d1, d2 = raw[-3] - raw[-2], raw[-2] - raw[-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            order = np.log2(np.abs(d1 / d2))
    warning = None
    if np.any(err > CONVERGED_REL * np.abs(best)):
        warning = (
            f"Richardson extrapolation not converged to {CONVERGED_REL:g} relative "
            f"(estimates {np.array2string(err / np.abs(best), precision=2)})"
        )
        warnings.warn(warning, AccuracyWarning, stacklevel=2)
    return EigenResult(
        energies=np.asarray(best), raw=raw, steps=np.array(steps), error_estimate=np.asarray(err),
        scheme=cfg.scheme, rmax=cfg.box(float(p.lprime)), warning=warning, observed_order=order,
    )


def solve_kepler_channel(ch: QuantumChannel, cfg: SolverConfig | None = None, coupling: float = 1.0) -> EigenResult:
    """Eigenvalues of the Kepler channel (n, sigma, l) via t = r^2: m = n/2, l -> l/2.

    The i-th returned value corresponds to radial quantum number k = i + 1;
    ``ch.k`` itself is ignored.
    """
    return solve_radial_family(ch.family_params(), cfg, coupling)


def closed_form_u(p: RadialFamilyParams, k: int, r) -> np.ndarray:
    """u = r^(l'+1) L^(2l'+1)_(k-1)(2r/(k+l')) exp(-r/(k+l')), unnormalized."""
    lp = float(p.lprime)
    nu = k + lp
    r = np.asarray(r, dtype=float)
    lag = LaguerreParams(2 * lp + 1, k - 1)
    return r ** (lp + 1) * laguerre_eval(lag, 2 * r / nu) * np.exp(-r / nu)


def eigenvector_overlap(p: RadialFamilyParams, k: int = 1, cfg: SolverConfig | None = None) -> float:
    """|<u_numeric, u_closed>| / (||u_numeric|| ||u_closed||) in L^2(dr) on the finest grid."""
    cfg = cfg or SolverConfig()
    N = cfg.npoints * 2 ** (cfg.refinement_levels - 1)
    diag, off, x, h = _assemble(p, cfg, N, 1.0)
    _, vecs = _lowest(diag, off, k, vectors=True)
    v = vecs[:, k - 1]
    if cfg.scheme == "levi-civita":
        # v = M^(1/2) P with M = s^(2m+1);  u = s^m P = v / sqrt(s);  dr = 2 s ds
        exact = closed_form_u(p, k, x * x)
        num = np.sum(v * exact * np.sqrt(x))
        den = math.sqrt(np.sum(v * v) * np.sum(exact * exact * x))
    else:
        exact = closed_form_u(p, k, x)
        num = np.sum(v * exact)
        den = math.sqrt(np.sum(v * v) * np.sum(exact * exact))
    return float(abs(num) / den)
