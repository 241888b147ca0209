"""Dimension-two equivalence with the generalized MICZ-Kepler problem.

The map pi(rho, theta) = (rho^2, 2 theta) carries a MICZ-Kepler wave function
Psi(r, phi) to psi(rho, theta) = 2 rho Psi(rho^2, 2 theta).  Functions carry
analytic polar jets (value, first and second partials) so operator identities
are checked without finite differences.  theta runs over [0, pi), the
fundamental domain of the antipodal quotient.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate

from .errors import AccuracyError, DomainError, ParameterError
from .report import VerificationReport


class PolarJet(NamedTuple):
    """Value and partial derivatives in polar coordinates (radius, angle)."""

    f: np.ndarray
    f_r: np.ndarray
    f_a: np.ndarray
    f_rr: np.ndarray
    f_aa: np.ndarray
    f_ra: np.ndarray


@dataclass(frozen=True)
class PlaneFunction:
    evaluator: Callable[[np.ndarray, np.ndarray], PolarJet]
    mu: Fraction = Fraction(0)
    name: str = ""

    def __post_init__(self):
        mu = Fraction(self.mu)
        if mu not in (0, Fraction(1, 2)):
            raise ParameterError(f"magnetic charge mu must be 0 or 1/2, got {self.mu}")
        object.__setattr__(self, "mu", mu)

    @property
    def sigma(self) -> int:
        return int(2 * self.mu)

    def jet(self, radius, angle) -> PolarJet:
        radius = np.asarray(radius, dtype=float)
        if np.any(~(radius > 0)):
            raise DomainError("plane functions are defined for radius > 0")
        return self.evaluator(radius, np.asarray(angle, dtype=float))

    def __call__(self, radius, angle):
        return self.jet(radius, angle).f


def separable(radial, angular, mu=0, name="") -> PlaneFunction:
    """Psi(r, phi) = F(r) G(phi) from ``radial(r) -> (F, F', F'')`` and ``angular``."""

    def evaluator(r, a):
        F, dF, d2F = radial(r)
        G, dG, d2G = angular(a)
        return PolarJet(F * G, dF * G, F * dG, d2F * G, F * d2G, dF * dG)

    return PlaneFunction(evaluator, mu, name)


def power_exp(power: float, decay: float):
    """Radial factor r^power exp(-decay r) with its derivatives."""

    def radial(r):
        e = np.exp(-decay * r)
        f = r**power * e
        df = (power * r ** (power - 1) - decay * r**power) * e if power else -decay * e
        d2f = (
            (power * (power - 1) * r ** (power - 2) - 2 * decay * power * r ** (power - 1) + decay**2 * r**power) * e
            if power else decay**2 * e
        )
        return f, df, d2f

    return radial


def fourier(m: float):
    """Angular factor e^{i m phi}; half-integer m lives in the mu = 1/2 sector."""

    def angular(a):
        g = np.exp(1j * m * a)
        return g, 1j * m * g, -(m * m) * g

    return angular


def cosine(m: float):
    def angular(a):
        return np.cos(m * a), -m * np.sin(m * a), -(m * m) * np.cos(m * a)

    return angular


def constant_angle(a):
    one = np.ones_like(a, dtype=float)
    return one, 0 * one, 0 * one


def transport_wavefunction(Psi: PlaneFunction) -> PlaneFunction:
    """psi(rho, theta) = 2 rho Psi(rho^2, 2 theta), derivatives by the chain rule."""

    def evaluator(rho, theta):
        J = Psi.jet(rho * rho, 2 * theta)
        f = 2 * rho * J.f
        f_r = 2 * J.f + 4 * rho * rho * J.f_r
        f_a = 4 * rho * J.f_a
        f_rr = 12 * rho * J.f_r + 8 * rho**3 * J.f_rr
        f_aa = 8 * rho * J.f_aa
        f_ra = 4 * J.f_a + 8 * rho * rho * J.f_ra
        return PolarJet(f, f_r, f_a, f_rr, f_aa, f_ra)

    return PlaneFunction(evaluator, Psi.mu, f"transport({Psi.name})")


def polar_laplacian(J: PolarJet, radius):
    return J.f_rr + J.f_r / radius + J.f_aa / radius**2


def micz_hamiltonian(Psi: PlaneFunction, r, phi):
    """h Psi = -(1/2) Delta Psi - Psi / r."""
    J = Psi.jet(r, phi)
    return -0.5 * polar_laplacian(J, r) - J.f / r


def kepler_hamiltonian_2d(psi: PlaneFunction, rho, theta):
    """H psi = -(1/(8 rho)) Delta (psi / rho) - psi / rho^2 in 2D polar form."""
    J = psi.jet(rho, theta)
    g = J.f / rho
    g_r = J.f_r / rho - J.f / rho**2
    g_rr = J.f_rr / rho - 2 * J.f_r / rho**2 + 2 * J.f / rho**3
    g_aa = J.f_aa / rho
    lap = g_rr + g_r / rho + g_aa / rho**2
    return -lap / (8 * rho) - J.f / rho**2


def default_plane_grid(points: int = 40):
    rho = np.geomspace(0.05, 3.0, points)
    theta = np.linspace(0.0, np.pi, 13, endpoint=False)
    return np.meshgrid(rho, theta, indexing="ij")


def operator_identity_residual(Psi: PlaneFunction, grid=None) -> float:
    """max |H psi - transport(h Psi)| / max |transport(h Psi)| with psi = transport(Psi).

    Equivalent to (1/rho) H rho = h on pullbacks, scaled by the 2 rho factor.
    """
    rho, theta = default_plane_grid() if grid is None else grid
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0)):
        raise DomainError("operator identity grid needs rho > 0")
    psi = transport_wavefunction(Psi)
    lhs = kepler_hamiltonian_2d(psi, rho, theta)
    rhs = 2 * rho * micz_hamiltonian(Psi, rho * rho, 2 * theta)
    scale = np.max(np.abs(rhs))
    return float(np.max(np.abs(lhs - rhs)) / scale)


def eigen_residual(psi: PlaneFunction, energy: float, grid=None) -> float:
    """max |H psi - E psi| / max |psi| for the 2D Kepler hamiltonian."""
    rho, theta = default_plane_grid() if grid is None else grid
    lhs = kepler_hamiltonian_2d(psi, rho, theta)
    val = psi(rho, theta)
    return float(np.max(np.abs(lhs - energy * val)) / np.max(np.abs(val)))


def _dblquad_complex(func, r_hi, a_hi, epsabs, epsrel):
    def part(which):
        value, err = integrate.dblquad(
            lambda r, a: which(func(r, a)), 0.0, a_hi, 0.0, r_hi, epsabs=epsabs, epsrel=epsrel
        )
        return value, err

    re, e1 = part(np.real)
    im, e2 = part(np.imag)
    return complex(re, im), max(e1, e2)


def inner_product_check(Psi1: PlaneFunction, Psi2: PlaneFunction, tol: float = 1e-8) -> VerificationReport:
    """Compare <psi1, psi2> over (rho, theta) in (0, inf) x [0, pi) with <Psi1, Psi2> over the plane."""
    psi1, psi2 = transport_wavefunction(Psi1), transport_wavefunction(Psi2)
    epsabs, epsrel = 1e-13, 1e-12

    def kepler_side(rho, theta):
        return np.conj(psi1(rho, theta)) * psi2(rho, theta) * rho

    def micz_side(r, phi):
        return np.conj(Psi1(r, phi)) * Psi2(r, phi) * r

    lhs, err1 = _dblquad_complex(kepler_side, np.inf, np.pi, epsabs, epsrel)
    rhs, err2 = _dblquad_complex(micz_side, np.inf, 2 * np.pi, epsabs, epsrel)
    if max(err1, err2) > tol:
        raise AccuracyError(f"inner-product quadrature did not converge (error estimates {err1:.2e}, {err2:.2e})")
    report = VerificationReport(suite="micz2d_inner_product")
    dev = abs(lhs - rhs)
    scale = max(abs(rhs), 1.0)
    report.check_deviation(
        f"inner_product[{Psi1.name},{Psi2.name}]", dev / scale, tol,
        expected=[rhs.real, rhs.imag], actual=[lhs.real, lhs.imag],
    )
    return report.finish()


def pullback_metric(rho, theta):
    """g = J^T J of pi in (rho, theta) coordinates (J from the Cartesian form of pi)."""
    c, s = np.cos(2 * theta), np.sin(2 * theta)
    # pi(rho, theta) = (rho^2 cos 2theta, rho^2 sin 2theta)
    J = np.array([[2 * rho * c, -2 * rho * rho * s], [2 * rho * s, 2 * rho * rho * c]])
    return J.T @ J


def parity_defect(psi: PlaneFunction, rho, theta) -> float:
    """max |psi(rho, theta + pi) - (-1)^sigma psi(rho, theta)|."""
    sign = -1.0 if psi.sigma else 1.0
    return float(np.max(np.abs(psi(rho, theta + np.pi) - sign * psi(rho, theta))))
