"""Quantum numbers and closed-form bound-state energies.

Half-integer quantities (n/4, l/2, m/2, ...) are carried as ``Fraction`` so
that quantum-number arithmetic is exact; energies are converted to float only
at the very end.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InvariantError, ParameterError

HALF = Fraction(1, 2)


def _check_n_sigma(n, sigma):
    if int(n) != n or n < 2:
        raise ParameterError(f"dimension n must be an integer >= 2, got {n}")
    if sigma not in (0, 1):
        raise ParameterError(f"parity charge sigma must be 0 or 1, got {sigma}")


def _as_half_integer(value, name):
    frac = Fraction(value)
    if (2 * frac).denominator != 1:
        raise ParameterError(f"{name} must be a half-integer, got {value}")
    return frac


@dataclass(frozen=True, order=True)
class QuantumChannel:
    """A separated bound-state channel (n, sigma, k, l)."""

    n: int
    sigma: int
    k: int
    l: int

    def __post_init__(self):
        _check_n_sigma(self.n, self.sigma)
        if int(self.k) != self.k or self.k < 1:
            raise ParameterError(f"radial quantum number k must be >= 1, got {self.k}")
        if int(self.l) != self.l or self.l < 0:
            raise ParameterError(f"angular degree l must be >= 0, got {self.l}")
        if (self.l - self.sigma) % 2:
            raise InvariantError(
                f"parity constraint violated: l={self.l} is not congruent to sigma={self.sigma} mod 2"
            )

    @property
    def level(self) -> int:
        return self.k - 1 + (self.l - self.sigma) // 2

    @property
    def n_level(self) -> Fraction:
        """I + n/4 + sigma/2 (equivalently k + l/2 + n/4 - 1)."""
        return self.level + Fraction(self.n, 4) + Fraction(self.sigma, 2)

    @property
    def laguerre_alpha(self) -> Fraction:
        return self.l + Fraction(self.n, 2) - 1

    def family_params(self) -> "RadialFamilyParams":
        """The radial-family parameters reached by the substitution t = r^2."""
        return RadialFamilyParams(m=Fraction(self.n, 2), l=Fraction(self.l, 2))


@dataclass(frozen=True)
class RadialFamilyParams:
    """Parameters (m, l) of the radial family with measure r^m dr."""

    m: Fraction
    l: Fraction

    def __post_init__(self):
        m = _as_half_integer(self.m, "m")
        l = _as_half_integer(self.l, "l")
        if m <= 0:
            raise ParameterError(f"measure exponent m must be positive, got {self.m}")
        if l < 0:
            raise ParameterError(f"centrifugal parameter l must be non-negative, got {self.l}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "l", l)

    @property
    def lprime(self) -> Fraction:
        return self.l + self.m / 2 - 1


def _coulomb_energy(principal: Fraction) -> Fraction:
    return -HALF / principal**2


def kepler_level_energy_exact(n: int, sigma: int, level: int) -> Fraction:
    _check_n_sigma(n, sigma)
    if int(level) != level or level < 0:
        raise ParameterError(f"level I must be a non-negative integer, got {level}")
    return _coulomb_energy(level + Fraction(n, 4) + Fraction(sigma, 2))


def kepler_level_energy(n: int, sigma: int, level: int) -> float:
    """E_I = -(1/2) / (I + n/4 + sigma/2)^2."""
    return float(kepler_level_energy_exact(n, sigma, level))


def channel_energy_exact(ch: QuantumChannel) -> Fraction:
    return _coulomb_energy(ch.k + Fraction(ch.l, 2) + Fraction(ch.n, 4) - 1)


def channel_energy(ch: QuantumChannel) -> float:
    """Energy of a separated channel, -(1/2) / (k + l/2 + n/4 - 1)^2."""
    return float(channel_energy_exact(ch))


def channels_at_level(n: int, sigma: int, level: int) -> list[QuantumChannel]:
    """All channels of level I, ordered by increasing l."""
    _check_n_sigma(n, sigma)
    if int(level) != level or level < 0:
        raise ParameterError(f"level I must be a non-negative integer, got {level}")
    return [
        QuantumChannel(n=n, sigma=sigma, k=level + 1 - j, l=sigma + 2 * j)
        for j in range(level + 1)
    ]


def radial_family_energy_exact(p: RadialFamilyParams, k: int) -> Fraction:
    if int(k) != k or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k}")
    principal = k + p.lprime
    if principal <= 0:
        raise DomainError(f"k + l' = {principal} must be positive")
    return _coulomb_energy(principal)


def radial_family_energy(p: RadialFamilyParams, k: int) -> float:
    """E_{k,l} = -(1/2) / (k + l')^2 with l' = l + m/2 - 1."""
    return float(radial_family_energy_exact(p, k))
