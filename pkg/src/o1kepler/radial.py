"""Closed-form radial eigenfunctions of the O(1)-Kepler hamiltonian.

For a channel (n, sigma, k, l) with n_I = I + n/4 + sigma/2 the radial factor is

    R(r) = c * r^(l+1) * L^(l+n/2-1)_(k-1)(2 r^2 / n_I) * exp(-r^2 / n_I),

normalized in L^2(r^(n-1) dr).  All integrals substitute u = lambda * r^2,
which turns the integrand into (Laguerre weight) x (polynomial) so that
Gauss-Laguerre quadrature is exact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, DomainError
from .specialfn import LaguerreParams, gauss_laguerre_rule, laguerre_deriv, laguerre_eval
from .spectrum import QuantumChannel, channel_energy

GUARD_NODES = 10


@dataclass(frozen=True)
class RadialState:
    channel: QuantumChannel
    nI: float
    c: float

    @property
    def laguerre(self) -> LaguerreParams:
        return LaguerreParams(float(self.channel.laguerre_alpha), self.channel.k - 1)

    @property
    def energy(self) -> float:
        return channel_energy(self.channel)


def _positive_grid(r):
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("radial functions are evaluated on r > 0 only")
    return arr


def profile_jet(power, lag: LaguerreParams, a, b, r):
    """Value, first and second derivative of r^power * L(a r^2) * exp(-b r^2)."""
    r = np.asarray(r, dtype=float)
    z = a * r * r
    L = laguerre_eval(lag, z)
    dL = laguerre_deriv(lag, z, 1)
    d2L = laguerre_deriv(lag, z, 2)
    A = r**power
    dA = power * r ** (power - 1) if power else np.zeros_like(r)
    d2A = power * (power - 1) * r ** (power - 2) if power > 1 or power < 0 else np.zeros_like(r)
    B, dB, d2B = L, 2 * a * r * dL, 2 * a * dL + 4 * a * a * r * r * d2L
    C = np.exp(-b * r * r)
    dC = -2 * b * r * C
    d2C = (4 * b * b * r * r - 2 * b) * C
    f = A * B * C
    df = dA * B * C + A * dB * C + A * B * dC
    d2f = (
        d2A * B * C + A * d2B * C + A * B * d2C
        + 2 * (dA * dB * C + dA * B * dC + A * dB * dC)
    )
    return f, df, d2f


def _moment(a: RadialState | QuantumChannel, b, power: int, npoints=None, ca=1.0, cb=1.0):
    cha = a.channel if isinstance(a, RadialState) else a
    chb = b.channel if isinstance(b, RadialState) else b
    if (cha.n, cha.sigma, cha.l) != (chb.n, chb.sigma, chb.l):
        raise DomainError(
            f"radial integrals need a shared (n, sigma, l); got {cha} and {chb}"
        )
    n, l = cha.n, cha.l
    na, nb = float(cha.n_level), float(chb.n_level)
    lam = 1.0 / na + 1.0 / nb
    # r^q P(r^2) e^{-lam r^2} dr  ->  (1/2) lam^{-(q+1)/2} u^{(q-1)/2} P(u/lam) e^{-u} du
    q = 2 * l + n + 1 + power
    beta = (q - 1) / 2
    degree = (cha.k - 1) + (chb.k - 1)
    need = degree // 2 + 1
    if npoints is None:
        npoints = degree // 2 + GUARD_NODES
    elif npoints < need:
        raise AccuracyError(
            f"{npoints}-point rule cannot integrate a degree-{degree} polynomial exactly; need >= {need}"
        )
    rule = gauss_laguerre_rule(beta, npoints)
    u = rule.nodes
    la = laguerre_eval(LaguerreParams(float(cha.laguerre_alpha), cha.k - 1), 2 * u / (lam * na))
    lb = laguerre_eval(LaguerreParams(float(chb.laguerre_alpha), chb.k - 1), 2 * u / (lam * nb))
    return ca * cb * 0.5 * lam ** (-(q + 1) / 2) * rule.integrate(la * lb)


def radial_normalize(channel: QuantumChannel, npoints=None) -> RadialState:
    """Normalized radial state of a channel (c > 0)."""
    norm2 = _moment(channel, channel, 0, npoints)
    return RadialState(channel=channel, nI=float(channel.n_level), c=float(norm2**-0.5))


def radial_eval(state: RadialState, r):
    r_arr = _positive_grid(r)
    f, _, _ = profile_jet(state.channel.l + 1, state.laguerre, 2.0 / state.nI, 1.0 / state.nI, r_arr)
    out = state.c * f
    return float(out) if np.ndim(r) == 0 else out


def radial_inner_product(a: RadialState, b: RadialState, npoints=None) -> float:
    """Integral of R_a R_b r^(n-1) dr."""
    return _moment(a, b, 0, npoints, a.c, b.c)


def radial_moment(a: RadialState, b: RadialState, power: int, npoints=None) -> float:
    """Integral of R_a R_b r^(n-1+power) dr for even ``power`` >= -2."""
    return _moment(a, b, power, npoints, a.c, b.c)


def default_grid(state: RadialState, points: int = 400):
    scale = np.sqrt(state.nI)
    return np.geomspace(1e-2 * scale, 8.0 * scale, points)


def apply_radial_hamiltonian(state: RadialState, r):
    """The separated radial operator applied to the closed form (analytic derivatives).

    (1/8) [ -(1/r^n) d/dr r^(n-1) d/dr (1/r) + (l^2 + (n-2) l)/r^4 ] - 1/r^2
    """
    r = _positive_grid(r)
    n, l = state.channel.n, state.channel.l
    f, df, d2f = profile_jet(l, state.laguerre, 2.0 / state.nI, 1.0 / state.nI, r)
    f, df, d2f = state.c * f, state.c * df, state.c * d2f
    R = r * f
    kinetic = -(d2f + (n - 1) * df / r) / (8.0 * r)
    centrifugal = (l * l + (n - 2) * l) / (8.0 * r**4) * R
    return kinetic + centrifugal - R / r**2, R


def radial_residual(state: RadialState, grid=None) -> float:
    """max |H R - E R| / max |R| over the grid."""
    if grid is None:
        grid = default_grid(state)
    HR, R = apply_radial_hamiltonian(state, grid)
    return float(np.max(np.abs(HR - state.energy * R)) / np.max(np.abs(R)))


def count_nodes(values) -> int:
    """Sign changes of a sampled real function (exact zeros skipped)."""
    s = np.sign(np.asarray(values))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))
