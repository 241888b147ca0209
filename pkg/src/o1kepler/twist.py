"""The rescale-and-divide map from Kepler bound states to oscillator eigenstates.

For a level-I state psi_I the twist is

    T(x) = c_I * psi_I(sqrt(n_I / 2) x) / |x|,

with c_I > 0 fixed by norm preservation.  On radial factors with
s = n_I / 2 this reads T(r) = c_I R(sqrt(s) r) / r, and

    int T^2 r^(n-1) dr = c_I^2 s^(1 - n/2) <r^-2>,

so c_I = (s^(1-n/2) <r^-2>)^(-1/2).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .radial import (
    GUARD_NODES,
    RadialState,
    _positive_grid,
    profile_jet,
    radial_moment,
    radial_normalize,
)
from .specialfn import LaguerreParams, gauss_laguerre_rule, laguerre_eval
from .spectrum import QuantumChannel


@dataclass(frozen=True)
class TwistedState:
    source: RadialState
    nI: float
    cI: float

    @property
    def scale(self) -> float:
        return self.nI / 2

    @property
    def eigenvalue(self) -> float:
        """Predicted oscillator eigenvalue 2 I + sigma + n/2 (= 2 n_I)."""
        ch = self.source.channel
        return 2 * ch.level + ch.sigma + ch.n / 2


def mean_inverse_square(state: RadialState) -> float:
    """<r^-2> = int R^2 r^(n-3) dr (exact Gauss-Laguerre after u = 2 r^2 / n_I)."""
    return radial_moment(state, state, -2)


def _twist_from_state(state: RadialState) -> TwistedState:
    n = state.channel.n
    s = state.nI / 2
    cI = (s ** (1 - n / 2) * mean_inverse_square(state)) ** -0.5
    return TwistedState(source=state, nI=state.nI, cI=cI)


def twist(state_or_channel) -> TwistedState:
    state = state_or_channel
    if isinstance(state, QuantumChannel):
        state = radial_normalize(state)
    return _twist_from_state(state)


def twist_constant(channel: QuantumChannel) -> float:
    return twist(channel).cI


def closed_form_twist_constant(channel: QuantumChannel) -> float:
    """n_I (n_I/2)^(n/4 - 1/2), obtained from <r^-2> = -2 E_I; a cross-check only."""
    nI = float(channel.n_level)
    return nI * (nI / 2) ** (channel.n / 4 - 0.5)


def twisted_jet(t: TwistedState, r):
    """T, T', T'' from the chain rule through the closed-form source.

    With R(rho) = rho f(rho): T(r) = c_I sqrt(s) f(sqrt(s) r).
    """
    r = _positive_grid(r)
    src = t.source
    rs = np.sqrt(t.scale)
    f, df, d2f = profile_jet(src.channel.l, src.laguerre, 2.0 / src.nI, 1.0 / src.nI, rs * r)
    pref = t.cI * src.c * rs
    return pref * f, pref * rs * df, pref * rs * rs * d2f


def twisted_eval(t: TwistedState, r):
    val = twisted_jet(t, r)[0]
    return float(val) if np.ndim(r) == 0 else val


def twisted_norm(t: TwistedState) -> float:
    """int T^2 r^(n-1) dr by quadrature, independent of the c_I formula."""
    ch = t.source.channel
    n, l = ch.n, ch.l
    # T(r) = K r^l L(r^2) e^{-r^2/2};  u = r^2:  (K^2/2) u^{l+n/2-1} L(u)^2 e^{-u} du
    K = t.cI * t.source.c * np.sqrt(t.scale) ** (l + 1)
    lag = LaguerreParams(float(ch.laguerre_alpha), ch.k - 1)
    rule = gauss_laguerre_rule(l + n / 2 - 1, (ch.k - 1) + GUARD_NODES)
    return float(0.5 * K * K * rule.integrate(laguerre_eval(lag, rule.nodes) ** 2))


def default_twist_grid(points: int = 400):
    # image of the radial default grid [1e-2, 8] sqrt(n_I) under r -> r / sqrt(n_I / 2)
    return np.geomspace(1e-2 * np.sqrt(2), 8.0 * np.sqrt(2), points)


def oscillator_residual(t: TwistedState, grid=None) -> float:
    """Relative residual of the radial oscillator equation at eigenvalue 2I + sigma + n/2."""
    if grid is None:
        grid = default_twist_grid()
    r = _positive_grid(grid)
    ch = t.source.channel
    n, l = ch.n, ch.l
    T, dT, d2T = twisted_jet(t, r)
    lhs = -0.5 * (d2T + (n - 1) * dT / r) + (l * (l + n - 2) / (2 * r * r) + r * r / 2) * T
    return float(np.max(np.abs(lhs - t.eigenvalue * T)) / np.max(np.abs(T)))


def oscillator_radial(channel: QuantumChannel, r):
    """Normalized oscillator radial eigenfunction ~ r^l L^(l+n/2-1)_(k-1)(r^2) e^(-r^2/2).

    Built independently of the twist (own quadrature normalization), for the
    intertwining check.
    """
    r = _positive_grid(r)
    n, l, k = channel.n, channel.l, channel.k
    lag = LaguerreParams(l + n / 2 - 1, k - 1)
    rule = gauss_laguerre_rule(l + n / 2 - 1, (k - 1) + GUARD_NODES)
    norm2 = 0.5 * rule.integrate(laguerre_eval(lag, rule.nodes) ** 2)
    return r**l * laguerre_eval(lag, r * r) * np.exp(-r * r / 2) / np.sqrt(norm2)
