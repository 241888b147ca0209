"""Dimension and weight bookkeeping for the energy levels.

Weights are tuples of ``Fraction``.  For n = 2 the degree-l harmonic space
(l >= 1) splits into two SO(2) characters; ``N2_CAVEAT`` is attached to
output metadata instead of claiming irreducibility there.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .specialfn import exact_binomial
from .spectrum import _check_n_sigma
from .errors import NumericalError, ParameterError

HALF = Fraction(1, 2)
N2_CAVEAT = (
    "n=2: harmonic spaces of degree l>=1 are reducible under SO(2) "
    "(two characters); dimensions are reported, irreducibility is not asserted"
)


@dataclass(frozen=True)
class KTypeEntry:
    l: int
    dim: int
    un_weight: tuple  # U(n) highest weight of the level containing this entry
    so_weight: tuple  # SO(n) highest weight (l, 0, ..., 0) of the harmonic space


def harmonic_dim(n: int, l: int) -> int:
    """Dimension of degree-l harmonic polynomials in n variables."""
    if int(n) != n or n < 2 or int(l) != l or l < 0:
        raise ParameterError(f"harmonic_dim needs n >= 2 and l >= 0, got n={n}, l={l}")
    return exact_binomial(l + n - 1, n - 1) - exact_binomial(l + n - 3, n - 1)


def level_weight(n: int, sigma: int, level: int) -> tuple:
    """(-1/2, ..., -1/2, -(1/2 + sigma + 2I))."""
    return (-HALF,) * (n - 1) + (-(HALF + sigma + 2 * level),)


def oscillator_weight(n: int, N: int) -> tuple:
    """U(n) highest weight of the N-th oscillator level."""
    return (-HALF,) * (n - 1) + (-(HALF + N),)


def ktype_decomposition(n: int, sigma: int, level: int) -> list[KTypeEntry]:
    _check_n_sigma(n, sigma)
    if int(level) != level or level < 0:
        raise ParameterError(f"level I must be a non-negative integer, got {level}")
    weight = level_weight(n, sigma, level)
    out = []
    for j in range(level + 1):
        l = sigma + 2 * j
        so = (l,) + (0,) * (n // 2 - 1)
        out.append(KTypeEntry(l=l, dim=harmonic_dim(n, l), un_weight=weight, so_weight=so))
    return out


def level_degeneracy(n: int, sigma: int, level: int) -> int:
    """Dimension of the level-I eigenspace, cross-checked against C(2I+sigma+n-1, n-1)."""
    total = sum(e.dim for e in ktype_decomposition(n, sigma, level))
    closed = exact_binomial(2 * level + sigma + n - 1, n - 1)
    if total != closed:
        raise NumericalError(
            f"degeneracy identity failed for n={n}, sigma={sigma}, I={level}: {total} != {closed}"
        )
    return total


def format_weight(weight) -> str:
    return "(" + ",".join(str(Fraction(w)) for w in weight) + ")"
