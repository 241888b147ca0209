import itertools
from fractions import Fraction

import numpy as np
import pytest

from o1kepler import fock, reps
from o1kepler.errors import ParameterError
from o1kepler.reps import harmonic_dim, ktype_decomposition, level_degeneracy

HALF = Fraction(1, 2)


def monomials(n, degree):
    return [e for e in itertools.product(range(degree + 1), repeat=n) if sum(e) == degree]


def brute_harmonic_dim(n, l):
    """Kernel dimension of the Laplacian from degree-l to degree-(l-2) monomials."""
    src = monomials(n, l)
    if l < 2:
        return len(src)
    dst = {e: i for i, e in enumerate(monomials(n, l - 2))}
    A = np.zeros((len(dst), len(src)))
    for col, e in enumerate(src):
        for i in range(n):
            if e[i] >= 2:
                f = list(e)
                f[i] -= 2
                A[dst[tuple(f)], col] += e[i] * (e[i] - 1)
    return len(src) - np.linalg.matrix_rank(A)


def brute_level_count(n, N):
    """Monomials of total degree N in n variables (oscillator level N)."""
    return len(monomials(n, N))


@pytest.mark.parametrize("n,l,expected", [(3, 2, 5), (2, 3, 2), (4, 0, 1), (6, 0, 1)])
def test_harmonic_dim_examples(n, l, expected):
    assert harmonic_dim(n, l) == expected == brute_harmonic_dim(n, l)


def test_harmonic_dim_brute_force():
    for n in range(2, 6):
        for l in range(7):
            assert harmonic_dim(n, l) == brute_harmonic_dim(n, l)
        assert harmonic_dim(n, 1) == n


def test_ktype_examples():
    got = ktype_decomposition(3, 1, 1)
    assert [(e.l, e.dim) for e in got] == [(1, 3), (3, 7)]
    assert [e.dim for e in got] == [brute_harmonic_dim(3, 1), brute_harmonic_dim(3, 3)]
    assert reps.level_weight(2, 1, 0) == (-HALF, -Fraction(3, 2))
    for n in range(2, 7):
        assert [(e.l, e.dim) for e in ktype_decomposition(n, 0, 0)] == [(0, 1)]


@pytest.mark.parametrize("n,sigma,level,expected", [(3, 0, 1, 6), (2, 1, 0, 2), (5, 0, 0, 1)])
def test_level_degeneracy_examples(n, sigma, level, expected):
    assert level_degeneracy(n, sigma, level) == expected
    assert brute_level_count(n, 2 * level + sigma) == expected


def test_binomial_identity_exact():
    for n in range(2, 11):
        for sigma in (0, 1):
            for level in range(21):
                total = sum(harmonic_dim(n, 2 * j + sigma) for j in range(level + 1))
                assert total == reps.exact_binomial(2 * level + sigma + n - 1, n - 1)
                assert level_degeneracy(n, sigma, level) == total


def test_matches_fock_levels():
    for n in range(2, 7):
        basis = fock.build_basis(n, 9)
        for sigma in (0, 1):
            for level in range(5):
                assert level_degeneracy(n, sigma, level) == fock.level_dimension(basis, 2 * level + sigma)


def test_multiplicity_free():
    for n in range(2, 7):
        for sigma in (0, 1):
            for level in range(6):
                ls = [e.l for e in ktype_decomposition(n, sigma, level)]
                assert len(ls) == len(set(ls))


def test_weights_and_format():
    e = ktype_decomposition(5, 1, 2)[-1]
    assert e.so_weight == (5, 0)
    assert e.un_weight == (-HALF,) * 4 + (-Fraction(11, 2),)
    assert reps.format_weight(e.un_weight) == "(-1/2,-1/2,-1/2,-1/2,-11/2)"
    assert reps.oscillator_weight(3, 4) == reps.level_weight(3, 0, 2)


def test_errors():
    with pytest.raises(ParameterError):
        harmonic_dim(1, 2)
    with pytest.raises(ParameterError):
        ktype_decomposition(3, 0, -1)
    with pytest.raises(ParameterError):
        level_degeneracy(3, 2, 0)


def test_degeneracy_overflow_is_explicit():
    with pytest.raises(OverflowError):
        level_degeneracy(40, 0, 40)
