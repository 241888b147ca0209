import itertools
import warnings
from fractions import Fraction

import numpy as np
import pytest

from o1kepler import eigensolver, spectrum
from o1kepler.eigensolver import SolverConfig, solve_kepler_channel, solve_radial_family
from o1kepler.errors import AccuracyWarning, BoxSizeError, ParameterError
from o1kepler.spectrum import QuantumChannel, RadialFamilyParams

H = Fraction(1, 2)
MATRIX = [RadialFamilyParams(m, l) for m, l in itertools.product([1, 3 * H, 2, 5 * H, 3], [0, H, 1, 2])]


def closed(p, count):
    return np.array([spectrum.radial_family_energy(p, k) for k in range(1, count + 1)])


@pytest.mark.parametrize("m,l,levels,expected", [
    (2, 0, 3, [-1 / 2, -1 / 8, -1 / 18]),
    (1, 0, 1, [-2.0]),
    (3 * H, H, 1, [-0.32]),
])
def test_family_examples(m, l, levels, expected):
    got = list(solve_radial_family(RadialFamilyParams(m, l), SolverConfig(num_levels=levels)))
    assert got == pytest.approx(expected, rel=1e-6)


@pytest.mark.parametrize("ch,levels,expected,tol", [
    (QuantumChannel(2, 0, 1, 0), 3, [-2, -2 / 9, -2 / 25], 1e-5),
    (QuantumChannel(3, 1, 1, 1), 2, [-0.32, -0.5 / 2.25**2], 1e-6),
    (QuantumChannel(4, 0, 1, 0), 1, [-0.5], 1e-6),
])
def test_channel_examples(ch, levels, expected, tol):
    got = list(solve_kepler_channel(ch, SolverConfig(num_levels=levels)))
    assert got == pytest.approx(expected, rel=tol)


@pytest.mark.parametrize("p", MATRIX, ids=lambda p: f"m={p.m},l={p.l}")
def test_oracle_agreement(p):
    tol = 1e-5 if p.lprime < 0 else 1e-6
    result = solve_radial_family(p, SolverConfig(num_levels=3))
    assert np.array(list(result)) == pytest.approx(closed(p, 3), rel=tol)
    assert result.warning is None


@pytest.mark.parametrize("p", MATRIX, ids=lambda p: f"m={p.m},l={p.l}")
def test_eigenvector_overlap(p):
    assert eigensolver.eigenvector_overlap(p, 1) >= 1 - 1e-6


def test_excited_overlap():
    p = RadialFamilyParams(5 * H, 1)
    assert eigensolver.eigenvector_overlap(p, 3, SolverConfig(num_levels=3)) >= 1 - 1e-6


@pytest.mark.filterwarnings("ignore::o1kepler.errors.AccuracyWarning")
def test_convergence_order():
    # coarse grids keep the raw error far above round-off
    cfg = SolverConfig(num_levels=3, npoints=400, refinement_levels=3)
    for p in MATRIX:
        if p.lprime < 0:
            continue
        r = solve_radial_family(p, cfg)
        err = np.abs(r.raw - closed(p, 3))
        slope = np.log(err[:-1] / err[1:]) / np.log(r.steps[:-1] / r.steps[1:])[:, None]
        # excited levels are plain second order; a ground level may superconverge
        assert np.all(np.abs(slope[:, 1:] - 2.0) <= 0.2), (p, slope)
        assert np.all((np.abs(slope[:, 0] - 2.0) <= 0.2) | (np.abs(slope[:, 0] - 4.0) <= 0.2)), (p, slope)
        assert r.observed_order[1:] == pytest.approx([2.0, 2.0], abs=0.2)


def test_centrifugal_identity_symbolic():
    for p in MATRIX:
        lp = p.lprime
        assert eigensolver.symmetrized_centrifugal(p) == lp * (lp + 1)
    for m2, l2 in itertools.product(range(1, 13), range(0, 13)):
        p = RadialFamilyParams(Fraction(m2, 2), Fraction(l2, 2))
        assert eigensolver.symmetrized_centrifugal(p) == p.lprime * (p.lprime + 1)


@pytest.mark.filterwarnings("ignore::o1kepler.errors.AccuracyWarning")
def test_symmetric_scheme_integer_lprime():
    for p in [RadialFamilyParams(2, 0), RadialFamilyParams(2, 1), RadialFamilyParams(3, H)]:
        got = solve_radial_family(p, SolverConfig(num_levels=3, scheme="symmetric"))
        assert np.array(list(got)) == pytest.approx(closed(p, 3), rel=1e-6)


def test_coupling_scales_spectrum():
    p = RadialFamilyParams(3 * H, 1)
    g = 1.7
    got = solve_radial_family(p, SolverConfig(num_levels=2), coupling=g)
    assert np.array(list(got)) == pytest.approx(g * g * closed(p, 2), rel=1e-8)


def test_box_too_small():
    with pytest.raises(BoxSizeError, match="increase rmax"):
        solve_radial_family(RadialFamilyParams(2, 0), SolverConfig(num_levels=3, rmax=5.0))


def test_accuracy_warning():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        r = solve_radial_family(RadialFamilyParams(2, 2), SolverConfig(num_levels=3, npoints=200, refinement_levels=2))
    assert r.warning is not None
    assert any(issubclass(w.category, AccuracyWarning) for w in caught)


def test_config_validation():
    with pytest.raises(ParameterError):
        SolverConfig(scheme="spectral")
    with pytest.raises(ParameterError):
        SolverConfig(npoints=50)
    with pytest.raises(ParameterError):
        SolverConfig(num_levels=0)
    with pytest.raises(ParameterError):
        SolverConfig(rmin=5.0, rmax=1.0)
    assert SolverConfig(num_levels=3).box(0.5) == 40 * 4.5**2
    with pytest.raises(ParameterError):
        solve_radial_family(RadialFamilyParams(H, 0), SolverConfig(num_levels=1))


def test_result_container():
    r = solve_radial_family(RadialFamilyParams(2, 0), SolverConfig(num_levels=2))
    assert len(r) == 2 and r[0] == list(r)[0]
    assert r.raw.shape == (3, 2) and np.all(np.diff(r.steps) < 0)
