from fractions import Fraction

import numpy as np
import pytest

from o1kepler import eigensolver, micz2d, spectrum
from o1kepler.errors import DomainError, ParameterError
from o1kepler.micz2d import constant_angle, cosine, fourier, power_exp, separable, transport_wavefunction

ONE = separable(power_exp(0, 0.0), constant_angle, 0, "1")
EXP1 = separable(power_exp(0, 1.0), constant_angle, 0, "exp(-r)")
GROUND = separable(power_exp(0, 2.0), constant_angle, 0, "exp(-2r)")
COS = separable(power_exp(0, 1.0), cosine(1), 0, "exp(-r)cos(phi)")
HALF = separable(power_exp(1, 1.0), fourier(0.5), Fraction(1, 2), "r exp(-r) exp(i phi/2)")

rho = np.geomspace(0.1, 2.5, 15)
theta = np.linspace(0, np.pi, 7, endpoint=False)
R, T = np.meshgrid(rho, theta, indexing="ij")


def test_transport_examples():
    assert transport_wavefunction(ONE)(R, T) == pytest.approx(2 * R)
    assert transport_wavefunction(EXP1)(R, T) == pytest.approx(2 * R * np.exp(-R * R))
    psi = transport_wavefunction(HALF)
    assert psi(R, T) == pytest.approx(2 * R * np.exp(1j * T) * R * R * np.exp(-R * R))
    assert psi.sigma == 1
    assert micz2d.parity_defect(psi, R, T) < 1e-14
    assert micz2d.parity_defect(transport_wavefunction(COS), R, T) < 1e-14


@pytest.mark.parametrize("Psi", [GROUND, COS, HALF])
def test_transport_jet_finite_differences(Psi):
    psi = transport_wavefunction(Psi)
    J = psi.jet(R, T)
    h = 1e-4
    f = lambda a, b: psi(a, b)  # noqa: E731
    fr = (f(R + h, T) - f(R - h, T)) / (2 * h)
    fa = (f(R, T + h) - f(R, T - h)) / (2 * h)
    frr = (f(R + h, T) - 2 * f(R, T) + f(R - h, T)) / h**2
    faa = (f(R, T + h) - 2 * f(R, T) + f(R, T - h)) / h**2
    fra = (f(R + h, T + h) - f(R + h, T - h) - f(R - h, T + h) + f(R - h, T - h)) / (4 * h * h)
    scale = np.max(np.abs(J.f))
    for exact, fd in [(J.f_r, fr), (J.f_a, fa), (J.f_rr, frr), (J.f_aa, faa), (J.f_ra, fra)]:
        assert np.max(np.abs(exact - fd)) < 1e-5 * scale * 10


def test_kepler_hamiltonian_cartesian_oracle():
    # H psi = -(1/(8 rho)) Lap(psi / rho) - psi / rho^2 via a 5-point Cartesian stencil
    psi = transport_wavefunction(COS)

    def g(x, y):
        r = np.hypot(x, y)
        return psi(r, np.arctan2(y, x)).real / r

    x, y = R * np.cos(T), R * np.sin(T)
    h = 1e-3 * R
    lap = (g(x + h, y) + g(x - h, y) + g(x, y + h) + g(x, y - h) - 4 * g(x, y)) / h**2
    fd = -lap / (8 * R) - psi(R, T).real / R**2
    exact = micz2d.kepler_hamiltonian_2d(psi, R, T).real
    assert np.max(np.abs(fd - exact)) < 1e-4 * np.max(np.abs(exact))


def test_hydrogen_ground():
    assert micz2d.micz_hamiltonian(GROUND, R, T) == pytest.approx(-2 * GROUND(R, T), rel=1e-13)
    assert micz2d.operator_identity_residual(GROUND) <= 1e-10


@pytest.mark.parametrize("Psi", [COS, HALF])
def test_operator_identity(Psi):
    assert micz2d.operator_identity_residual(Psi) <= 1e-8


def test_transported_eigenfunction():
    psi = transport_wavefunction(GROUND)
    assert micz2d.eigen_residual(psi, spectrum.kepler_level_energy(2, 0, 0)) <= 1e-8
    assert micz2d.eigen_residual(psi, -1.9) > 1e-2


def test_inner_products():
    rep = micz2d.inner_product_check(EXP1, EXP1)
    assert rep.ok
    assert rep.cases[0].expected == pytest.approx([np.pi / 2, 0.0], abs=1e-10)
    rep = micz2d.inner_product_check(EXP1, COS)
    assert rep.ok and abs(complex(*rep.cases[0].actual)) < 1e-10
    assert micz2d.inner_product_check(GROUND, GROUND).cases[0].max_abs_dev <= 1e-8
    assert micz2d.inner_product_check(HALF, HALF).ok


def test_metric_pullback():
    rng = np.random.default_rng(0)
    for r, a in zip(rng.uniform(0.1, 3, 10), rng.uniform(0, np.pi, 10)):
        g = micz2d.pullback_metric(r, a)
        assert g == pytest.approx(4 * r * r * np.diag([1.0, r * r]), abs=1e-12)


def test_arc_length_pullback():
    # length of a sampled curve in (rho, theta) measured with the pulled-back metric
    # equals the Euclidean length of its image
    t = np.linspace(0, 1, 20001)
    rho_c, th_c = 0.5 + t, 0.3 * np.sin(3 * t)
    x, y = rho_c**2 * np.cos(2 * th_c), rho_c**2 * np.sin(2 * th_c)
    image = np.sum(np.hypot(np.diff(x), np.diff(y)))
    dr, dth = np.diff(rho_c), np.diff(th_c)
    mid = 0.5 * (rho_c[1:] + rho_c[:-1])
    pulled = np.sum(2 * mid * np.sqrt(dr**2 + mid**2 * dth**2))
    assert pulled == pytest.approx(image, rel=1e-7)


def test_spectrum_transport():
    for sigma in (0, 1):
        for level in range(3):
            p = spectrum.RadialFamilyParams(1, level + Fraction(sigma, 2))
            numeric = eigensolver.solve_radial_family(p, eigensolver.SolverConfig(num_levels=1))[0]
            assert numeric == pytest.approx(spectrum.kepler_level_energy(2, sigma, level), rel=1e-6)


def test_errors():
    with pytest.raises(DomainError):
        micz2d.operator_identity_residual(GROUND, (np.array([0.0, 1.0]), np.array([0.0, 0.0])))
    with pytest.raises(ParameterError):
        separable(power_exp(0, 1), constant_angle, Fraction(1, 3))
    with pytest.raises(DomainError):
        GROUND(np.array([-1.0]), np.array([0.0]))
