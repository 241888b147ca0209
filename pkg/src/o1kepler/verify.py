"""Verification suites behind ``o1kepler verify``.

Each suite returns a ``VerificationReport``; default tolerances are the
per-suite constants in ``DEFAULT_TOL`` and can be overridden.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import eigensolver, fock, micz2d, radial, reps, spectrum, twist
from .report import VerificationReport

DEFAULT_TOL = {
    "algebra": 1e-12,
    "radial": 1e-8,
    "twist": 1e-8,
    "micz2d": 1e-8,
    "eigensolver": 1e-6,
    "degeneracy": 0.0,
}
SUITES = ("algebra", "radial", "twist", "micz2d", "eigensolver", "degeneracy")
NEGATIVE_LPRIME_TOL = 1e-5
NORM_TOL = 1e-10


def _tol(suite, tol):
    return DEFAULT_TOL[suite] if tol is None else tol


def _channels(n, lmax, kmax):
    for l in range(lmax + 1):
        for k in range(1, kmax + 1):
            yield spectrum.QuantumChannel(n=n, sigma=l % 2, k=k, l=l)


def suite_algebra(n=2, nmax=6, tol=None) -> VerificationReport:
    tol = _tol("algebra", tol)
    report = VerificationReport(suite="algebra")
    algebra = fock.verify_sp_algebra(n, nmax, tol=tol)
    report.extend(algebra)
    basis = fock.build_basis(n, nmax)
    for parity in (0, 1):
        report.extend(fock.highest_weight_report(n, parity, basis, tol=tol), prefix=f"parity{parity}:")
    report.notes = sorted(set(report.notes))
    report.check_deviation("hamiltonian_levels", fock.hamiltonian_spectrum_dev(basis), tol, n=n, nmax=nmax)
    return report.finish()


def suite_radial(n=2, tol=None, lmax=6, kmax=5, gram_k=6) -> VerificationReport:
    tol = _tol("radial", tol)
    report = VerificationReport(suite="radial")
    for ch in _channels(n, lmax, kmax):
        state = radial.radial_normalize(ch)
        params = dict(n=n, sigma=ch.sigma, k=ch.k, l=ch.l)
        report.check_deviation("residual", radial.radial_residual(state), tol, **params)
        grid = np.linspace(1e-3, 10 * np.sqrt(state.nI) * np.sqrt(ch.k + 1), 20000)
        report.check_equal("node_count", ch.k - 1, radial.count_nodes(radial.radial_eval(state, grid)), **params)
    for l in range(lmax + 1):
        states = [radial.radial_normalize(spectrum.QuantumChannel(n, l % 2, k, l)) for k in range(1, gram_k + 1)]
        gram = np.array([[radial.radial_inner_product(a, b) for b in states] for a in states])
        report.check("gram_identity", np.eye(gram_k), gram, tol, n=n, l=l)
    if n == 2:
        c = radial.radial_normalize(spectrum.QuantumChannel(2, 0, 1, 0)).c
        report.check("ground_normalization", np.sqrt(32.0), c, NORM_TOL, relative=True, n=2, sigma=0, k=1, l=0)
    return report.finish()


def suite_twist(n=2, tol=None, max_level=3) -> VerificationReport:
    tol = _tol("twist", tol)
    report = VerificationReport(suite="twist")
    for sigma in (0, 1):
        for level in range(max_level + 1):
            energy = spectrum.kepler_level_energy(n, sigma, level)
            constants = []
            for ch in spectrum.channels_at_level(n, sigma, level):
                t = twist.twist(ch)
                constants.append(t.cI)
                params = dict(n=n, sigma=sigma, I=level, k=ch.k, l=ch.l)
                report.check("norm_preserved", 1.0, twist.twisted_norm(t), NORM_TOL, **params)
                report.check_deviation("oscillator_residual", twist.oscillator_residual(t), tol,
                                       expected=t.eigenvalue, **params)
                report.check("mean_inverse_square", -2 * energy, twist.mean_inverse_square(t.source), tol,
                             relative=True, **params)
                report.check("closed_form_cI", twist.closed_form_twist_constant(ch), t.cI, tol,
                             relative=True, **params)
            report.check_deviation("level_coherence", float(np.ptp(constants) / np.max(constants)), tol,
                                   n=n, sigma=sigma, I=level)
    if n == 2:
        report.check("ground_cI", 0.5, twist.twist_constant(spectrum.QuantumChannel(2, 0, 1, 0)), NORM_TOL,
                     relative=True, n=2, sigma=0, k=1, l=0)
    return report.finish()


MICZ_FUNCTIONS = (
    ("exp(-2r)", 0, 0.0, 2.0, "one", 0),
    ("exp(-r)cos(phi)", 0, 0.0, 1.0, "cos", 1),
    ("r exp(-r) exp(i phi/2)", Fraction(1, 2), 1.0, 1.0, "fourier", 0.5),
)


def micz_test_functions():
    out = []
    for name, mu, power, decay, kind, m in MICZ_FUNCTIONS:
        angular = {"one": micz2d.constant_angle, "cos": micz2d.cosine(m), "fourier": micz2d.fourier(m)}[kind]
        out.append(micz2d.separable(micz2d.power_exp(power, decay), angular, mu, name))
    return out


def suite_micz2d(tol=None, seed=20080507) -> VerificationReport:
    tol = _tol("micz2d", tol)
    report = VerificationReport(suite="micz2d")
    funcs = micz_test_functions()
    for Psi in funcs:
        report.check_deviation("operator_identity", micz2d.operator_identity_residual(Psi), tol,
                               function=Psi.name, mu=Psi.mu)
        rho, theta = micz2d.default_plane_grid()
        report.check_deviation("parity_sector", micz2d.parity_defect(micz2d.transport_wavefunction(Psi), rho, theta),
                               tol, function=Psi.name, sigma=Psi.sigma)
    ground = funcs[0]
    report.check("hydrogen_ground_energy", -2.0,
                 float(np.real(micz2d.micz_hamiltonian(ground, 1.0, 0.0) / ground(1.0, 0.0))), tol)
    psi = micz2d.transport_wavefunction(ground)
    report.check_deviation("transported_eigenfunction", micz2d.eigen_residual(psi, spectrum.kepler_level_energy(2, 0, 0)),
                           tol, expected=-2.0)
    e_r = micz2d.separable(micz2d.power_exp(0, 1), micz2d.constant_angle, 0, "exp(-r)")
    for a, b in ((e_r, e_r), (e_r, funcs[1]), (ground, ground), (funcs[2], funcs[2])):
        report.extend(micz2d.inner_product_check(a, b, tol))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for rho, theta in zip(rng.uniform(0.1, 3.0, 20), rng.uniform(0.0, np.pi, 20)):
        g = micz2d.pullback_metric(rho, theta)
        expected = 4 * rho**2 * np.diag([1.0, rho**2])
        worst = max(worst, float(np.max(np.abs(g - expected)) / np.max(expected)))
    report.check_deviation("metric_pullback", worst, 1e-10, points=20)
    # Kepler n=2 levels vs the MICZ radial problem (m=1, l=|j|+mu), k=1 channel of level I
    for sigma in (0, 1):
        mu = Fraction(sigma, 2)
        for level in range(4):
            p = spectrum.RadialFamilyParams(m=1, l=level + mu)
            numeric = eigensolver.solve_radial_family(p, eigensolver.SolverConfig(num_levels=1))[0]
            report.check("spectrum_transport", spectrum.kepler_level_energy(2, sigma, level), numeric, 1e-6,
                         relative=True, sigma=sigma, I=level, micz_l=p.l)
    return report.finish()


def suite_eigensolver(n=2, tol=None, lmax=4, levels=3) -> VerificationReport:
    tol = _tol("eigensolver", tol)
    report = VerificationReport(suite="eigensolver")
    cfg = eigensolver.SolverConfig(num_levels=levels)
    for sigma in (0, 1):
        for l in range(sigma, lmax + 1, 2):
            ch = spectrum.QuantumChannel(n, sigma, 1, l)
            p = ch.family_params()
            case_tol = NEGATIVE_LPRIME_TOL if p.lprime < 0 and tol == DEFAULT_TOL["eigensolver"] else tol
            result = eigensolver.solve_kepler_channel(ch, cfg)
            for k in range(1, levels + 1):
                closed = spectrum.channel_energy(spectrum.QuantumChannel(n, sigma, k, l))
                report.check("channel_energy", closed, result[k - 1], case_tol, relative=True,
                             n=n, sigma=sigma, l=l, k=k, lprime=p.lprime)
            report.check("eigenvector_overlap", 1.0, eigensolver.eigenvector_overlap(p, 1, cfg), tol,
                         n=n, sigma=sigma, l=l)
    return report.finish()


def suite_degeneracy(n=2, tol=None, max_level=20, fock_level=4) -> VerificationReport:
    report = VerificationReport(suite="degeneracy")
    if n == 2:
        report.notes.append(reps.N2_CAVEAT)
    for sigma in (0, 1):
        for level in range(max_level + 1):
            total = sum(reps.harmonic_dim(n, 2 * j + sigma) for j in range(level + 1))
            closed = reps.exact_binomial(2 * level + sigma + n - 1, n - 1)
            report.check_equal("binomial_identity", closed, total, n=n, sigma=sigma, I=level)
    basis = fock.build_basis(n, 2 * fock_level + 1)
    for sigma in (0, 1):
        for level in range(fock_level + 1):
            report.check_equal("fock_level_dimension", reps.level_degeneracy(n, sigma, level),
                               fock.level_dimension(basis, 2 * level + sigma), n=n, sigma=sigma, I=level)
    return report.finish()


def run_suite(name, n=2, nmax=6, tol=None) -> VerificationReport:
    if name == "algebra":
        return suite_algebra(n, nmax, tol)
    if name == "radial":
        return suite_radial(n, tol)
    if name == "twist":
        return suite_twist(n, tol)
    if name == "micz2d":
        return suite_micz2d(tol)
    if name == "eigensolver":
        return suite_eigensolver(n, tol)
    if name == "degeneracy":
        return suite_degeneracy(n, tol)
    raise ValueError(f"unknown suite {name!r}")
