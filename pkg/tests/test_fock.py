import math

import numpy as np
import pytest

from o1kepler import _kernels_py, fock, reps
from o1kepler.errors import GuardError, ParameterError, ResourceError
from o1kepler.fock import Generator, build_basis, commutator, generator_matrix, ladder_matrix
from o1kepler.normal_order import WeylPoly, decompose, generator_poly


def drop_sqrt2(gen, op):
    """Mutation: both E(-2e^j) and its adjoint lose their 1/sqrt(2)."""
    return op * math.sqrt(2) if gen.kind == "double" else op


@pytest.mark.parametrize("n,nmax,count", [(1, 2, 3), (2, 2, 6), (3, 1, 4)])
def test_basis_size(n, nmax, count):
    assert build_basis(n, nmax).count == count


def test_basis_order_and_rank():
    b = build_basis(3, 5)
    levels = b.levels
    assert np.all(np.diff(levels) >= 0)
    for i, nu in enumerate(b.states.tolist()):
        assert b.ordinal(nu) == i
        assert _kernels_py.fock_rank(nu, 3) == i
        assert fock._backend.fock_rank(np.asarray(nu, dtype=np.int64), 3) == i
        if i:
            prev = b.states[i - 1].tolist()
            if sum(prev) == sum(nu):
                assert prev < nu


def test_resource_budget(monkeypatch):
    monkeypatch.setenv("KEPLER_MAX_BASIS", "50")
    with pytest.raises(ResourceError, match="56 states"):
        build_basis(3, 5)
    monkeypatch.setenv("KEPLER_MAX_BASIS", "lots")
    with pytest.raises(ParameterError):
        build_basis(2, 2)


def test_ladder_elements():
    b = build_basis(1, 4)
    a, ad = ladder_matrix(b, 1, "annihilate"), ladder_matrix(b, 1, "create")
    assert a.apply(b.unit([1])) == pytest.approx(b.unit([0]))
    assert ad.apply(b.unit([1])) == pytest.approx(math.sqrt(2) * b.unit([2]))
    with pytest.raises(ParameterError):
        ladder_matrix(b, 2, "create")
    with pytest.raises(ParameterError):
        ladder_matrix(b, 1, "raise")


def test_canonical_commutator_on_guard():
    b = build_basis(3, 6)
    for i in range(1, 4):
        for j in range(1, 4):
            c = commutator(ladder_matrix(b, i, "annihilate"), ladder_matrix(b, j, "create"), b)
            assert c.guard == 4
            expected = np.eye(b.count)[:, : fock.basis_count(3, c.guard)] * (i == j)
            assert np.max(np.abs(c.guarded(b) - expected)) < 1e-13
    # truncation artefact lives only above the guard
    c = commutator(ladder_matrix(b, 1, "annihilate"), ladder_matrix(b, 1, "create"), b)
    assert abs(c.matrix[b.ordinal([6, 0, 0]), b.ordinal([6, 0, 0])] - 1.0) > 1


def test_generator_examples():
    b = build_basis(3, 4)
    vac = b.vacuum()
    assert generator_matrix(b, "Hamiltonian").apply(vac) == pytest.approx(1.5 * vac)
    assert (generator_matrix(b, "H1") * -1.0).apply(vac) == pytest.approx(0.5 * vac)
    assert generator_matrix(b, "E(-2e1)").apply(vac) == pytest.approx(b.unit([2, 0, 0]), abs=1e-15)


def test_label_parsing():
    assert fock.parse_label("E(-e1+e2)^dag", 3) == Generator("diff", 1, 2, True)
    assert fock.parse_label("E(-e2-e3)", 3) == Generator("sum", 2, 3)
    assert fock.parse_label("E(-2e3)", 3).root(3) == (0, 0, -2)
    for bad in ["E(-e2+e1)", "H4", "H1^dag", "X", "E(-2e0)"]:
        with pytest.raises(ParameterError):
            fock.parse_label(bad, 3)
    for g in fock.all_generators(3):
        assert fock.parse_label(g.label, 3) == g
    assert len(fock.all_generators(4)) == 4 * 9


def test_commutator_examples():
    b = build_basis(2, 6)
    H1, H2 = generator_matrix(b, "H1"), generator_matrix(b, "H2")
    assert np.max(np.abs(commutator(H1, H2, b).guarded(b))) == 0.0
    for i in (1, 2):
        Hi, E = generator_matrix(b, f"H{i}"), generator_matrix(b, f"E(-2e{i})")
        c = commutator(Hi, E, b)
        ref = (E * -2.0).matrix[:, fock.guard_columns(b, c.guard)].toarray()
        assert np.max(np.abs(c.guarded(b) - ref)) < 1e-13
    E, Ed = generator_matrix(b, "E(-2e1)"), generator_matrix(b, "E(-2e1)^dag")
    c = commutator(E, Ed, b)
    ref = (H1 * 2.0).matrix[:, fock.guard_columns(b, c.guard)].toarray()
    assert np.max(np.abs(c.guarded(b) - ref)) < 1e-13


def test_oracle_examples():
    n = 2
    g = lambda s: generator_poly(fock.parse_label(s, n), n)  # noqa: E731
    coeffs, c0, resid = decompose(g("H1").commutator(g("E(-2e1)")), [g("E(-2e1)")])
    assert coeffs[0] == pytest.approx(-2.0) and c0 == 0 and resid < 1e-15
    coeffs, c0, resid = decompose(g("E(-2e1)").commutator(g("E(-2e1)^dag")), [g("H1"), g("H2")], with_identity=False)
    assert coeffs == pytest.approx([2.0, 0.0]) and resid < 1e-15


def test_normal_product_rule():
    a, ad = WeylPoly.annihilate(1, 0), WeylPoly.create(1, 0)
    # a a^dag = a^dag a + 1
    assert (a * ad - ad * a).cleaned().terms == WeylPoly.identity(1).terms
    # a^2 (a^dag)^2 = (a^dag)^2 a^2 + 4 a^dag a + 2
    got = (a * a * ad * ad).terms
    assert got == {((2,), (2,)): 1.0, ((1,), (1,)): 4.0, ((0,), (0,)): 2.0}


def test_oracle_agrees_with_matrices_on_words():
    # independent of generators: random words in a, a^dag evaluated both ways
    rng = np.random.default_rng(3)
    n = 2
    b = build_basis(n, 10)
    for _ in range(20):
        word = [(int(rng.integers(0, n)), bool(rng.integers(0, 2))) for _ in range(4)]
        poly, mat = WeylPoly.identity(n), fock._identity(b)
        for mode, dag in word:
            poly = poly * (WeylPoly.create(n, mode) if dag else WeylPoly.annihilate(n, mode))
            mat = mat @ ladder_matrix(b, mode + 1, "create" if dag else "annihilate")
        rebuilt = fock._identity(b, 0.0)
        rebuilt = rebuilt.matrix * 0
        for (cre, ann), c in poly.terms.items():
            op = fock._identity(b)
            for i in range(n):
                for _ in range(cre[i]):
                    op = op @ ladder_matrix(b, i + 1, "create")
            for i in range(n):
                for _ in range(ann[i]):
                    op = op @ ladder_matrix(b, i + 1, "annihilate")
            rebuilt = rebuilt + c * op.matrix
        cols = fock.guard_columns(b, b.nmax - 4)
        assert np.max(np.abs((mat.matrix - rebuilt)[:, cols].toarray())) < 1e-10


@pytest.mark.parametrize("n", [2, 3])
def test_verify_sp_algebra(n):
    report = fock.verify_sp_algebra(n, 6)
    assert report.ok, str(report)
    assert report.passed == len(report.cases) > 0


def test_mutation_is_caught():
    report = fock.verify_sp_algebra(2, 6, matrix_hook=drop_sqrt2)
    failed = {c.name for c in report.failures()}
    assert "cartan_valued[E(-2e1),E(-2e1)^dag]" in failed
    dev = next(c for c in report.cases if c.name == "cartan_valued[E(-2e1),E(-2e1)^dag]").max_abs_dev
    # 4 H_1 instead of 2 H_1: deviation 2|H_1| on the guard block
    b = build_basis(2, 6)
    guard = fock.basis_count(2, 2)
    assert dev == pytest.approx(2 * np.max(np.abs(generator_matrix(b, "H1").matrix.diagonal()[:guard])))


def test_mutation_on_E_only_also_fails():
    hook = lambda g, op: op * math.sqrt(2) if g == Generator("double", 1) else op  # noqa: E731
    assert not fock.verify_sp_algebra(2, 6, matrix_hook=hook).ok


def test_guard_errors():
    with pytest.raises(GuardError):
        fock.verify_sp_algebra(2, 1)
    b = build_basis(2, 3)
    E = generator_matrix(b, "E(-2e1)")
    with pytest.raises(GuardError):
        commutator(E, E.adjoint(), b)


def test_grading_and_adjointness():
    b = build_basis(3, 5)
    for g in fock.all_generators(3):
        op = generator_matrix(b, g)
        assert op.shift == g.shift
        assert op.respects_grading(b)
        dag = generator_matrix(b, g.adjoint())
        assert (dag.matrix - op.matrix.T).count_nonzero() == 0


def test_energy_grading():
    for n in (2, 3, 4):
        b = build_basis(n, 7)
        assert fock.hamiltonian_spectrum_dev(b) < 1e-13
        for N in range(8):
            assert fock.level_dimension(b, N) == math.comb(N + n - 1, n - 1)
        for sigma in (0, 1):
            for level in range(3):
                assert fock.level_dimension(b, 2 * level + sigma) == reps.level_degeneracy(n, sigma, level)


def test_highest_weight_examples():
    b4 = build_basis(4, 4)
    cartan4 = [generator_matrix(b4, h) for h in fock.cartan_generators(4)]
    assert fock.weight_of(b4.vacuum(), b4, cartan4) == pytest.approx([-0.5] * 4)
    b2 = build_basis(2, 6)
    cartan2 = [generator_matrix(b2, h) for h in fock.cartan_generators(2)]
    assert fock.weight_of(fock.power_state(b2, 1), b2, cartan2) == pytest.approx([-0.5, -1.5])
    assert fock.weight_of(fock.power_state(b2, 4), b2, cartan2)[-1] == pytest.approx(-4.5)


@pytest.mark.parametrize("n,parity", [(2, 0), (2, 1), (3, 0), (3, 1), (4, 1)])
def test_highest_weight_report(n, parity):
    report = fock.highest_weight_report(n, parity, build_basis(n, 8 if n < 4 else 6))
    assert report.ok, str(report)


def test_power_state_matches_ladder():
    b = build_basis(3, 6)
    ad = ladder_matrix(b, 3, "create")
    v = b.vacuum()
    for N in range(1, 7):
        v = ad.apply(v)
        assert v / fock.factorial_norm(N) == pytest.approx(fock.power_state(b, N))


@pytest.mark.parametrize("n", [3, 4])
def test_so_highest_weight_count(n):
    b = build_basis(n, 6)
    for N in range(7):
        assert fock.so_highest_weight_count(b, N) == N // 2 + 1


def test_so_count_rejects_n2():
    with pytest.raises(ParameterError):
        fock.so_highest_weight_count(build_basis(2, 3), 2)
