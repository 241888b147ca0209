"""Truncated Fock space of the n-dimensional isotropic oscillator.

States are occupation multi-indices nu with |nu| <= Nmax, ordered by
(|nu|, lexicographic nu).  Operators are sparse matrices carrying their
degree shift.  Because every quadratic generator is built in normal order
(annihilators first), a generator of shift d is exact on all columns of level
<= Nmax - max(d, 0).  Products are trusted only on the *guard subspace* of
levels <= Nmax - |d_A| - |d_B|.

Weight convention: the generators E_alpha below carry negative roots, so they
act as lowering operators for the weight order; their adjoints are the
raising operators.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import cached_property
from math import comb, factorial, sqrt

import numpy as np
import scipy.sparse as sp

from . import _backend
from .errors import GuardError, ParameterError, ResourceError
from .normal_order import decompose, generator_poly
from .report import VerificationReport

DEFAULT_MAX_BASIS = 200_000
CONVENTION_NOTE = (
    "weights are eigenvalues of H_i = -(a_i^dag a_i + 1/2); the listed E_alpha carry "
    "negative roots (lowering), their adjoints are the raising operators"
)


def max_basis_size() -> int:
    raw = os.environ.get("KEPLER_MAX_BASIS")
    if raw is None:
        return DEFAULT_MAX_BASIS
    try:
        return int(raw)
    except ValueError as exc:
        raise ParameterError(f"KEPLER_MAX_BASIS must be an integer, got {raw!r}") from exc


def basis_count(n: int, nmax: int) -> int:
    return comb(nmax + n, n)


def _compositions(total, parts):
    """Compositions of ``total`` into ``parts`` non-negative parts, lexicographically."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True, eq=False)
class FockBasis:
    n: int
    nmax: int
    states: np.ndarray = field(repr=False)

    @cached_property
    def levels(self) -> np.ndarray:
        return self.states.sum(axis=1)

    @cached_property
    def index(self) -> dict:
        return {tuple(nu): i for i, nu in enumerate(self.states.tolist())}

    @property
    def count(self) -> int:
        return len(self.states)

    def ordinal(self, nu) -> int:
        return self.index[tuple(nu)]

    def level_slice(self, level: int) -> slice:
        lo = basis_count(self.n, level - 1) if level > 0 else 0
        return slice(lo, basis_count(self.n, level))

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.count)
        v[0] = 1.0
        return v

    def unit(self, nu) -> np.ndarray:
        v = np.zeros(self.count)
        v[self.ordinal(nu)] = 1.0
        return v


def build_basis(n: int, nmax: int) -> FockBasis:
    if int(n) != n or n < 1:
        raise ParameterError(f"number of modes must be >= 1, got {n}")
    if int(nmax) != nmax or nmax < 0:
        raise ParameterError(f"truncation level must be >= 0, got {nmax}")
    count = basis_count(n, nmax)
    budget = max_basis_size()
    if count > budget:
        raise ResourceError(
            f"Fock basis for n={n}, Nmax={nmax} has {count} states, above the budget {budget} "
            "(raise KEPLER_MAX_BASIS to allow it)"
        )
    states = [nu for level in range(nmax + 1) for nu in _compositions(level, n)]
    return FockBasis(n=n, nmax=nmax, states=np.asarray(states, dtype=np.int64).reshape(count, n))


@dataclass(frozen=True, eq=False)
class GradedOperator:
    matrix: sp.csr_matrix
    shift: int

    def __matmul__(self, other: "GradedOperator") -> "GradedOperator":
        return GradedOperator((self.matrix @ other.matrix).tocsr(), self.shift + other.shift)

    def __add__(self, other):
        if isinstance(other, GradedOperator):
            if other.shift != self.shift and other.matrix.nnz and self.matrix.nnz:
                raise ParameterError("cannot add operators of different degree shift")
            return GradedOperator((self.matrix + other.matrix).tocsr(), self.shift)
        return NotImplemented

    def __sub__(self, other):
        return self + other * -1.0

    def __mul__(self, scalar):
        return GradedOperator((self.matrix * scalar).tocsr(), self.shift)

    __rmul__ = __mul__

    def adjoint(self) -> "GradedOperator":
        return GradedOperator(self.matrix.T.tocsr(), -self.shift)

    def apply(self, vec) -> np.ndarray:
        return self.matrix @ vec

    def respects_grading(self, basis: FockBasis) -> bool:
        coo = self.matrix.tocoo()
        lv = basis.levels
        return bool(np.all(lv[coo.row] == lv[coo.col] + self.shift))


def _identity(basis, coeff=1.0):
    return GradedOperator(sp.identity(basis.count, format="csr") * coeff, 0)


def ladder_matrix(basis: FockBasis, mode: int, kind: str) -> GradedOperator:
    """a_i (kind='annihilate') or a_i^dagger (kind='create') for 1-based ``mode``."""
    if not 1 <= mode <= basis.n:
        raise ParameterError(f"mode must be in 1..{basis.n}, got {mode}")
    if kind not in ("annihilate", "create"):
        raise ParameterError(f"kind must be 'annihilate' or 'create', got {kind!r}")
    rows, cols, vals = _backend.fock_lower_entries(basis.states, mode - 1)
    lower = GradedOperator(
        sp.csr_matrix((vals, (rows, cols)), shape=(basis.count, basis.count)), -1
    )
    return lower if kind == "annihilate" else lower.adjoint()


_LABEL_RE = re.compile(
    r"^(?:H(?P<cartan>\d+)|Hamiltonian"
    r"|E\(-e(?P<dj>\d+)\+e(?P<dk>\d+)\)"
    r"|E\(-e(?P<sj>\d+)-e(?P<sk>\d+)\)"
    r"|E\(-2e(?P<tj>\d+)\))(?P<dag>\^dag|†)?$"
)


@dataclass(frozen=True)
class Generator:
    """A quadratic generator: kind in {'cartan','diff','sum','double','hamiltonian'}."""

    kind: str
    j: int = 0
    k: int | None = None
    dagger: bool = False

    @property
    def label(self) -> str:
        if self.kind == "cartan":
            return f"H{self.j}"
        if self.kind == "hamiltonian":
            return "Hamiltonian"
        body = {
            "diff": f"E(-e{self.j}+e{self.k})",
            "sum": f"E(-e{self.j}-e{self.k})",
            "double": f"E(-2e{self.j})",
        }[self.kind]
        return body + ("^dag" if self.dagger else "")

    def root(self, n: int) -> tuple:
        """Root vector (coordinates alpha_i); zero for the Cartan/Hamiltonian."""
        alpha = [0] * n
        if self.kind == "diff":
            alpha[self.j - 1], alpha[self.k - 1] = -1, 1
        elif self.kind == "sum":
            alpha[self.j - 1], alpha[self.k - 1] = -1, -1
        elif self.kind == "double":
            alpha[self.j - 1] = -2
        if self.dagger:
            alpha = [-a for a in alpha]
        return tuple(alpha)

    def adjoint(self) -> "Generator":
        if self.kind in ("cartan", "hamiltonian"):
            return self
        return Generator(self.kind, self.j, self.k, not self.dagger)

    @property
    def shift(self) -> int:
        return {"cartan": 0, "hamiltonian": 0, "diff": 0, "sum": 2, "double": 2}[self.kind] * (
            -1 if self.dagger else 1
        )

    def __str__(self):
        return self.label


def parse_label(label: str, n: int) -> Generator:
    m = _LABEL_RE.match(label.strip())
    if not m:
        raise ParameterError(f"unknown generator label {label!r}")
    dag = m.group("dag") is not None
    if m.group("cartan"):
        gen = Generator("cartan", int(m.group("cartan")))
    elif label.strip().startswith("Hamiltonian"):
        gen = Generator("hamiltonian")
    elif m.group("dj"):
        gen = Generator("diff", int(m.group("dj")), int(m.group("dk")), dag)
    elif m.group("sj"):
        gen = Generator("sum", int(m.group("sj")), int(m.group("sk")), dag)
    else:
        gen = Generator("double", int(m.group("tj")), None, dag)
    if dag and gen.kind in ("cartan", "hamiltonian"):
        raise ParameterError(f"{label!r}: Cartan generators are self-adjoint, drop the dagger")
    _validate(gen, n, label)
    return gen


def _validate(gen: Generator, n: int, label=None):
    label = label or gen.label
    indices = [gen.j] + ([gen.k] if gen.k is not None else [])
    if gen.kind != "hamiltonian" and not all(1 <= i <= n for i in indices):
        raise ParameterError(f"{label!r}: mode index out of range 1..{n}")
    if gen.kind in ("diff", "sum") and not gen.j < gen.k:
        raise ParameterError(f"{label!r}: root labels need j < k")


def root_generators(n: int) -> list[Generator]:
    """The listed E_alpha: -e^j+e^k, -e^j-e^k (j<k) and -2e^j."""
    pairs = [(j, k) for j in range(1, n + 1) for k in range(j + 1, n + 1)]
    return (
        [Generator("diff", j, k) for j, k in pairs]
        + [Generator("sum", j, k) for j, k in pairs]
        + [Generator("double", j) for j in range(1, n + 1)]
    )


def cartan_generators(n: int) -> list[Generator]:
    return [Generator("cartan", i) for i in range(1, n + 1)]


def all_generators(n: int) -> list[Generator]:
    """The n(2n+1) quadratic generators: H_i, E_alpha and E_alpha^dagger."""
    roots = root_generators(n)
    return cartan_generators(n) + roots + [g.adjoint() for g in roots]


def generator_matrix(basis: FockBasis, label) -> GradedOperator:
    gen = parse_label(label, basis.n) if isinstance(label, str) else label
    if not isinstance(gen, Generator):
        raise ParameterError(f"unknown generator {label!r}")
    _validate(gen, basis.n)
    a = lambda i: ladder_matrix(basis, i, "annihilate")  # noqa: E731
    ad = lambda i: ladder_matrix(basis, i, "create")  # noqa: E731
    if gen.kind == "cartan":
        return (ad(gen.j) @ a(gen.j) + _identity(basis, 0.5)) * -1.0
    if gen.kind == "hamiltonian":
        total = _identity(basis, 0.0)
        for i in range(1, basis.n + 1):
            total = total + generator_matrix(basis, Generator("cartan", i))
        return total * -1.0
    if gen.kind == "diff":
        return ad(gen.k) @ a(gen.j) if gen.dagger else ad(gen.j) @ a(gen.k)
    if gen.kind == "sum":
        return a(gen.k) @ a(gen.j) if gen.dagger else ad(gen.j) @ ad(gen.k)
    op = a(gen.j) @ a(gen.j) if gen.dagger else ad(gen.j) @ ad(gen.j)
    return op * (1 / sqrt(2))


def guard_level(basis: FockBasis, *shifts: int) -> int:
    return basis.nmax - sum(abs(s) for s in shifts)


def guard_columns(basis: FockBasis, level: int) -> slice:
    return slice(0, basis_count(basis.n, level))


@dataclass(frozen=True, eq=False)
class Commutator(GradedOperator):
    """AB - BA, valid on columns of level <= ``guard``."""

    guard: int = 0

    def guarded(self, basis: FockBasis) -> np.ndarray:
        return self.matrix[:, guard_columns(basis, self.guard)].toarray()


def commutator(A: GradedOperator, B: GradedOperator, basis: FockBasis) -> Commutator:
    guard = guard_level(basis, A.shift, B.shift)
    if guard < 0:
        raise GuardError(
            f"empty guard subspace: Nmax={basis.nmax} with shifts {A.shift}, {B.shift}; "
            f"need Nmax >= {abs(A.shift) + abs(B.shift)}"
        )
    mat = (A.matrix @ B.matrix - B.matrix @ A.matrix).tocsr()
    return Commutator(mat, A.shift + B.shift, guard)


def _guarded_dev(lhs: Commutator, rhs: GradedOperator, basis) -> float:
    cols = guard_columns(basis, lhs.guard)
    diff = (lhs.matrix - rhs.matrix)[:, cols]
    return float(np.max(np.abs(diff.toarray()))) if diff.shape[1] else 0.0


def _combination(terms, basis, shift, c0=0.0) -> GradedOperator:
    """sum_c c * op (+ c0 * Id) as a graded operator of the given shift."""
    mat = sp.identity(basis.count, format="csr") * c0 if c0 else sp.csr_matrix((basis.count, basis.count))
    for c, op in terms:
        if c:
            mat = mat + op.matrix * float(c)
    return GradedOperator(mat.tocsr(), shift)


def _render(coeffs, gens, c0=0.0) -> str:
    parts = [f"{c:+.12g}*{g}" for c, g in zip(coeffs, gens) if c != 0]
    if c0:
        parts.append(f"{c0:+.12g}*Id")
    return " ".join(parts) if parts else "0"


def verify_sp_algebra(n: int, nmax: int, tol: float = 1e-12, matrix_hook=None) -> VerificationReport:
    """Check the quadratic generators against the normal-ordering oracle.

    ``matrix_hook(generator, operator) -> operator`` may replace matrices on the
    matrix path only (used for mutation tests); the oracle is untouched.
    """
    if nmax < 4:
        raise GuardError(f"verify_sp_algebra needs Nmax >= 4 for double shifts, got {nmax}")
    basis = build_basis(n, nmax)
    report = VerificationReport(suite="algebra")
    report.notes.append(CONVENTION_NOTE)
    gens = all_generators(n)
    polys = {g: generator_poly(g, n) for g in gens}
    mats = {}
    for g in gens:
        op = generator_matrix(basis, g)
        mats[g] = matrix_hook(g, op) if matrix_hook else op
    cartan = cartan_generators(n)

    # (i) Cartan generators commute
    for a_i, Hi in enumerate(cartan):
        for Hj in cartan[a_i + 1:]:
            comm = commutator(mats[Hi], mats[Hj], basis)
            report.check_deviation(f"cartan_commute[{Hi},{Hj}]", _guarded_dev(comm, comm * 0.0, basis), tol, n=n, nmax=nmax)

    # (ii) [H_i, E_alpha] = alpha_i E_alpha
    for g in root_generators(n):
        alpha = g.root(n)
        for i, Hi in enumerate(cartan):
            comm = commutator(mats[Hi], mats[g], basis)
            dev = _guarded_dev(comm, mats[g] * float(alpha[i]), basis)
            coeffs, c0, resid = decompose(polys[Hi].commutator(polys[g]), [polys[g]])
            oracle_dev = max(abs(coeffs[0] - alpha[i]), abs(c0), resid)
            report.check_deviation(
                f"root_action[{Hi},{g}]", max(dev, oracle_dev), tol,
                expected=float(alpha[i]), actual=float(coeffs[0]), n=n, nmax=nmax,
            )

    # (iii) [E_alpha, E_alpha^dag] in the Cartan span, coefficients from the oracle
    cartan_polys = [polys[h] for h in cartan]
    for g in root_generators(n):
        gd = g.adjoint()
        coeffs, _, resid = decompose(polys[g].commutator(polys[gd]), cartan_polys, with_identity=False)
        rhs = _combination([(c, mats[h]) for c, h in zip(coeffs, cartan)], basis, 0)
        comm = commutator(mats[g], mats[gd], basis)
        dev = _guarded_dev(comm, rhs, basis)
        report.check_deviation(
            f"cartan_valued[{g},{gd}]", max(dev, resid), tol,
            expected=_render(coeffs, cartan), actual=dev, n=n, nmax=nmax,
        )

    # (iv) closure of all pairwise commutators in span(generators, Id)
    basis_polys = [polys[g] for g in gens]
    for ia, ga in enumerate(gens):
        for gb in gens[ia + 1:]:
            coeffs, c0, resid = decompose(polys[ga].commutator(polys[gb]), basis_polys)
            comm = commutator(mats[ga], mats[gb], basis)
            rhs = _combination([(c, mats[g]) for c, g in zip(coeffs, gens)], basis, comm.shift, c0)
            dev = _guarded_dev(comm, rhs, basis)
            report.check_deviation(
                f"closure[{ga},{gb}]", max(dev, resid), tol,
                expected=_render(coeffs, gens, c0), actual=dev, n=n, nmax=nmax,
            )
    return report.finish()


def weight_of(vec, basis: FockBasis, cartan_mats) -> np.ndarray:
    """Eigenvalues of (H_1..H_n) on ``vec`` via Rayleigh quotients."""
    norm2 = float(vec @ vec)
    return np.array([float(vec @ (H.matrix @ vec)) / norm2 for H in cartan_mats])


def _eigen_dev(vec, weights, cartan_mats) -> float:
    dev = 0.0
    for w, H in zip(weights, cartan_mats):
        dev = max(dev, float(np.max(np.abs(H.matrix @ vec - w * vec))))
    return dev


def power_state(basis: FockBasis, N: int) -> np.ndarray:
    """Normalized (a_n^dag)^N |0>."""
    nu = [0] * basis.n
    nu[-1] = N
    return basis.unit(nu)


def highest_weight_report(n: int, parity: int, basis: FockBasis, tol: float = 1e-12) -> VerificationReport:
    if parity not in (0, 1):
        raise ParameterError(f"parity must be 0 or 1, got {parity}")
    if basis.n != n:
        raise ParameterError(f"basis has {basis.n} modes, expected {n}")
    if basis.nmax < parity + 2:
        raise GuardError(f"highest_weight_report needs Nmax >= {parity + 2}, got {basis.nmax}")
    report = VerificationReport(suite=f"highest_weight[parity={parity}]")
    report.notes.append(CONVENTION_NOTE)
    cartan = [generator_matrix(basis, h) for h in cartan_generators(n)]
    roots = root_generators(n)
    lowering = {g: generator_matrix(basis, g) for g in roots}
    raising = {g: lowering[g].adjoint() for g in roots}

    # (a_n^dag)^parity |0>, built with ladder matrices
    ad_n = ladder_matrix(basis, n, "create")
    v = basis.vacuum()
    for _ in range(parity):
        v = ad_n.apply(v)

    # (i) annihilated by every raising generator
    for g, op in raising.items():
        report.check_deviation(f"annihilated_by[{g.adjoint()}]", float(np.max(np.abs(op.apply(v)))), tol, parity=parity)

    # (ii) weight
    expected_w = [-0.5] * (n - 1) + [-(0.5 + parity)]
    report.check("hw_weight", expected_w, weight_of(v, basis, cartan), tol, parity=parity)
    report.check_deviation("hw_eigenvector", _eigen_dev(v, expected_w, cartan), tol, parity=parity)

    # (iii) compact highest weight vectors of each level
    compact_raising = [raising[g] for g in roots if g.kind == "diff"]
    for N in range(parity, basis.nmax + 1, 2):
        w = power_state(basis, N)
        dev = max((float(np.max(np.abs(op.apply(w)))) for op in compact_raising), default=0.0)
        report.check_deviation(f"compact_hw[N={N}]", dev, tol, N=N)
        exp_N = [-0.5] * (n - 1) + [-(0.5 + N)]
        report.check(f"compact_weight[N={N}]", exp_N, weight_of(w, basis, cartan), tol, N=N)

    # (iv) parity subspaces are invariant
    odd = (basis.levels % 2).astype(bool)
    for g in all_generators(n):
        op = lowering.get(g) or (raising.get(g.adjoint()) if g.kind != "cartan" else None)
        op = op if op is not None else generator_matrix(basis, g)
        coo = op.matrix.tocoo()
        leak = coo.data[odd[coo.row] != odd[coo.col]]
        report.check_deviation(f"parity_invariant[{g}]", float(np.max(np.abs(leak))) if leak.size else 0.0, tol)

    # (v) E_alpha applied iteratively to v spans the parity subspace up to Nmax-2
    top = basis.nmax - 2
    span_rank, target = cyclic_span_rank(basis, v, [lowering[g] for g in roots], top, parity)
    report.check_equal("cyclic_rank", target, span_rank, parity=parity, top_level=top)
    return report.finish()


def cyclic_span_rank(basis: FockBasis, v, ops, top: int, parity: int, tol: float = 1e-10):
    """Rank of span{words in ``ops`` applied to v} restricted to levels <= top.

    None of ``ops`` lowers the level, so components above ``top`` can be
    discarded without losing vectors that matter.
    """
    cut = basis_count(basis.n, top) if top >= 0 else 0
    target = sum(basis_count(basis.n, N) - (basis_count(basis.n, N - 1) if N else 0) for N in range(parity, top + 1, 2))
    Q = np.zeros((cut, 0))
    frontier = [v[:cut] / np.linalg.norm(v[:cut])] if cut and np.linalg.norm(v[:cut]) > 0 else []
    while frontier:
        new = []
        for w in frontier:
            w = w - Q @ (Q.T @ w)
            w = w - Q @ (Q.T @ w)
            nrm = np.linalg.norm(w)
            if nrm > tol:
                Q = np.column_stack([Q, w / nrm])
                new.append(w / nrm)
        frontier = []
        for w in new:
            full = np.zeros(basis.count)
            full[:cut] = w
            for op in ops:
                frontier.append(op.apply(full)[:cut])
    return Q.shape[1], target


def level_dimension(basis: FockBasis, N: int) -> int:
    sl = basis.level_slice(N)
    return sl.stop - sl.start


def hamiltonian_spectrum_dev(basis: FockBasis) -> float:
    """max |H - diag(N + n/2)| over the truncated space."""
    H = generator_matrix(basis, Generator("hamiltonian")).matrix
    expected = sp.diags(basis.levels + basis.n / 2)
    return float(np.max(np.abs((H - expected).toarray()))) if basis.count else 0.0


def so_highest_weight_count(basis: FockBasis, N: int, tol: float = 1e-9) -> int:
    """Number of so(n) highest-weight vectors in oscillator level N (n >= 3).

    The so(n) root vectors are found numerically: complexified antisymmetric
    one-particle matrices are diagonalized under ad(h) for a regular Cartan
    element h, the positive-eigenvalue ones are lifted to Fock space as
    sum_ab X_ab a_a^dag a_b, and the joint kernel on level N is counted.
    """
    n = basis.n
    if n < 3:
        raise ParameterError("so(n) has no roots for n < 3")
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    so_basis = []
    for a, b in pairs:
        X = np.zeros((n, n), dtype=complex)
        X[a, b], X[b, a] = 1.0, -1.0
        so_basis.append(X)
    h = np.zeros((n, n), dtype=complex)
    for j in range(n // 2):
        h[2 * j, 2 * j + 1], h[2 * j + 1, 2 * j] = -1j, 1j
        h[2 * j, 2 * j + 1] *= (n - j)
        h[2 * j + 1, 2 * j] *= (n - j)
    flat = np.array([X.ravel() for X in so_basis]).T  # n^2 x dim
    ad = np.array([np.linalg.lstsq(flat, (h @ X - X @ h).ravel(), rcond=None)[0] for X in so_basis]).T
    evals, evecs = np.linalg.eig(ad)
    positive = [evecs[:, i] for i in range(len(evals)) if evals[i].real > 1e-8]
    sl = basis.level_slice(N)
    a_ops = [ladder_matrix(basis, i + 1, "annihilate").matrix for i in range(n)]
    ad_ops = [A.T.tocsr() for A in a_ops]
    blocks = []
    for coeffs in positive:
        X = (flat @ coeffs).reshape(n, n)
        op = sp.csr_matrix((basis.count, basis.count), dtype=complex)
        for p in range(n):
            for q in range(n):
                if abs(X[p, q]) > 1e-14:
                    op = op + X[p, q] * (ad_ops[p] @ a_ops[q])
        blocks.append(op[:, sl].toarray())
    dim = sl.stop - sl.start
    if not blocks:
        return dim
    stacked = np.vstack(blocks)
    sv = np.linalg.svd(stacked, compute_uv=False)
    rank = int(np.sum(sv > tol * max(1.0, sv[0])))
    return dim - rank


def factorial_norm(N: int) -> float:
    return sqrt(factorial(N))
