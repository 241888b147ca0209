"""Command-line interface: spectra, K-type tables, samples, eigensolves and verification.

Exit codes: 0 success / all checks pass, 1 verification failure, 2 usage
error, 3 resource or accuracy error.
"""
from __future__ import annotations

import os

# single-threaded BLAS keeps reports byte-identical between runs
for _var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

import argparse  # noqa: E402
import csv  # noqa: E402
import io  # noqa: E402
import json  # noqa: E402
import sys  # noqa: E402
import warnings  # noqa: E402

import numpy as np  # noqa: E402

from . import __version__, eigensolver, fock, radial, reps, spectrum, twist, verify  # noqa: E402
from .errors import (  # noqa: E402
    AccuracyError,
    DomainError,
    GuardError,
    InvariantError,
    NumericalError,
    ParameterError,
    ResourceError,
)
from .report import combine  # noqa: E402

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def fmt(x) -> str:
    """Locale-independent float formatting with 17 significant digits."""
    return format(float(x), ".17g")


def _write(text: str, output: str | None):
    if output in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {output}: {exc.strerror}") from exc


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _spectrum_rows(n, sigma, levels):
    rows = []
    for level in range(levels):
        exact = spectrum.kepler_level_energy_exact(n, sigma, level)
        chans = spectrum.channels_at_level(n, sigma, level)
        rows.append({
            "I": level,
            "energy": float(exact),
            "energy_exact": str(exact),
            "degeneracy": reps.level_degeneracy(n, sigma, level),
            "channels": [{"k": c.k, "l": c.l} for c in chans],
            "un_highest_weight": reps.format_weight(reps.level_weight(n, sigma, level)),
        })
    return rows


def cmd_spectrum(args) -> int:
    rows = _spectrum_rows(args.n, args.sigma, args.levels)
    if args.format == "json":
        doc = {"schema": 1, "n": args.n, "sigma": args.sigma, "levels": rows}
        if args.n == 2:
            doc["notes"] = [reps.N2_CAVEAT]
        _write(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        table = [
            [r["I"], fmt(r["energy"]), r["energy_exact"], r["degeneracy"],
             ";".join(f"{c['k']}:{c['l']}" for c in r["channels"]), r["un_highest_weight"]]
            for r in rows
        ]
        _write(_csv(["I", "energy", "energy_exact", "degeneracy", "channels_k:l", "un_highest_weight"], table), args.output)
    return EXIT_OK


def cmd_ktypes(args) -> int:
    rows = []
    for level in range(args.levels):
        for e in reps.ktype_decomposition(args.n, args.sigma, level):
            rows.append({"I": level, "l": e.l, "dim": e.dim,
                         "so_weight": reps.format_weight(e.so_weight),
                         "un_weight": reps.format_weight(e.un_weight)})
    if args.format == "json":
        doc = {"schema": 1, "n": args.n, "sigma": args.sigma, "ktypes": rows}
        if args.n == 2:
            doc["notes"] = [reps.N2_CAVEAT]
        _write(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        _write(_csv(["I", "l", "dim", "so_weight", "un_weight"], [list(r.values()) for r in rows]), args.output)
    return EXIT_OK


def _preflight(names, args):
    """Refuse oversized Fock bases before any suite starts."""
    budget = fock.max_basis_size()
    needs = {"algebra": args.nmax, "degeneracy": 9}
    for name in names:
        if name in needs:
            count = fock.basis_count(args.n, needs[name])
            if count > budget:
                raise ResourceError(
                    f"suite {name!r} needs a Fock basis of {count} states (n={args.n}, "
                    f"Nmax={needs[name]}), above KEPLER_MAX_BASIS={budget}"
                )


def cmd_verify(args) -> int:
    names = verify.SUITES if args.suite == "all" else (args.suite,)
    _preflight(names, args)
    reports = []
    for name in names:
        report = verify.run_suite(name, n=args.n, nmax=args.nmax, tol=args.tol)
        print(report, file=sys.stderr)
        reports.append(report)
    if args.suite == "all":
        doc = combine("all", reports)
        if args.timing:
            doc["summary"]["wall_time_ms"] = round(sum(r.wall_time_ms for r in reports), 3)
            for sub, r in zip(doc["suites"], reports):
                sub["summary"]["wall_time_ms"] = round(r.wall_time_ms, 3)
    else:
        doc = reports[0].to_dict(timing=args.timing)
    _write(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK if doc["summary"]["failed"] == 0 else EXIT_FAIL


def cmd_sample(args) -> int:
    ch = spectrum.QuantumChannel(args.n, args.sigma, args.k, args.l)
    state = radial.radial_normalize(ch)
    if args.twisted:
        t = twist.twist(state)
        rmax = args.rmax or 8.0 * np.sqrt(2.0)
        r = np.linspace(rmax / args.points, rmax, args.points)
        values = twist.twisted_eval(t, r)
    else:
        rmax = args.rmax or 8.0 * np.sqrt(state.nI)
        r = np.linspace(rmax / args.points, rmax, args.points)
        values = radial.radial_eval(state, r)
    _write(_csv(["r", "value"], [[fmt(a), fmt(b)] for a, b in zip(r, values)]), args.output)
    return EXIT_OK


def cmd_eigensolve(args) -> int:
    ch = spectrum.QuantumChannel(args.n, args.sigma, 1, args.l)
    cfg = eigensolver.SolverConfig(
        num_levels=args.levels, npoints=args.npoints, refinement_levels=args.refinements,
        rmax=args.rmax, scheme=args.scheme,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = eigensolver.solve_kepler_channel(ch, cfg)
    if result.warning:
        print(f"warning: {result.warning}", file=sys.stderr)
    rows = []
    for k, value in enumerate(result, start=1):
        closed = spectrum.channel_energy(spectrum.QuantumChannel(args.n, args.sigma, k, args.l))
        rows.append([k, fmt(value), fmt(closed), fmt(abs(value / closed - 1))])
    _write(_csv(["k", "E_numeric", "E_closed_form", "rel_err"], rows), args.output)
    return EXIT_OK


def _sigma(text):
    value = int(text)
    if value not in (0, 1):
        raise argparse.ArgumentTypeError("sigma must be 0 or 1")
    return value


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="o1kepler", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, levels=True):
        p.add_argument("--n", type=int, default=2, help="spatial dimension (>= 2)")
        p.add_argument("--sigma", type=_sigma, default=0, help="parity charge |sigma| (0 or 1)")
        if levels:
            p.add_argument("--levels", type=_positive, default=3, help="number of levels I = 0..levels-1")
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")

    p = sub.add_parser("spectrum", help="energy levels, degeneracies, channels and U(n) weights")
    common(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("ktypes", help="per-level K-type decomposition")
    common(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_ktypes)

    tol_help = ", ".join(f"{k}={v:g}" for k, v in verify.DEFAULT_TOL.items())
    p = sub.add_parser("verify", help="run a verification suite and emit a JSON report")
    p.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    p.add_argument("--n", type=int, default=2, help="dimension (modes for the algebra suite)")
    p.add_argument("--nmax", type=int, default=6, help="Fock truncation level for the algebra suite")
    p.add_argument("--tol", type=float, default=None, help=f"override the default tolerance ({tol_help})")
    p.add_argument("--timing", action="store_true", help="include wall times (breaks byte-identical output)")
    p.add_argument("--output", "-o", default=None, help="report path (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="sample a radial eigenfunction (or its twist) as CSV")
    common(p, levels=False)
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--twisted", action="store_true", help="sample the twisted oscillator function")
    p.add_argument("--rmax", type=float, default=None)
    p.add_argument("--points", type=_positive, default=100)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("eigensolve", help="finite-difference energies of one channel vs the closed form")
    common(p)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--npoints", type=int, default=4000)
    p.add_argument("--refinements", type=int, default=3)
    p.add_argument("--rmax", type=float, default=None)
    p.add_argument("--scheme", choices=eigensolver.SCHEMES, default="levi-civita")
    p.set_defaults(func=cmd_eigensolve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, InvariantError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceError, GuardError, AccuracyError, NumericalError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    raise SystemExit(main())
