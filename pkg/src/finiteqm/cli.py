"""Command-line front end: ``finiteqm {spectrum,wavefunction,verify,converge}``.

Exit codes: 0 success, 1 verification or match failure (including eigensolver
failure), 2 usage error.
"""

import argparse
import sys

from . import __version__
from .algebra import run_suite
from .continuum import convergence_study, deformed_momentum_expansion_check
from .errors import ConfigError, EigensolverError, SpectrumMismatchError
from .lattice import Boundary, LatticeConfig
from .serialize import (
    convergence_csv,
    dumps_json,
    expansion_csv,
    fmt,
    spectrum_csv,
    verification_csv,
    wavefunction_csv,
)
from .spectra import analytic_spectrum, match_spectra, numeric_spectrum, wavefunction

DEFAULT_SWEEP = "64,128,256,512,1024,2048,4096"


class UsageError(Exception):
    pass


def _dsweep(text):
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--dsweep expects comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("--dsweep is empty")
    return values


def _common(parser, lattice=True):
    parser.add_argument("--boundary", choices=[b.value for b in Boundary], default="nonperiodic")
    if lattice:
        parser.add_argument("--d", type=int, required=True, help="number of lattice points")
    length = parser.add_mutually_exclusive_group()
    length.add_argument("--a", type=float, help="lattice spacing (derives L)")
    length.add_argument("--L", type=float, help="box length (derives a); default 1")
    parser.add_argument("--M", type=float, default=1.0, help="particle mass (default 1)")
    parser.add_argument("--hbar", type=float, default=1.0, help="action unit (default 1)")
    parser.add_argument("--format", choices=["table", "json", "csv"], default="table")
    parser.add_argument("--output", "-o", help="write to this path instead of stdout")
    parser.add_argument("--no-header", action="store_true", help="omit the metadata header")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="finiteqm",
        description="Quantum mechanics on a lattice of d points (end-pointed or periodic).",
    )
    parser.add_argument("--version", action="version", version=f"finiteqm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="energy levels (closed form, optionally checked numerically)")
    _common(p)
    p.add_argument("--check", action="store_true", help="diagonalize numerically and compare")
    p.add_argument("--vectors", action="store_true", help="include eigenvectors")
    p.add_argument("--method", choices=["structured", "jacobi"], default="structured")
    p.add_argument("--source", choices=["analytic", "numeric"], default="analytic",
                   help="which spectrum the CSV rows carry")

    p = sub.add_parser("wavefunction", help="sampled eigenfunction psi(n)")
    _common(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--parity", choices=["even", "odd"], help="ring states only")

    p = sub.add_parser("verify", help="check the operator algebra for one d")
    _common(p)
    p.add_argument("--suite", choices=["algebra", "projections", "weyl", "pauli", "all"],
                   default="all")

    p = sub.add_parser("converge", help="continuum-limit convergence sweep")
    _common(p, lattice=False)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--dsweep", type=_dsweep, default=_dsweep(DEFAULT_SWEEP))
    p.add_argument("--no-fit", action="store_true", help="skip the decay exponent fit")
    p.add_argument("--expansion", action="store_true",
                   help="check the deformed momentum against the box momentum instead")
    p.add_argument("--mode", type=int, default=1, help="signed Fourier mode for --expansion")
    return parser


def _config(args):
    boundary = Boundary(args.boundary)
    if args.a is not None:
        return LatticeConfig(d=args.d, a=args.a, M=args.M, hbar=args.hbar, boundary=boundary)
    L = 1.0 if args.L is None else args.L
    return LatticeConfig.from_length(args.d, L, boundary, M=args.M, hbar=args.hbar)


def _units(config):
    return (f"units: hbar={fmt(config.hbar)} M={fmt(config.M)} a={fmt(config.a)} "
            f"L={fmt(config.length)} boundary={config.boundary.value}")


def _header(args, extra):
    if args.no_header:
        return []
    return [f"finiteqm {__version__} {args.command}"] + list(extra)


def _emit(args, text):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(args, payload, units):
    if not args.no_header:
        payload = {"meta": {"program": "finiteqm", "version": __version__, "units": units},
                   **payload}
    return dumps_json(payload)


def _table(rows, columns):
    cells = [[str(c) for c in columns]] + [
        [format(v, ".10g") if isinstance(v, float) else str(v) for v in row] for row in rows
    ]
    widths = [max(len(r[i]) for r in cells) for i in range(len(columns))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells)


def cmd_spectrum(args):
    config = _config(args)
    analytic = analytic_spectrum(config)
    numeric = match = None
    status = 0
    if args.check or args.source == "numeric":
        try:
            numeric = numeric_spectrum(config, args.method)
        except EigensolverError as exc:
            sys.stderr.write(f"finiteqm: eigensolver failure: {exc}\n")
            return 1
    if args.check:
        try:
            match = match_spectra(analytic, numeric)
            status = 0 if match.passed else 1
        except SpectrumMismatchError as exc:
            sys.stderr.write(f"finiteqm: {exc}\n")
            status = 1
    units = _units(config)
    if args.format == "json":
        payload = {"analytic": analytic.to_dict(vectors=args.vectors)}
        if numeric is not None:
            payload["numeric"] = numeric.to_dict(vectors=args.vectors)
        if args.check:
            payload["match"] = match.to_dict() if match else {"pass": False}
        _emit(args, _json(args, payload, units))
    elif args.format == "csv":
        chosen = numeric if args.source == "numeric" else analytic
        extra = [units, f"source: {chosen.source}"]
        if args.check:
            extra.append(f"match: {'pass' if status == 0 else 'fail'}")
        _emit(args, spectrum_csv(chosen, vectors=args.vectors, header=_header(args, extra)))
    else:
        out = [units + "\n"]
        for system in filter(None, (analytic, numeric)):
            out.append(f"{system.source} spectrum\n")
            rows = [[e.m, e.parity.value, float(e.energy), g]
                    for e, g in zip(system.entries, system.degeneracies())]
            out.append(_table(rows, ["m", "parity", "energy", "degeneracy"]))
        if args.check:
            if match is None:
                out.append("match: FAIL (degeneracy pattern differs)\n")
            else:
                out.append(
                    f"match: {'PASS' if match.passed else 'FAIL'}  "
                    f"max_rel_dev={match.max_relative_deviation:.3e}  "
                    f"max_subspace_sin={match.max_subspace_sin:.3e}  "
                    f"multiplicities={list(match.multiplicities)}\n"
                )
        _emit(args, "".join(out))
    return status


def cmd_wavefunction(args):
    config = _config(args)
    wf = wavefunction(config, args.m, args.parity)
    units = _units(config)
    if args.format == "json":
        _emit(args, _json(args, wf.to_dict(), units))
    elif args.format == "csv":
        extra = [units, f"m={wf.m} parity={wf.parity.value}"]
        extra += [f"note: {v}" for k, v in wf.notes.items() if k != "scale"]
        _emit(args, wavefunction_csv(wf, header=_header(args, extra)))
    else:
        rows = [[int(n), float(x), float(p)] for n, x, p in zip(wf.sites, wf.x, wf.psi)]
        _emit(args, f"{units}\nm={wf.m} parity={wf.parity.value}\n" + _table(rows, ["n", "x", "psi"]))
    return 0


_SUITE_BOUNDARY = {"algebra": Boundary.NONPERIODIC, "projections": Boundary.NONPERIODIC,
                   "pauli": Boundary.NONPERIODIC, "weyl": Boundary.PERIODIC}


def cmd_verify(args):
    config = _config(args)
    if args.suite != "all":
        needed = _SUITE_BOUNDARY[args.suite]
        if config.boundary is not needed:
            raise UsageError(f"suite {args.suite!r} needs --boundary {needed.value}")
    if args.suite == "pauli" and config.d != 2:
        raise UsageError(f"suite 'pauli' needs --d 2, got {config.d}")
    report = run_suite(config, args.suite)
    units = _units(config)
    if args.format == "json":
        _emit(args, _json(args, report.to_dict(), units))
    elif args.format == "csv":
        _emit(args, verification_csv(report, header=_header(args, [units, f"tol={fmt(report.tol)}"])))
    else:
        rows = [[c.name, c.relation, c.max_dev, "pass" if c.passed else "FAIL"] for c in report.checks]
        _emit(args, f"{units}  tol={report.tol:g}\n"
              + _table(rows, ["check", "relation", "max_dev", "result"])
              + f"overall: {'PASS' if report.passed else 'FAIL'}\n")
    return 0 if report.passed else 1


def cmd_converge(args):
    if args.a is not None:
        raise UsageError("converge derives a from L; pass --L instead of --a")
    L = 1.0 if args.L is None else args.L
    fit = not args.no_fit
    if args.expansion:
        report = deformed_momentum_expansion_check(L=L, mode=args.mode, d_values=args.dsweep,
                                                   hbar=args.hbar)
        units = f"units: hbar={fmt(args.hbar)} L={fmt(L)} boundary=periodic a=L/d"
        if args.format == "json":
            _emit(args, _json(args, report.to_dict(), units))
        elif args.format == "csv":
            _emit(args, expansion_csv(report, header=_header(args, [units, f"mode={args.mode}"])))
        else:
            rows = [[r["d"], r["a"], r["P_lattice"], r["p"], r["deviation"], r["scaled_remainder"]]
                    for r in report.rows]
            ratios = ", ".join(f"{x:.6g}" for x in report.ratios)
            _emit(args, f"{units}\nmode={args.mode}\n"
                  + _table(rows, ["d", "a", "P_lattice", "p", "deviation", "scaled_remainder"])
                  + f"deviation ratios (d_i / d_i+1): {ratios}\n")
        return 0
    if fit and len(args.dsweep) < 4:
        raise UsageError("exponent fitting needs at least 4 --dsweep values (or pass --no-fit)")
    boundary = Boundary(args.boundary)
    report = convergence_study(args.m, boundary, L=L, d_values=args.dsweep, M=args.M,
                               hbar=args.hbar, fit=fit)
    rule = "a=L/d" if boundary is Boundary.PERIODIC else "a=L/(d-1)"
    units = f"units: hbar={fmt(args.hbar)} M={fmt(args.M)} L={fmt(L)} boundary={boundary.value} {rule}"
    if args.format == "json":
        _emit(args, _json(args, report.to_dict(), units))
    elif args.format == "csv":
        _emit(args, convergence_csv(report, header=_header(args, [units, f"m={args.m}"])))
    else:
        rows = [[r["d"], r["a"], r["E_discrete"], r["E_limit"], r["rel_error"]] for r in report.rows]
        exponent = "n/a (errors vanish)" if report.exponent is None else f"{report.exponent:.6g}"
        if not fit:
            exponent = "not fitted"
        _emit(args, f"{units}\nm={args.m}\n"
              + _table(rows, ["d", "a", "E_discrete", "E_limit", "rel_error"])
              + f"fitted decay exponent: {exponent}\n")
    return 0


COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
    "converge": cmd_converge,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ConfigError) as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"finiteqm {args.command}: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
