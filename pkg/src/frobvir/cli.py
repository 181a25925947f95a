"""Command-line front end.

    frobvir algebra-info --config run.ini [--json]
    frobvir verify       --config run.ini [--json] [--out report.json] [--inject-error] [--printed-fixtures]
    frobvir expand       --config run.ini [--out system.txt]
    frobvir simulate     --config run.ini [--out series.csv]

Exit codes: 0 success, 1 verification or precondition failure,
2 configuration error, 3 numerical blow-up.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import AlgebraError, FrobeniusAlgebra
from .config import ConfigError, RunSettings, load_config
from .diffpoly import verify_bihamiltonian, verify_cocycle, verify_example_pairs
from .euler import (
    EulerEquation,
    Unsupported,
    ZeroInertia,
    conserved_functionals,
    format_componentwise,
    rhs_is_hamiltonian_J2,
    u_names,
)
from .report import VerificationReport
from .solver import (
    CFLViolation,
    NonzeroMeanHS,
    NumericalBlowup,
    RunConfig,
    SingularSymbol,
    TimeSeries,
    run,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_BLOWUP = 0, 1, 2, 3

log = logging.getLogger("frobvir")


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_or_print(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


# -- algebra-info --------------------------------------------------------------


def cmd_algebra_info(settings: RunSettings, args) -> int:
    info = {"version": __version__, "traces": [alg.describe() for alg in settings.traces]}
    if args.json:
        text = json.dumps(info, indent=2) + "\n"
    else:
        lines = []
        for d in info["traces"]:
            lines.append(f"{d['name']} with trace {d['trace_name']} (dim {d['dim']})")
            lines.append(f"  unit  = [{', '.join(d['unit'])}]")
            lines.append(f"  trace = [{', '.join(d['trace'])}]")
            for key, val in d["products"].items():
                lines.append(f"  {key} = [{', '.join(val)}]")
            lines.append("  gram  = " + "; ".join("[" + ", ".join(r) + "]" for r in d["gram"]))
        text = "\n".join(lines) + "\n"
    _write_or_print(text, args.out)
    return EXIT_OK


# -- verify --------------------------------------------------------------------


def _axioms(alg: FrobeniusAlgebra) -> VerificationReport:
    """Frobenius identity tr((a b) c) = tr(a (b c)) and unit law on basis triples."""
    report = VerificationReport(f"axioms {alg.name} {alg.trace_name}")
    basis = [alg.basis(i) for i in range(alg.dim)]
    bad = [
        (i, j, k)
        for i, a in enumerate(basis)
        for j, b in enumerate(basis)
        for k, c in enumerate(basis)
        if alg.trace(alg.multiply(alg.multiply(a, b), c)) != alg.trace(alg.multiply(a, alg.multiply(b, c)))
    ]
    report.record("frobenius identity", not bad, str(bad))
    units = [i for i, a in enumerate(basis) if alg.multiply(alg.unit, a) != a]
    report.record("unit law", not units, str(units))
    return report


def _z2_eps(alg: FrobeniusAlgebra):
    if alg.name.startswith("Z2("):
        return Fraction(alg.name[3:-1])
    return None


def verification_reports(settings: RunSettings, inject_error: bool = False, printed: bool = False):
    eq = settings.equation()
    reports = []
    for alg in settings.traces:
        reports.append(_axioms(alg))
        reports.append(verify_cocycle(alg))
    if eq.inertia.n <= 1:
        for alg in settings.traces:
            view = eq.with_trace(alg)
            reports.append(
                verify_bihamiltonian(alg, view.inertia.alpha, view.inertia.beta, view.zeta, inject_error=inject_error)
            )
    eps = _z2_eps(settings.algebra)
    if eps is not None:
        group = "eps=0" if eps == 0 else "eps!=0"
        for kind in ("KdV", "CH", "HS"):
            reports.append(
                verify_example_pairs(
                    f"{group}-{kind}", eps if eps != 0 else None, perturb=inject_error, corrected=not printed
                )
            )
    checked = replace(eq, rhs=eq.rhs + eq.u * eq.u.D()) if inject_error else eq
    reports.append(rhs_is_hamiltonian_J2(checked))
    return reports


def cmd_verify(settings: RunSettings, args) -> int:
    reports = verification_reports(settings, args.inject_error, args.printed_fixtures)
    ok = all(r.passed for r in reports)
    doc = {
        "version": __version__,
        "status": "pass" if ok else "fail",
        "reports": [r.to_dict() for r in reports],
    }
    text = json.dumps(doc, indent=2) + "\n"
    if args.out is not None:
        _write_or_print(text, args.out)
    if args.json:
        sys.stdout.write(text)
    else:
        for r in reports:
            print(r.summary())
            for f in r.failures:
                print(f"  FAIL {f.name}: {f.residual}")
        print("all identities pass" if ok else f"{sum(len(r.failures) for r in reports)} identities fail")
    return EXIT_OK if ok else EXIT_FAIL


# -- expand --------------------------------------------------------------------


def cmd_expand(settings: RunSettings, args) -> int:
    eq = settings.equation()
    text = format_componentwise(eq)
    if args.json:
        doc = {"kind": eq.kind.value, "lines": text.splitlines(), "conserved": []}
        try:
            for entry in conserved_functionals(eq, settings.traces):
                doc["conserved"].append({k: str(v) for k, v in entry.items()})
        except Unsupported:
            pass
        text = json.dumps(doc, indent=2) + "\n"
    _write_or_print(text, args.out)
    return EXIT_OK


# -- simulate ------------------------------------------------------------------


def series_csv(series: TimeSeries) -> str:
    names = [n for n in series.names if n != "t"]
    h1 = [n for n in names if n.startswith("H1[")]
    h2 = [n for n in names if n.startswith("H2[")]
    drift = [n for n in names if n.startswith("drift ")]
    cols = ["t"] + h1 + h2 + drift
    lines = [f"# frobvir {__version__}", ",".join(cols)]
    for rec in series.records:
        lines.append(",".join(_fmt(rec[c]) for c in cols))
    return "\n".join(lines) + "\n"


def field_csv(t: float, x: np.ndarray, values: np.ndarray, names) -> str:
    lines = [f"# frobvir {__version__} t={_fmt(t)}", ",".join(["x"] + list(names))]
    for xi, row in zip(x, values):
        lines.append(",".join([_fmt(xi)] + [_fmt(v) for v in row]))
    return "\n".join(lines) + "\n"


def simulation_config(settings: RunSettings, eq: EulerEquation) -> RunConfig:
    settings.require_simulation()
    init = settings.initial.values(settings.N, settings.L, eq.algebra.dim)
    kwargs = {"u0": init} if settings.initial.variable == "u" else {"m0": init}
    return RunConfig(
        eq,
        [alg.to_float() for alg in settings.traces],
        settings.N,
        settings.L,
        settings.dt,
        settings.t_end,
        scheme=settings.scheme,
        every=settings.every,
        keep_fields=settings.fields,
        **kwargs,
    )


def cmd_simulate(settings: RunSettings, args) -> int:
    eq = settings.equation()
    config = simulation_config(settings, eq)
    out = args.out or settings.output_path
    try:
        series = run(config)
    except (NonzeroMeanHS, SingularSymbol) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except NumericalBlowup as exc:
        print(f"error: NumericalBlowup: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    _write_or_print(series_csv(series), out)
    if settings.fields and out is not None:
        names = u_names(eq.algebra.dim)
        for i, (t, u) in enumerate(series.snapshots):
            path = out.with_name(f"{out.stem}.fields.{i:05d}.csv")
            path.write_text(field_csv(t, u.x, u.values, names))
    if out is not None:
        final = series.records[-1]
        drifts = ", ".join(f"{k}={final[k]:.3e}" for k in final if k.startswith("drift "))
        print(f"t={final['t']:.6g} steps={len(series.records)} {drifts}")
    return EXIT_OK


# -- entry point ---------------------------------------------------------------

COMMANDS = {
    "algebra-info": cmd_algebra_info,
    "verify": cmd_verify,
    "expand": cmd_expand,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frobvir", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"frobvir {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, type=Path, help="run configuration file")
        p.add_argument("--out", type=Path, default=None, help="output path (default: stdout or [output] path)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "verify":
            p.add_argument("--inject-error", action="store_true", help="perturb fixtures (negative control)")
            p.add_argument(
                "--printed-fixtures",
                action="store_true",
                help="check the published two-component pair data verbatim instead of the corrected set",
            )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        settings = load_config(args.config)
        return COMMANDS[args.command](settings, args)
    except (ConfigError, AlgebraError, ZeroInertia, CFLViolation) as exc:
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
