#!/usr/bin/env python3
"""Command-line front end.

Subcommands::

    kernel     evaluate K(p, q) by closed form, series and transformation law
    project    project conj(z)^m onto the Bergman space
    threshold  print the exact L^p boundedness interval for (n, k)
    lpnorm     Monte Carlo L^p norms of P(conj(z)^{kn}) against the closed form
    schur      empirical Schur-test ratios over a query grid
    verify     run the invariant suites

Exit codes: 0 success, 2 contract violation (bad flags, exterior points),
3 numerical failure. Errors are reported as one ``error: <Type>: <reason>``
line on stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import _backend
from .domains import DomainSpec, point_to_json
from .errors import ContractViolation, NumericalError
from .integrate import QuadratureRule
from .kernels import kernel_closed, kernel_series, kernel_via_transform
from .lp_analysis import (
    DIVERGENT, critical_interval, divergence_check, epsilon_range, is_bounded,
    lp_norm_closed, mc_lp_norm, query_grid, schur_ratio, to_rational,
)
from .projection import conj_base_power, project_conj_monomial, project_kernel, project_series

DEFAULT_SEED = 0

CSV_COLUMNS = {
    "kernel": "method,value_re,value_im",
    "project": "alpha,beta,coeff_re,coeff_im",
    "threshold": "n,k,p_low,p_high,p_low_decimal,p_high_decimal[,p,bounded]",
    "lpnorm": "p,estimate,std_error,closed_form,verdict,diverging",
    "schur": "eps,query,estimate,std_error,in_range",
    "verify": "suite,check,passed,detail",
}


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (``j`` also accepted)."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ContractViolation("empty coordinate")
    try:
        return complex(t.replace("i", "j"))
    except ValueError:
        raise ContractViolation(f"cannot parse complex literal {text!r}") from None


def parse_point(text: str) -> np.ndarray:
    """Parse ``"(a+bi, c, ...)"`` into a complex array."""
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    parts = [s for s in t.split(",")]
    if not parts or any(not s.strip() for s in parts):
        raise ContractViolation(f"cannot parse point {text!r}")
    return np.array([parse_complex(s) for s in parts], dtype=complex)


# -- output ----------------------------------------------------------------------

class Output:
    def __init__(self, fmt: str, columns: list[str] | None = None):
        self.fmt = fmt
        self.columns = columns
        self.header: list[str] = []
        self.records: list[dict] = []

    def comment(self, text: str) -> None:
        self.header.append(text)

    def add(self, record: dict) -> None:
        self.records.append(record)

    def render(self) -> str:
        buf = io.StringIO()
        for line in self.header:
            buf.write(f"# {line}\n")
        if self.fmt == "json":
            for rec in self.records:
                buf.write(json.dumps(rec, sort_keys=True) + "\n")
        else:
            cols = self.columns or (list(self.records[0]) if self.records else [])
            writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n",
                                    extrasaction="ignore")
            writer.writeheader()
            for rec in self.records:
                writer.writerow({c: _csv_cell(rec.get(c, "")) for c in cols})
        return buf.getvalue()


def _csv_cell(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value)
    return value


def _csv_value(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if text in ("True", "False"):
        return text == "True"
    if text[:1] in "[{":
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            pass
    return text


# exact rationals and labels stay strings even when they look numeric
STRING_COLUMNS = frozenset({"p", "p_low", "p_high", "suite", "check", "detail", "method",
                            "verdict"})


def read_csv_records(text: str) -> list[dict]:
    """Parse CSV written by this tool back into records (comment lines skipped)."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return [{k: v if k in STRING_COLUMNS else _csv_value(v) for k, v in row.items()}
            for row in csv.DictReader(lines)]


# -- commands ------------------------------------------------------------------------

def _spec(args) -> DomainSpec:
    if args.spec is not None:
        return DomainSpec.from_json(args.spec)
    if args.kind is not None:
        return DomainSpec(args.kind, args.n or 1, args.k or 1)
    raise ContractViolation("--spec is required")


def _rule(args) -> QuadratureRule:
    return QuadratureRule(args.radial_order, args.angular_order)


def cmd_kernel(args, out: Output) -> None:
    spec = _spec(args)
    if args.p is None or args.q is None:
        raise ContractViolation("kernel needs --p and --q")
    p, q = parse_point(args.p), parse_point(args.q)
    methods = ["closed"]
    if spec.is_hartogs and args.method in ("all", "series", "transform"):
        methods = ["closed", "series", "transform"] if args.method == "all" else [args.method]
    for method in methods:
        if method == "closed":
            value = kernel_closed(spec, p, q)
        elif method == "series":
            value = kernel_series(spec, p, q, tol=args.tol)
        else:
            value = kernel_via_transform(spec, p, q)
        out.add({"spec": spec.to_dict(), "p": point_to_json(p), "q": point_to_json(q),
                 "method": method, "value": [value.real, value.imag],
                 "value_re": value.real, "value_im": value.imag})


def cmd_project(args, out: Output) -> None:
    spec = _spec(args)
    power = spec.kn if args.power is None else args.power
    if args.exact:
        if power != spec.kn:
            raise ContractViolation("--exact is only available for the power kn")
        series = project_conj_monomial(spec)
    else:
        cap = 3 * spec.kn if args.cap is None else args.cap
        series = project_series(spec, conj_base_power(spec, power), cap, _rule(args))
        series = type(series)(spec, series.significant(args.threshold))
    for rec in series.to_records():
        rec["coeff_re"], rec["coeff_im"] = rec["coeff"]
        out.add(rec)
    if args.at is not None:
        out.comment(f"seed={args.seed}")
        point = parse_point(args.at)
        est = project_kernel(spec, conj_base_power(spec, power), point, args.seed, args.count)
        exact = series(point)
        out.comment(f"kernel MC at {args.at}: {est.value.real!r} +/- {est.std_error!r} "
                    f"(series value {complex(exact).real!r})")


def cmd_threshold(args, out: Output) -> None:
    if args.n is None or args.k is None:
        raise ContractViolation("threshold needs --n and --k")
    iv = critical_interval(args.n, args.k)
    rec = {"n": args.n, "k": args.k, **iv.as_dict()}
    if args.pexp:
        for p in args.pexp:
            out.add({**rec, "p": str(to_rational(p)), "bounded": is_bounded(p, args.n, args.k)})
    else:
        out.add(rec)


def cmd_lpnorm(args, out: Output) -> None:
    spec = _spec(args)
    out.comment(f"seed={args.seed}")
    if not args.pexp:
        raise ContractViolation("lpnorm needs at least one --pexp")
    for i, p in enumerate(args.pexp):
        est = mc_lp_norm(spec, p, args.seed, args.count, stream=(0, i))
        closed = lp_norm_closed(spec, p)
        q = to_rational(p)
        verdict = "bounded" if q > 1 and is_bounded(q, spec.n, spec.k) else "unbounded"
        diverging = divergence_check(spec, p, args.seed, args.count).triggered
        out.add({"p": str(q), "estimate": est.value.real, "std_error": est.std_error,
                 "closed_form": "divergent" if closed == DIVERGENT else closed,
                 "verdict": verdict, "diverging": diverging})


def cmd_schur(args, out: Output) -> None:
    spec = _spec(args)
    out.comment(f"seed={args.seed}")
    eps_list = args.eps or [0.5]
    radii = np.linspace(args.rmin, args.rmax, args.grid)
    fracs = np.linspace(0.0, args.fmax, args.grid)
    queries = query_grid(spec, radii, fracs)
    lo, hi = epsilon_range(spec)
    for eps in eps_list:
        in_range = lo <= to_rational(eps) < hi
        ests = schur_ratio(spec, float(eps), queries, args.seed, args.count,
                           pairing=args.pairing, strict=False)
        for q, est in zip(queries, ests):
            out.add({"eps": float(eps), "query": point_to_json(q), "estimate": est.value.real,
                     "std_error": est.std_error, "in_range": bool(in_range)})


def cmd_verify(args, out: Output) -> None:
    from .verify import run_suites

    out.comment(f"seed={args.seed}")
    out.comment(f"backend={_backend.NAME}")
    results = run_suites(args.suite, args.seed)
    for r in results:
        out.add({"suite": r.suite, "check": r.check, "passed": r.passed, "detail": r.detail})
    args._failed = sum(not r.passed for r in results)


COMMANDS = {
    "kernel": cmd_kernel, "project": cmd_project, "threshold": cmd_threshold,
    "lpnorm": cmd_lpnorm, "schur": cmd_schur, "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hartogs", description=__doc__.split("\n\n")[0],
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, randomized=False, quad=False):
        p.add_argument("--spec", help='domain JSON, e.g. \'{"kind":"HartogsBall","n":1,"k":1}\'')
        p.add_argument("--kind", help="domain kind (alternative to --spec)")
        p.add_argument("--n", type=int, help="fiber dimension")
        p.add_argument("--k", type=int, help="power parameter")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write output to PATH instead of stdout")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="RNG seed (default 0)")
        if randomized:
            p.add_argument("--count", type=int, default=100_000, help="Monte Carlo samples")
        if quad:
            p.add_argument("--radial-order", type=int, default=8)
            p.add_argument("--angular-order", type=int, default=16)

    def epilog(name):
        return f"CSV columns: {CSV_COLUMNS[name]}"

    p = sub.add_parser("kernel", help="evaluate the Bergman kernel", epilog=epilog("kernel"))
    common(p)
    p.add_argument("--p", help='first point, e.g. "(0.5,0.1)"')
    p.add_argument("--q", help="second point")
    p.add_argument("--method", choices=("closed", "series", "transform", "all"), default="closed")
    p.add_argument("--tol", type=float, default=1e-8, help="series truncation tolerance")

    p = sub.add_parser("project", help="project conj(z)^m", epilog=epilog("project"))
    common(p, randomized=True, quad=True)
    p.add_argument("--power", type=int, help="exponent m (default kn)")
    p.add_argument("--cap", type=int, help="basis degree cap (default 3kn)")
    p.add_argument("--threshold", type=float, default=1e-8, help="drop smaller coefficients")
    p.add_argument("--exact", action="store_true", help="closed-form projection of conj(z)^kn")
    p.add_argument("--at", help="also estimate the projection at this point by kernel MC")

    p = sub.add_parser("threshold", help="exact L^p interval", epilog=epilog("threshold"))
    common(p)
    p.add_argument("--pexp", action="append", help="exponent to classify, decimal or a/b")

    p = sub.add_parser("lpnorm", help="Monte Carlo L^p norms", epilog=epilog("lpnorm"))
    common(p, randomized=True)
    p.add_argument("--pexp", action="append", help="exponent, decimal or a/b (repeatable)")

    p = sub.add_parser("schur", help="Schur-test ratios", epilog=epilog("schur"))
    common(p, randomized=True)
    p.add_argument("--eps", action="append", type=float, help="weight exponent (repeatable)")
    p.add_argument("--grid", type=int, default=5, help="grid points per axis")
    p.add_argument("--rmin", type=float, default=0.3)
    p.add_argument("--rmax", type=float, default=0.7)
    p.add_argument("--fmax", type=float, default=0.8, help="largest fiber fraction of its bound")
    p.add_argument("--pairing", choices=("natural", "printed"), default="natural")

    p = sub.add_parser("verify", help="run invariant suites", epilog=epilog("verify"))
    common(p)
    p.add_argument("--suite", default="all",
                   choices=("all", "domains", "kernels", "basis", "integrate",
                            "projection", "lp", "schur"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    columns = CSV_COLUMNS[args.command].replace("[", "").replace("]", "").split(",")
    out = Output(args.format, columns if args.format == "csv" else None)
    if args.command == "threshold" and not args.pexp:
        out.columns = columns[:6] if out.columns else None
    try:
        COMMANDS[args.command](args, out)
    except ContractViolation as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    text = out.render()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if getattr(args, "_failed", 0):
        print(f"error: VerificationFailed: {args._failed} check(s) failed", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
