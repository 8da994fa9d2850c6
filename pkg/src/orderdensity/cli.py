"""Command-line front end.

Usage examples::

    orderdensity spectrum q=3 a=T d=2
    orderdensity density closed q=3 a=T d=2
    orderdensity density proportion q=3 a=T d=2 --N 2
    orderdensity density series q=2 a=T d=3 --eps 1e-9
    orderdensity verify q=3 a=T d=2 --Nmax 10 --format csv --output run.csv
    orderdensity probe-d1 q=2 a=T d=3 --steps 3
    orderdensity spectrum "q=2^2,modulus=x^2+x+1" "a=g*T+1" d=3

Exit codes: 0 ok, 2 parse or precondition failure (including the budget),
3 density assumption not verified, 4 counting identity failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction

from . import arith, density, empirical
from .errors import AssumptionNotVerified, OrderDensityError, ParseError
from .ff import FieldSpec, field_from_q, format_element, format_prime_poly, parse_prime_poly
from .poly import RatFunc, default_budget, gauss_count, format_poly, format_ratfunc, parse_ratfunc
from .profile import ArithProfile, SpecialCase, dispatch, e_N
from .render import decimal_text, fraction_text, rational

SCHEMA = 1
EXIT_OK, EXIT_PARSE, EXIT_ASSUMPTION, EXIT_IDENTITY = 0, 2, 3, 4
CSV_COLUMNS = ("N", "I_N", "R", "delta_N_num", "delta_N_den", "cesaro", "normalized_error",
               "delta_N_decimal", "identity_pass")


@dataclass
class RunConfig:
    field: FieldSpec
    a: RatFunc
    d: int
    field_text: str
    a_text: str


def parse_field_spec(text: str) -> FieldSpec:
    """``q=p^k[,modulus=...]`` (the leading ``q=`` is optional)."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ParseError("empty field spec")
    q_text = parts[0].removeprefix("q=").strip()
    try:
        if "^" in q_text:
            p, k = q_text.split("^")
            q = int(p) ** int(k)
        else:
            q = int(q_text)
    except ValueError:
        raise ParseError(f"cannot read q from {text!r}") from None
    if q < 2:
        raise ParseError(f"q must be a prime power >= 2, got {q}")
    modulus = None
    for extra in parts[1:]:
        key, _, value = extra.partition("=")
        if key.strip() != "modulus" or not value:
            raise ParseError(f"unknown field option {extra!r}")
        p = arith.factor(q).primes[0]
        modulus = parse_prime_poly(p, value.strip())
    return field_from_q(q, modulus)


def parse_config(tokens) -> RunConfig:
    """Read ``key=value`` tokens: ``q``, optional ``modulus``, ``a`` and ``d``."""
    values = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {tok!r}")
        key = key.strip()
        if key == "q" and "," in value:
            head, _, rest = value.partition(",")
            values["q"] = head
            for extra in rest.split(","):
                k2, _, v2 = extra.partition("=")
                values[k2.strip()] = v2
            continue
        if key not in ("q", "modulus", "a", "d"):
            raise ParseError(f"unknown parameter {key!r}")
        values[key] = value.strip()
    for key in ("q", "a", "d"):
        if key not in values:
            raise ParseError(f"missing parameter {key}=...")
    field_text = f"q={values['q']}"
    if "modulus" in values:
        field_text += f",modulus={values['modulus']}"
    field = parse_field_spec(field_text)
    try:
        d = int(values["d"])
    except ValueError:
        raise ParseError(f"d must be an integer, got {values['d']!r}") from None
    if d < 1:
        raise ParseError(f"d must be >= 1, got {d}")
    a = parse_ratfunc(field, values["a"])
    return RunConfig(field, a, d, field_text, values["a"])


def parse_rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None
    if value <= 0:
        raise ParseError(f"epsilon must be positive, got {text}")
    return value


# -- documents -----------------------------------------------------------------------

def _field_doc(F: FieldSpec) -> dict:
    return {"q": F.q, "p": F.p, "k": F.k, "modulus": format_prime_poly(F.modulus)}


def _header(cfg: RunConfig, command: str) -> dict:
    return {"schema": SCHEMA, "command": command, "field": _field_doc(cfg.field),
            "a": format_ratfunc(cfg.a), "d": cfg.d}


def _density_doc(dv: density.DensityValue) -> dict:
    doc = rational(dv.value)
    doc.update(kind=dv.kind.value, tail_bound=rational(dv.tail_bound),
               proof_level=dv.proof_level.value if dv.proof_level else None)
    return doc


def _special_doc(sc: SpecialCase) -> dict:
    return {"special_case": sc.kind, "density": rational(sc.density), "unit_order": sc.unit_order}


def cmd_spectrum(cfg: RunConfig, args) -> tuple[dict, int]:
    doc = _header(cfg, "spectrum")
    prof = dispatch(cfg.field, cfg.a, cfg.d)
    if isinstance(prof, SpecialCase):
        doc.update(_special_doc(prof))
        return doc, EXIT_OK
    report = density.assumption_check(prof, args.v_bound)
    doc.update(
        **{"lambda": format_element(prof.field, prof.lam.code)},
        a_monic=format_ratfunc(prof.a_monic),
        factors=[{"P": format_poly(P), "e": e} for P, e in prof.factors],
        h=prof.h, m=prof.m, f=prof.f, f_bar=prof.f_bar, P=prof.p_flag,
        e_f=e_N(prof, prof.f), e_f_bar=e_N(prof, prof.f_bar),
        assumption=report.as_dict(),
    )
    return doc, EXIT_OK


def cmd_density(cfg: RunConfig, args) -> tuple[dict, int]:
    doc = _header(cfg, f"density {args.kind}")
    prof = dispatch(cfg.field, cfg.a, cfg.d)
    if isinstance(prof, SpecialCase):
        doc.update(_special_doc(prof))
        doc["density"] = _density_doc(density.DensityValue(
            prof.density, Fraction(0), density.DensityKind.CLOSED_FORM, density.ProofLevel.THEOREM))
        return doc, EXIT_OK
    if args.kind == "closed":
        report = density.assumption_check(prof, args.v_bound)
        doc["assumption"] = report.as_dict()
        try:
            dv = density.d3_closed(prof, report)
        except AssumptionNotVerified as exc:
            doc["error"] = str(exc)
            return doc, EXIT_ASSUMPTION
    elif args.kind == "series":
        dv = density.d3_series(prof, args.eps)
    else:
        if args.N is None:
            raise ParseError("density proportion needs --N")
        dv = density.proportion_density(prof, args.N)
        doc["N"] = args.N
    doc["density"] = _density_doc(dv)
    return doc, EXIT_OK


def _reference_density(prof: ArithProfile, v_bound: int) -> density.DensityValue:
    report = density.assumption_check(prof, v_bound)
    if report.verified:
        return density.d3_closed(prof, report)
    return density.d3_series(prof)


def _verify_rows(cfg: RunConfig, args):
    opts = dict(engine=args.engine, workers=args.workers, budget=args.budget)
    prof = dispatch(cfg.field, cfg.a, cfg.d)
    rows = []
    running = Fraction(0)
    track_cesaro = args.Nmin == 1
    for N in range(args.Nmin, args.Nmax + 1):
        if isinstance(prof, SpecialCase):
            c = empirical.count_degree(cfg.field, cfg.a, N, **opts)
            R = c.R(cfg.d)
            rec = empirical.CountRecord(N=N, I_N=gauss_count(cfg.field.q, N), R=R,
                                        a_excluded=c.a_excluded, delta_N=prof.density)
            rec.identity_pass = R == prof.count(N, c.a_excluded)
        else:
            rec = empirical.count_record(prof, N, **opts)
        if track_cesaro:
            running += Fraction(rec.R * N, cfg.field.q**N)
            rec.cesaro = running / N
        rows.append(rec)
    return prof, rows


def cmd_verify(cfg: RunConfig, args) -> tuple[dict, int]:
    if args.Nmin < 1 or args.Nmax < args.Nmin:
        raise ParseError(f"need 1 <= Nmin <= Nmax, got {args.Nmin}..{args.Nmax}")
    prof, rows = _verify_rows(cfg, args)
    doc = _header(cfg, "verify")
    errors = [r.normalized_error for r in rows if r.normalized_error is not None]
    summary = {
        "rows": len(rows),
        "all_pass": all(r.identity_pass for r in rows),
        "failures": [r.N for r in rows if not r.identity_pass],
        "max_normalized_error": rational(max(errors)) if errors else None,
    }
    if isinstance(prof, SpecialCase):
        delta = prof.density
    else:
        dv = _reference_density(prof, args.v_bound)
        delta = dv.value
        summary["density"] = _density_doc(dv)
    last = rows[-1]
    if last.cesaro is not None:
        summary["cesaro_gap"] = rational(abs(last.cesaro - delta))
    doc["rows"] = [r.as_dict() for r in rows]
    doc["summary"] = summary
    doc["_records"] = rows
    return doc, EXIT_OK if summary["all_pass"] else EXIT_IDENTITY


def cmd_probe_d1(cfg: RunConfig, args) -> tuple[dict, int]:
    prof = dispatch(cfg.field, cfg.a, cfg.d)
    if isinstance(prof, SpecialCase):
        raise ParseError("probe-d1 needs non-constant a and d >= 2")
    opts = dict(engine=args.engine, workers=args.workers, budget=args.budget)
    probe = empirical.d1_probe(prof, args.steps, **opts)
    doc = _header(cfg, "probe-d1")
    doc.update(probe.as_dict())
    ys = {p.delta for p in probe.y_sequence}
    doc["y_delta_constant"] = rational(ys.pop()) if len(ys) == 1 else None
    return doc, EXIT_OK


# -- output --------------------------------------------------------------------------

def render_json(doc: dict) -> str:
    doc = {k: v for k, v in doc.items() if not k.startswith("_")}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        delta = r.delta_N if r.delta_N is not None else Fraction(0)
        w.writerow([
            r.N, r.I_N, r.R, delta.numerator, delta.denominator,
            fraction_text(r.cesaro) if r.cesaro is not None else "",
            fraction_text(r.normalized_error) if r.normalized_error is not None else "",
            decimal_text(delta), "true" if r.identity_pass else "false",
        ])
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write to a temporary file in the target directory, then rename over ``path``."""
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=os.path.dirname(target))
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- argument parsing ----------------------------------------------------------------

def _common(p, empirical_opts=False):
    p.add_argument("params", nargs="+", help="q=... [modulus=...] a=... d=...")
    p.add_argument("--v-bound", type=int, default=density.DEFAULT_V_BOUND,
                   help="bound on v for the bounded assumption check")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")
    if empirical_opts:
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--budget", type=int, default=None,
                       help="max q^N (default from $ORDERDENSITY_BUDGET or 2^30)")
        p.add_argument("--engine", choices=empirical.ENGINES, default="auto")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orderdensity", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="arithmetic invariants of (q, a, d)")
    _common(p)
    p.set_defaults(run=cmd_spectrum)

    p = sub.add_parser("density", help="theoretical densities")
    p.add_argument("kind", choices=("closed", "series", "proportion"))
    _common(p)
    p.add_argument("--N", type=int, default=None, help="degree for the proportion density")
    p.add_argument("--eps", type=parse_rational, default=density.DEFAULT_EPSILON,
                   help="series truncation tolerance (default 1e-9)")
    p.set_defaults(run=cmd_density)

    p = sub.add_parser("verify", help="brute-force counts against the counting identity")
    _common(p, empirical_opts=True)
    p.add_argument("--Nmax", type=int, required=True)
    p.add_argument("--Nmin", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("probe-d1", help="subsequences showing the natural density fails to exist")
    _common(p, empirical_opts=True)
    p.add_argument("--steps", type=int, default=3)
    p.set_defaults(run=cmd_probe_d1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        if getattr(args, "budget", None) is None and hasattr(args, "budget"):
            args.budget = default_budget()
        cfg = parse_config(args.params)
        doc, code = args.run(cfg, args)
    except (OrderDensityError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return 130
    if getattr(args, "format", "json") == "csv":
        text = render_csv(doc["_records"])
    else:
        text = render_json(doc)
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)
    if code == EXIT_ASSUMPTION:
        print(f"error: AssumptionNotVerified: {doc.get('error')}", file=sys.stderr)
    elif code == EXIT_IDENTITY:
        print(f"error: counting identity failed at N = {doc['summary']['failures']}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
