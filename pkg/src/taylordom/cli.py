"""Command-line front end.

Every subcommand reads one JSON document (a path, or "-" for stdin) and
writes a machine report.  Exit codes: 0 ok, 2 schema error,
3 verification failure, 4 numerically unreliable result.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import serialize as ser
from .abel import fixed_point_count, oracle_agreement, poincare_coefficients
from .bautin import (
    NonLinearError,
    a0_profile,
    coefficient_recurrence_check,
    degree_bounds,
    generate_parametric,
    ideal_witness,
)
from .core.scalar import DEFAULT_PRECISION, EXACT, MODES, format_rational
from .dfinite import (
    analyze_operator,
    direct_moments,
    moment_recurrence,
    stieltjes_certificate,
    stieltjes_radius,
)
from .domination import (
    CertificateError,
    bounded_certificate_for,
    cert_poincare,
    cert_trivial,
    cert_turan,
    verify,
)
from .recurrence import DeclaredBoundError, generate
from .zeros import NearContourZeroError, ZeroCountUnreliable, count_zeros, zero_bound

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_VERIFY = 3
EXIT_UNRELIABLE = 4

METHODS = ("turan", "bounded", "poincare", "poincare-delta", "trivial")


@dataclass
class JobSpec:
    command: str
    document: dict = field(default_factory=dict)
    out: Optional[str] = None
    mode: str = EXACT
    precision: int = DEFAULT_PRECISION
    horizon: int = 100
    seed: int = 0
    method: Optional[str] = None
    only: tuple = ()

    def to_doc(self) -> dict:
        return {"command": self.command, "document": self.document, "out": self.out, "mode": self.mode,
                "precision": self.precision, "horizon": self.horizon, "seed": self.seed,
                "method": self.method, "only": list(self.only)}

    @classmethod
    def from_doc(cls, doc) -> "JobSpec":
        job = cls(
            command=ser._get(doc, "command", str),
            document=ser._get(doc, "document", dict, default={}),
            out=ser._get(doc, "out", default=None),
            mode=ser._get(doc, "mode", str, default=EXACT),
            precision=ser._get(doc, "precision", int, default=DEFAULT_PRECISION),
            horizon=ser._get(doc, "horizon", int, default=100),
            seed=ser._get(doc, "seed", int, default=0),
            method=ser._get(doc, "method", default=None),
            only=tuple(ser._get(doc, "only", list, default=[])),
        )
        if job.mode not in MODES:
            raise ser.SchemaError(f"mode must be one of {MODES}")
        return job

    def dumps(self) -> str:
        return ser.dumps(self.to_doc())

    @classmethod
    def loads(cls, text: str) -> "JobSpec":
        return cls.from_doc(ser.loads(text))


@dataclass
class Outcome:
    report: dict
    status: int = EXIT_OK
    csv: Optional[str] = None


# --------------------------------------------------------------------------
# reports


def _cell(v) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, float):
        return f"{v:.6g}"
    return "" if v is None else str(v)


def emit_report(rows: list) -> tuple:
    """(human table, machine document) from a list of flat result rows.

    The document is built first and the table is rendered from it, so both
    carry the same values.  Rows with ``passed`` false are marked with "!".
    """
    document = {"rows": [ser._plain(row) for row in rows]}
    if not rows:
        return "", document
    cols = []
    for row in document["rows"]:
        cols.extend(c for c in row if c not in cols)
    body = [[_cell(row.get(c)) for c in cols] for row in document["rows"]]
    widths = [max(len(c), *(len(r[i]) for r in body)) for i, c in enumerate(cols)]
    lines = ["  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    for row, cells in zip(document["rows"], body):
        mark = "! " if row.get("passed") is False else "  "
        lines.append(mark + "  ".join(c.ljust(w) for c, w in zip(cells, widths)))
    return "\n".join(lines) + "\n", document


def _verification_row(rep, cert) -> dict:
    return {"N": cert.N, "R": cert.R, "rule": cert.rule.name,
            "horizon": rep.horizon, "worst_k": rep.worst_k, "worst_ratio": rep.worst_ratio,
            "passed": rep.passed}


# --------------------------------------------------------------------------
# subcommands


def _sequence_input(doc, job: JobSpec, mode: str = EXACT):
    """Either an explicit "sequence" or a "spec" with "init"."""
    if "sequence" in doc:
        return ser.sequence_from_doc(doc["sequence"]), None
    spec = ser.spec_from_doc(ser._get(doc, "spec", dict))
    init = ser.rats(ser._get(doc, "init", list))
    try:
        seq = generate(spec, init, job.horizon, mode=mode, prec=job.precision)
    except (DeclaredBoundError, ValueError) as exc:
        raise ser.SchemaError(str(exc)) from exc
    return seq, spec


def run_generate(job: JobSpec) -> Outcome:
    seq, spec = _sequence_input(job.document, job, job.mode)
    values = list(seq)
    return Outcome({"command": "generate", "horizon": len(values) - 1, "mode": job.mode,
                    "values": [ser.fmt(v) for v in values]}, csv=ser.sequence_to_csv(values))


def _certificate(method: str, spec, seq, doc):
    if method == "turan":
        return cert_turan(spec)
    if method == "bounded":
        if spec.declared_bounds is None:
            raise ser.SchemaError("bounded method needs declared_bounds [K, rho] in the recurrence document")
        return bounded_certificate_for(spec, *spec.declared_bounds)
    if method in ("poincare", "poincare-delta"):
        return cert_poincare(spec, use_delta=method == "poincare-delta")
    if method == "trivial":
        return cert_trivial(seq, ser.rat(ser._get(doc, "R")))
    raise ser.SchemaError(f"unknown method '{method}'")


def run_certify(job: JobSpec) -> Outcome:
    method = job.method or job.document.get("method") or "turan"
    seq, spec = _sequence_input(job.document, job)
    if spec is None and method != "trivial":
        raise ser.SchemaError(f"method '{method}' needs a spec")
    try:
        cert = _certificate(method, spec, seq, job.document)
    except CertificateError as exc:
        return Outcome({"command": "certify", "method": method, "error": str(exc)}, EXIT_VERIFY)
    rep = verify(seq, cert, job.horizon)
    row = _verification_row(rep, cert)
    return Outcome({"command": "certify", "method": method, "certificate": ser.certificate_to_doc(cert),
                    "verification": emit_report([row])[1]["rows"][0]},
                   EXIT_OK if rep.passed else EXIT_VERIFY)


def run_verify(job: JobSpec) -> Outcome:
    cert = ser.certificate_from_doc(ser._get(job.document, "certificate", dict))
    seq, _ = _sequence_input(job.document, job)
    rep = verify(seq, cert, job.horizon if "spec" in job.document else None)
    row = _verification_row(rep, cert)
    return Outcome({"command": "verify", "verification": emit_report([row])[1]["rows"][0],
                    "diagnostic": rep.diagnostic}, EXIT_OK if rep.passed else EXIT_VERIFY)


def run_zeros(job: JobSpec) -> Outcome:
    doc = job.document
    seq, spec = _sequence_input(doc, job)
    r = ser.rat(ser._get(doc, "radius"))
    report = {"command": "zeros", "radius": format_rational(r)}
    status = EXIT_OK
    try:
        zc = count_zeros(list(seq), r)
        report["count"] = zc.count
        report["reliable"] = zc.reliable
        report["residual"] = zc.residual
        if not zc.reliable:
            status = EXIT_UNRELIABLE
    except (NearContourZeroError, ZeroCountUnreliable) as exc:
        report["count"] = None
        report["error"] = str(exc)
        status = EXIT_UNRELIABLE
    if "certificate" in doc or spec is not None and spec.is_constant():
        cert = ser.certificate_from_doc(doc["certificate"]) if "certificate" in doc else cert_turan(spec)
        zb = zero_bound(cert, list(seq), r)
        report["bound"] = {"N": zb.N, "certified": zb.certified, "R": format_rational(zb.R),
                           "r_star": zb.r_star, "reason": zb.reason}
    return Outcome(report, status)


def run_dfinite(job: JobSpec) -> Outcome:
    doc = job.document
    op = ser.operator_from_doc(ser._get(doc, "operator", list))
    g = ser.function_from_doc(ser._get(doc, "function", dict))
    if g.a != 0:
        raise ser.SchemaError("the moment convention needs the interval to start at 0")
    data = g.data(op.n)
    rec = moment_recurrence(op)
    moments = direct_moments(g, job.horizon + op.alpha + 2, job.precision)
    residual_ok = all(rec.residual(k, moments, data) == 0 for k in range(job.horizon + 1)
                      if ser.is_exact(moments[k]))
    info = analyze_operator(op, data, job.precision)
    R_star, nominal = stieltjes_radius(info, job.precision)
    report = {
        "command": "dfinite",
        "recurrence": {str(l): ser.unipoly_to_doc(q) for l, q in sorted(rec.q.items())},
        "poincare_type": info.poincare_ok,
        "fuchsian": info.fuchsian,
        "R_star": format_rational(R_star),
        "moment_residual_zero": residual_ok,
    }
    status = EXIT_OK if residual_ok else EXIT_VERIFY
    try:
        cert = stieltjes_certificate(op, data, moments, job.precision)
        rep = verify(moments, cert, job.horizon)
        report["certificate"] = ser.certificate_to_doc(cert)
        report["verification"] = emit_report([_verification_row(rep, cert)])[1]["rows"][0]
        if not rep.passed:
            status = EXIT_VERIFY
    except CertificateError as exc:
        report["certificate_error"] = str(exc)
    return Outcome(report, status, csv=ser.sequence_to_csv(list(moments)[: job.horizon + 1]))


def run_bautin(job: JobSpec) -> Outcome:
    doc = job.document
    rec = ser.parametric_from_doc(ser._get(doc, "recurrence", dict))
    init = [ser.multipoly_from_doc(p, rec.nvars) for p in ser._get(doc, "init", list)]
    K = job.horizon
    ps = generate_parametric(rec, init, K)
    w = ideal_witness(rec, init, K, series=ps)
    bounds = degree_bounds(rec, init, K)
    report = {
        "command": "bautin",
        "index_bound": w.index_bound,
        "witness_verified": w.verified,
        "degrees": list(ps.degrees),
        "degree_bounds": list(bounds),
        "values": [ser.multipoly_to_doc(a) for a in ps.values],
    }
    ok = w.verified and all(a <= b for a, b in zip(ps.degrees, bounds))
    try:
        chk = coefficient_recurrence_check(ps)
        report["coefficient_recurrence"] = {"checked": chk.checked, "ok": chk.ok}
        ok = ok and chk.ok
        if K >= 4:
            prof = a0_profile(ps)
            report["profile"] = {"K1": prof.K1, "K2": prof.K2, "K3": prof.K3, "K4": prof.K4,
                                 "degree_at_most_k": prof.degree_at_most_k}
    except NonLinearError:
        report["coefficient_recurrence"] = None
    return Outcome(report, EXIT_OK if ok else EXIT_VERIFY)


def run_abel(job: JobSpec) -> Outcome:
    doc = job.document
    eq = ser.abel_from_doc(ser._get(doc, "equation", dict))
    K = job.horizon
    exp = poincare_coefficients(eq, K)
    report = {"command": "abel", "K": K, "coefficients": [ser.unipoly_to_doc(v) for v in exp.v]}
    status = EXIT_OK
    if doc.get("oracle", True):
        ag = oracle_agreement(eq, K)
        report["oracle"] = {"slope": ag.slope, "exact_match": ag.exact_match, "passed": ag.passed,
                            "mismatches": list(ag.mismatches)}
        if not ag.passed:
            status = EXIT_VERIFY
    if "radius" in doc:
        fp = fixed_point_count(exp, eq.b, ser.rat(doc["radius"]))
        report["fixed_points"] = {"center": fp.center, "leading_order": fp.leading_order,
                                  "count": None if fp.count is None else fp.count.count}
    return Outcome(report, status)


def run_suite_job(job: JobSpec, echo=print) -> Outcome:
    from .suite import run_suite

    results = run_suite(list(job.only) or None, seed=job.seed, echo=echo)
    report = {"command": "suite", "results": [r.to_doc() for r in results]}
    return Outcome(report, EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY)


COMMANDS = {
    "generate": run_generate,
    "certify": run_certify,
    "verify": run_verify,
    "zeros": run_zeros,
    "dfinite": run_dfinite,
    "bautin": run_bautin,
    "abel": run_abel,
    "suite": run_suite_job,
}


def run(job: JobSpec) -> Outcome:
    try:
        outcome = COMMANDS[job.command](job)
        outcome.report = ser._plain(outcome.report)
        return outcome
    except ser.SchemaError as exc:
        return Outcome({"command": job.command, "schema_error": str(exc)}, EXIT_SCHEMA)
    except KeyError as exc:
        return Outcome({"command": job.command, "schema_error": f"unknown command or field {exc}"}, EXIT_SCHEMA)


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="taylordom", description="Taylor domination certificates and tools.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name != "suite":
            p.add_argument("input", help="JSON document path, or - for stdin")
        p.add_argument("--mode", choices=MODES, default=EXACT)
        p.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="working precision in bits")
        p.add_argument("--horizon", type=int, default=None, help="horizon K")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="write the report (and CSV, if any) here")
        if name == "certify":
            p.add_argument("--method", choices=METHODS, default=None)
        if name == "suite":
            p.add_argument("--only", type=int, nargs="*", default=[], help="criterion numbers to run")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    random.seed(args.seed)
    default_horizon = {"abel": 20, "bautin": 20}.get(args.command, 100)
    document = {}
    if args.command != "suite":
        try:
            document = ser.loads(_read(args.input))
        except OSError as exc:
            print(ser.dumps({"schema_error": str(exc)}), end="")
            return EXIT_SCHEMA
        except ser.SchemaError as exc:
            print(ser.dumps({"schema_error": str(exc)}), end="")
            return EXIT_SCHEMA
        if not isinstance(document, dict):
            print(ser.dumps({"schema_error": "top-level document must be an object"}), end="")
            return EXIT_SCHEMA
    job = JobSpec(args.command, document, args.out, args.mode, args.precision,
                  args.horizon if args.horizon is not None else default_horizon, args.seed,
                  getattr(args, "method", None), tuple(getattr(args, "only", []) or ()))
    outcome = run(job)
    text = ser.dumps(outcome.report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if outcome.csv is not None:
            with open(args.out.rsplit(".", 1)[0] + ".csv", "w", encoding="utf-8") as fh:
                fh.write(outcome.csv)
    elif args.command == "generate" and outcome.status == EXIT_OK:
        sys.stdout.write(outcome.csv)
    else:
        sys.stdout.write(text)
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
