"""JSON documents for every input and report type.

Exact rationals are always written as "p/q" strings, never as floating
literals.  ``to_doc``/``from_doc`` pairs round-trip exactly, and
``dumps`` is canonical (sorted keys, fixed separators), so the same object
always serializes to the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Optional

from .abel import AbelEquation
from .bautin import ParametricRecurrence
from .core.multipoly import MultiPoly
from .core.poly import UniPoly
from .core.scalar import ScalarParseError, format_rational, format_scalar, is_exact, parse_scalar
from .dfinite import DifferentialOperator, ExpPolyPiece, PiecewiseFunction, PolyPiece
from .domination import ConstantRule, DominationCertificate, TabulatedRule, TuranRule
from .recurrence import ZERO, GeometricLaw, RationalLaw, RecurrenceSpec, TabulatedLaw, ZeroLaw


class SchemaError(ValueError):
    """A document does not match the expected schema."""


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc


def _get(doc, key, kind=None, default=...):
    if not isinstance(doc, dict):
        raise SchemaError(f"expected an object, got {type(doc).__name__}")
    if key not in doc:
        if default is ...:
            raise SchemaError(f"missing field '{key}'")
        return default
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"field '{key}' must be {getattr(kind, '__name__', kind)}")
    return val


def rat(obj) -> Fraction:
    if isinstance(obj, float):
        raise SchemaError(f"floating literal {obj!r}; write exact values as \"p/q\" strings")
    try:
        x = parse_scalar(obj)
    except (ScalarParseError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(str(exc)) from exc
    if not is_exact(x):
        raise SchemaError(f"expected an exact rational, got {obj!r}")
    return x


def rats(obj) -> list:
    if not isinstance(obj, list):
        raise SchemaError("expected a list of rationals")
    return [rat(v) for v in obj]


def fmt(x) -> Any:
    return format_scalar(x)


# --------------------------------------------------------------------------
# recurrence specs


def law_to_doc(law) -> dict:
    if isinstance(law, ZeroLaw):
        return {"kind": "zero"}
    if isinstance(law, RationalLaw):
        return {"kind": "rational", "num": [fmt(c) for c in law.num.coeffs], "den": [fmt(c) for c in law.den.coeffs]}
    if isinstance(law, GeometricLaw):
        return {"kind": "geometric", "coeff": fmt(law.coeff), "base": fmt(law.base)}
    if isinstance(law, TabulatedLaw):
        return {"kind": "tabulated", "start": law.start, "values": [fmt(v) for v in law.values],
                "tail_bound": None if law.tail_bound is None else fmt(law.tail_bound)}
    raise SchemaError(f"cannot serialize law {law!r}")


def law_from_doc(doc) -> object:
    kind = _get(doc, "kind", str)
    try:
        if kind == "zero":
            return ZERO
        if kind == "rational":
            return RationalLaw.of(rats(_get(doc, "num", list)), rats(_get(doc, "den", list)))
        if kind == "geometric":
            return GeometricLaw(rat(_get(doc, "coeff")), rat(_get(doc, "base")))
        if kind == "tabulated":
            tb = _get(doc, "tail_bound", default=None)
            return TabulatedLaw(_get(doc, "start", int), tuple(rats(_get(doc, "values", list))),
                                None if tb is None else rat(tb))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    raise SchemaError(f"unknown law kind '{kind}'")


def spec_to_doc(spec: RecurrenceSpec) -> dict:
    return {
        "constant": [fmt(c) for c in spec.constant],
        "perturbation": [law_to_doc(p) for p in spec.perturbation],
        "declared_bounds": None if spec.declared_bounds is None else [fmt(v) for v in spec.declared_bounds],
        "delta": None if spec.delta is None else law_to_doc(spec.delta),
    }


def spec_from_doc(doc) -> RecurrenceSpec:
    const = tuple(rats(_get(doc, "constant", list)))
    pert = tuple(law_from_doc(p) for p in _get(doc, "perturbation", list, default=[]))
    db = _get(doc, "declared_bounds", default=None)
    delta = _get(doc, "delta", default=None)
    try:
        return RecurrenceSpec(const, pert, None if db is None else tuple(rats(db)),
                              None if delta is None else law_from_doc(delta))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


# --------------------------------------------------------------------------
# certificates


def rule_to_doc(rule) -> dict:
    if isinstance(rule, ConstantRule):
        return {"kind": "constant", "C": fmt(rule.C)}
    if isinstance(rule, TuranRule):
        return {"kind": "turan", "d": rule.d}
    if isinstance(rule, TabulatedRule):
        return {"kind": "tabulated", "start": rule.start, "values": [fmt(v) for v in rule.values]}
    raise SchemaError(f"cannot serialize rule {rule!r}")


def rule_from_doc(doc):
    kind = _get(doc, "kind", str)
    if kind == "constant":
        return ConstantRule(rat(_get(doc, "C")))
    if kind == "turan":
        return TuranRule(_get(doc, "d", int))
    if kind == "tabulated":
        return TabulatedRule(_get(doc, "start", int), tuple(rats(_get(doc, "values", list))))
    raise SchemaError(f"unknown rule kind '{kind}'")


def _plain(obj):
    """Provenance values rendered with exact rationals as strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else repr(obj)
    return str(obj)


def certificate_to_doc(cert: DominationCertificate) -> dict:
    return {"N": cert.N, "R": format_rational(cert.R), "rule": rule_to_doc(cert.rule),
            "provenance": _plain(cert.provenance)}


def certificate_from_doc(doc) -> DominationCertificate:
    try:
        return DominationCertificate(_get(doc, "N", int), rat(_get(doc, "R")), rule_from_doc(_get(doc, "rule", dict)),
                                     dict(_get(doc, "provenance", dict, default={})))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


# --------------------------------------------------------------------------
# polynomials, operators and test functions


def unipoly_from_doc(obj, var: str = "x") -> UniPoly:
    return UniPoly(rats(obj), var)


def unipoly_to_doc(p: UniPoly) -> list:
    return [fmt(c) for c in p.coeffs]


def multipoly_to_doc(p: MultiPoly) -> dict:
    return {"nvars": p.nvars, "terms": [[list(b), fmt(c)] for b, c in sorted(p.terms.items())]}


def multipoly_from_doc(doc, nvars: Optional[int] = None) -> MultiPoly:
    if not isinstance(doc, dict):
        if nvars is None:
            raise SchemaError("constant polynomial needs a known variable count")
        return MultiPoly.constant(rat(doc), nvars)
    n = _get(doc, "nvars", int)
    if nvars is not None and n != nvars:
        raise SchemaError(f"polynomial has {n} variables, expected {nvars}")
    terms = {}
    for item in _get(doc, "terms", list):
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)):
            raise SchemaError("terms are [exponents, coefficient] pairs")
        beta = tuple(item[0])
        if len(beta) != n or not all(isinstance(e, int) and e >= 0 for e in beta):
            raise SchemaError(f"bad exponent {item[0]!r}")
        c = rat(item[1])
        terms[beta] = c.numerator if c.denominator == 1 else c
    return MultiPoly(terms, n)


def operator_to_doc(op: DifferentialOperator) -> list:
    return [unipoly_to_doc(p) for p in op.coeffs]


def operator_from_doc(doc) -> DifferentialOperator:
    if not isinstance(doc, list) or not doc:
        raise SchemaError("operator is a nonempty list of coefficient lists p_0..p_n")
    try:
        return DifferentialOperator(tuple(unipoly_from_doc(p) for p in doc))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def function_to_doc(g: PiecewiseFunction) -> dict:
    pieces = []
    for pc in g.pieces:
        if isinstance(pc, PolyPiece):
            pieces.append({"kind": "poly", "coeffs": unipoly_to_doc(pc.poly)})
        else:
            pieces.append({"kind": "exppoly", "coeffs": unipoly_to_doc(pc.poly), "rate": fmt(pc.rate)})
    return {"a": fmt(g.a), "b": fmt(g.b), "breaks": [fmt(x) for x in g.breaks], "pieces": pieces}


def function_from_doc(doc) -> PiecewiseFunction:
    pieces = []
    for pc in _get(doc, "pieces", list):
        kind = _get(pc, "kind", str)
        if kind == "poly":
            pieces.append(PolyPiece(unipoly_from_doc(_get(pc, "coeffs", list))))
        elif kind == "exppoly":
            pieces.append(ExpPolyPiece(unipoly_from_doc(_get(pc, "coeffs", list)), rat(_get(pc, "rate"))))
        else:
            raise SchemaError(f"unsupported piece kind '{kind}'")
    try:
        return PiecewiseFunction(rat(_get(doc, "a")), rat(_get(doc, "b")), tuple(rats(_get(doc, "breaks", list, default=[]))),
                                 tuple(pieces))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


# --------------------------------------------------------------------------
# parametric recurrences and Abel equations


def parametric_to_doc(rec: ParametricRecurrence) -> dict:
    if rec.rule_fn is not None:
        raise SchemaError("recurrences given by a callable cannot be serialized")
    rules = []
    for rule in rec.rules:
        rules.append([{"u": list(alpha), "A": multipoly_to_doc(A)} for alpha, A in sorted(rule.items())])
    return {"d": rec.d, "nvars": rec.nvars, "rules": rules}


def parametric_from_doc(doc) -> ParametricRecurrence:
    d, n = _get(doc, "d", int), _get(doc, "nvars", int)
    rules = []
    for rule in _get(doc, "rules", list):
        if not isinstance(rule, list):
            raise SchemaError("each rule is a list of {u, A} monomials")
        out = {}
        for mono in rule:
            alpha = _get(mono, "u", list)
            if len(alpha) != d or not all(isinstance(e, int) and e >= 0 for e in alpha):
                raise SchemaError(f"bad u-exponent {alpha!r}")
            out[tuple(alpha)] = multipoly_from_doc(_get(mono, "A"), n)
        rules.append(out)
    if not rules:
        raise SchemaError("need at least one rule")
    try:
        return ParametricRecurrence(d, n, tuple(rules))
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def abel_to_doc(eq: AbelEquation) -> dict:
    return {"p": unipoly_to_doc(eq.p), "q": unipoly_to_doc(eq.q), "a": fmt(eq.a), "b": fmt(eq.b)}


def abel_from_doc(doc) -> AbelEquation:
    try:
        return AbelEquation(unipoly_from_doc(_get(doc, "p", list)), unipoly_from_doc(_get(doc, "q", list)),
                            rat(_get(doc, "a", default="0")), rat(_get(doc, "b", default="1")))
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


# --------------------------------------------------------------------------
# sequences as CSV


def sequence_to_csv(values) -> str:
    """Header k,num,den for exact sequences and k,re,im otherwise."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    exact = all(is_exact(v) for v in values)
    w.writerow(["k", "num", "den"] if exact else ["k", "re", "im"])
    for k, v in enumerate(values):
        if exact:
            v = Fraction(v)
            w.writerow([k, v.numerator, v.denominator])
        else:
            z = complex(v)
            w.writerow([k, repr(z.real), repr(z.imag)])
    return buf.getvalue()


def sequence_from_csv(text: str) -> list:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        return []
    header = [h.strip() for h in rows[0]]
    out = []
    try:
        if header == ["k", "num", "den"]:
            for k, (i, num, den) in enumerate(rows[1:]):
                if int(i) != k:
                    raise SchemaError(f"row {k} has index {i}")
                out.append(Fraction(int(num), int(den)))
        elif header == ["k", "re", "im"]:
            for k, (i, re, im) in enumerate(rows[1:]):
                if int(i) != k:
                    raise SchemaError(f"row {k} has index {i}")
                out.append(complex(float(re), float(im)))
        else:
            raise SchemaError(f"unknown CSV header {header}")
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad CSV row: {exc}") from exc
    return out


def sequence_from_doc(doc) -> list:
    if not isinstance(doc, list):
        raise SchemaError("sequence is a list of \"p/q\" strings")
    return rats(doc)
