import json
import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taylordom import serialize as ser
from taylordom.abel import AbelEquation, random_equation
from taylordom.bautin import random_parametric
from taylordom.cli import EXIT_OK, EXIT_SCHEMA, EXIT_UNRELIABLE, EXIT_VERIFY, JobSpec, emit_report, main, run
from taylordom.core.poly import UniPoly
from taylordom.dfinite import builtin_family
from taylordom.domination import cert_turan
from taylordom.recurrence import GeometricLaw, RationalLaw, RecurrenceSpec, TabulatedLaw
from taylordom.suite import random_bounded_spec, random_poincare_spec

FIB = {"spec": {"constant": ["1", "1"]}, "init": ["0", "1"]}
PHI = (1 + math.sqrt(5)) / 2


def _write(tmp_path, doc, name="in.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_certify_turan_on_fibonacci(tmp_path, capsys):
    assert main(["certify", _write(tmp_path, FIB), "--method", "turan", "--horizon", "200"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    cert = report["certificate"]
    assert cert["N"] == 1 and cert["rule"]["kind"] == "turan"
    R = ser.rat(cert["R"])
    assert R <= F(1) / F(PHI) + F(1, 10**12) and float(R) == pytest.approx(1 / PHI, abs=1e-12)
    assert report["verification"]["passed"] is True


def test_generate_zero_init_gives_zero_csv(tmp_path, capsys):
    doc = {"spec": {"constant": ["2", "-1/3"]}, "init": ["0", "0"]}
    assert main(["generate", _write(tmp_path, doc), "--horizon", "5"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "k,num,den"
    assert lines[1:] == [f"{k},0,1" for k in range(6)]


def test_generate_float_mode_header(tmp_path, capsys):
    assert main(["generate", _write(tmp_path, FIB), "--horizon", "10", "--mode", "float"]) == EXIT_OK
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "k,re,im" and rows[-1].startswith("10,55.0,")


@pytest.mark.parametrize("text", ["{not json", "[1, 2]", '{"spec": {"constant": [0.5]}, "init": ["1"]}',
                                  '{"spec": {"constant": ["1"]}}', '{"spec": {"constant": ["1/0"]}, "init": ["1"]}'])
def test_malformed_document_is_schema_error(tmp_path, capsys, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    assert main(["certify", str(path)]) == EXIT_SCHEMA
    assert "schema_error" in json.loads(capsys.readouterr().out)


def test_verify_failure_exit_code(tmp_path, capsys):
    cert = ser.certificate_to_doc(cert_turan(RecurrenceSpec((1, 1))).with_radius(F(9, 10)))
    doc = dict(FIB, certificate=cert)
    assert main(["verify", _write(tmp_path, doc), "--horizon", "60"]) == EXIT_VERIFY
    row = json.loads(capsys.readouterr().out)["verification"]
    assert row["passed"] is False and row["worst_k"] is not None


def test_verify_roundtrip_certificate_passes(tmp_path, capsys):
    cert = ser.certificate_to_doc(cert_turan(RecurrenceSpec((1, 1))))
    assert main(["verify", _write(tmp_path, dict(FIB, certificate=cert)), "--horizon", "100"]) == EXIT_OK


def test_zeros_geometric(tmp_path, capsys):
    doc = {"spec": {"constant": ["1"]}, "init": ["1"], "radius": "1/100"}
    assert main(["zeros", _write(tmp_path, doc), "--horizon", "40"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["count"] == 0 and rep["bound"]["certified"] and rep["bound"]["N"] == 0


def test_zeros_near_contour_is_unreliable(tmp_path, capsys):
    doc = {"sequence": ["-1/2", "1"], "radius": "1/2"}
    assert main(["zeros", _write(tmp_path, doc)]) == EXIT_UNRELIABLE


def test_dfinite_command(tmp_path, capsys):
    m = builtin_family()[0]
    doc = {"operator": ser.operator_to_doc(m.op), "function": ser.function_to_doc(m.g)}
    out = tmp_path / "rep.json"
    assert main(["dfinite", _write(tmp_path, doc), "--horizon", "60", "--out", str(out)]) == EXIT_OK
    rep = json.loads(out.read_text())
    assert rep["moment_residual_zero"] and rep["verification"]["passed"]
    assert (tmp_path / "rep.csv").read_text().startswith("k,")


def test_bautin_command(tmp_path, capsys):
    doc = {"recurrence": {"d": 1, "nvars": 2, "rules": [[{"u": [1], "A": {"nvars": 2, "terms": [[[1, 0], "1"], [[0, 1], "1"]]}}]]},
           "init": [{"nvars": 2, "terms": [[[0, 0], "1"]]}]}
    assert main(["bautin", _write(tmp_path, doc), "--horizon", "8"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["witness_verified"] and rep["degrees"] == list(range(9))


def test_abel_command(tmp_path, capsys):
    doc = {"equation": ser.abel_to_doc(AbelEquation(UniPoly([1]), UniPoly([]))), "radius": "1/20"}
    assert main(["abel", _write(tmp_path, doc), "--horizon", "12"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert ser.rats(rep["coefficients"][3]) == [0, 0, 1] and rep["fixed_points"]["count"] == 2


def test_suite_command_subset(capsys):
    assert main(["suite", "--only", "5", "6"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "[PASS] criterion 5" in out and "[PASS] criterion 6" in out


def test_emit_report_examples():
    table, doc = emit_report([])
    assert table == "" and doc == {"rows": []}
    cert = cert_turan(RecurrenceSpec((1, F(1, 2))))
    table, doc = emit_report([{"N": cert.N, "R": cert.R, "rule": cert.rule.name, "passed": True},
                              {"N": 0, "R": F(1, 3), "rule": "tabulated", "worst_k": 17, "passed": False}])
    assert doc["rows"][0]["R"] == ser.fmt(cert.R) and "/" in doc["rows"][0]["R"]
    lines = table.splitlines()
    assert lines[1].startswith("  ") and lines[2].startswith("! ")
    assert doc["rows"][1]["worst_k"] == 17 and "17" in lines[2]
    for row, line in zip(doc["rows"], lines[1:]):
        assert all(str(v) in line for v in row.values() if not isinstance(v, bool))


def test_jobspec_roundtrip_is_byte_identical():
    job = JobSpec("certify", FIB, "out.json", "exact", 128, 300, 7, "turan")
    text = job.dumps()
    assert JobSpec.loads(text).dumps() == text and JobSpec.loads(text) == job


def test_deterministic_reports(tmp_path, capsys):
    path = _write(tmp_path, FIB)
    outs = []
    for _ in range(2):
        main(["certify", path, "--horizon", "80", "--seed", "3"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


# --------------------------------------------------------------------------
# serialization round trips


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["bounded", "poincare", "delta"]))
def test_spec_roundtrip(seed, kind):
    rng = random.Random(seed)
    if kind == "bounded":
        spec, _ = random_bounded_spec(rng, 40)
    else:
        spec, _ = random_poincare_spec(rng, delta=kind == "delta")
    doc = ser.spec_to_doc(spec)
    back = ser.spec_from_doc(json.loads(ser.dumps(doc)))
    assert back == spec and ser.dumps(ser.spec_to_doc(back)) == ser.dumps(doc)


def test_law_roundtrips():
    for law in (RationalLaw.of([F(1, 3)], [0, 1]), GeometricLaw(F(-2), F(1, 2)), TabulatedLaw(2, (F(1), F(-1, 7)), F(1))):
        assert ser.law_from_doc(json.loads(ser.dumps(ser.law_to_doc(law)))) == law


def test_certificate_roundtrip():
    for cert in (cert_turan(RecurrenceSpec((1, 1))),):
        doc = ser.certificate_to_doc(cert)
        back = ser.certificate_from_doc(json.loads(ser.dumps(doc)))
        assert (back.N, back.R, back.rule) == (cert.N, cert.R, cert.rule)
        assert ser.dumps(ser.certificate_to_doc(back)) == ser.dumps(doc)


def test_family_roundtrip():
    for m in builtin_family():
        assert ser.operator_from_doc(json.loads(ser.dumps(ser.operator_to_doc(m.op)))) == m.op
        assert ser.function_from_doc(json.loads(ser.dumps(ser.function_to_doc(m.g)))) == m.g


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_parametric_and_abel_roundtrip(seed):
    rng = random.Random(seed)
    rec, init = random_parametric(rng, 10)
    doc = ser.parametric_to_doc(rec)
    back = ser.parametric_from_doc(json.loads(ser.dumps(doc)))
    assert all(back.P(k) == rec.P(k) for k in range(rec.d, 11))
    for p in init:
        assert ser.multipoly_from_doc(json.loads(ser.dumps(ser.multipoly_to_doc(p))), rec.nvars) == p
    eq = random_equation(rng)
    assert ser.abel_from_doc(json.loads(ser.dumps(ser.abel_to_doc(eq)))) == eq


def test_csv_roundtrip():
    vals = [F(1), F(-3, 7), F(0)]
    assert ser.sequence_from_csv(ser.sequence_to_csv(vals)) == vals
    cvals = [complex(1.5, -2), complex(0, 1e-300)]
    assert ser.sequence_from_csv(ser.sequence_to_csv(cvals)) == cvals
    with pytest.raises(ser.SchemaError):
        ser.sequence_from_csv("k,x\n0,1\n")
