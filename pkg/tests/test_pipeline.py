import json
import subprocess
import sys
from fractions import Fraction

import pytest

from conftest import M_BIG
from pellsum.bigreal import GAMMA, parse_decimal
from pellsum.cli import main
from pellsum.pipeline import (
    STAGES,
    PipelineConfig,
    emit_report,
    mu_expr,
    round3_pairs,
    run_pipeline,
    structural_degeneracy_notes,
    verify_certificate,
    verify_certificate_report,
)
from pellsum.search import CLAIMED_SOLUTIONS, SolutionTuple


def tamper(data: bytes, fn) -> bytes:
    doc = json.loads(data)
    fn(doc)
    return json.dumps(doc).encode()


def test_stage_order(certificate):
    assert [r["stage"] for r in certificate.stage_records] == list(STAGES)


def test_bounds_chain_through(certificate):
    s1 = int(certificate.stage("reduce_n_minus_m")["bound"])
    s2 = int(certificate.stage("reduce_n_minus_ell")["bound"])
    s3 = int(certificate.stage("reduce_n")["bound"])
    assert s1 <= 140 and s2 <= 150 and s3 < 150
    assert certificate.stage("reduce_n")["ok"]


def test_proof_shape(certificate):
    s1 = int(certificate.stage("reduce_n_minus_m")["bound"])
    s2 = int(certificate.stage("reduce_n_minus_ell")["bound"])
    r2 = certificate.stage("reduce_n_minus_ell")["records"]
    assert [int(r["shifts"][0]) for r in r2] == list(range(s1 + 1))
    assert [r["shifts"][0] for r in r2 if r["method"] == "legendre"] == ["1", "2"]
    assert all(r["w_bound"] == "122" for r in r2 if r["method"] == "legendre")
    r3 = certificate.stage("reduce_n")["records"]
    assert [tuple(int(x) for x in r["shifts"]) for r in r3] == list(round3_pairs(s1, s2))


def test_round_one_record_fields(certificate):
    rec = certificate.stage("reduce_n_minus_m")["records"][0]
    for key in ("q_used", "epsilon_lower", "w_bound"):
        assert isinstance(rec[key], str)
    assert int(rec["q_used"]) > 6 * M_BIG
    assert parse_decimal(rec["epsilon_lower"]) > 0


def test_published_list_is_not_reproduced(certificate):
    """The enumeration finds (4, 2, 2, 4) as well, so the claimed list does not verify."""
    assert certificate.verdict == "failed"
    assert certificate.failure["stage"] == "brute_force"
    assert certificate.stage("brute_force")["unexpected"] == [["4", "2", "2", "4"]]
    assert certificate.stage("brute_force")["missing"] == []


def test_corrected_list_verifies():
    full = CLAIMED_SOLUTIONS | {SolutionTuple(4, 2, 2, 4)}
    cert = run_pipeline(PipelineConfig(expected_solutions=full))
    assert cert.verdict == "verified"
    data = emit_report(cert)
    assert json.loads(data)["verdict"] == "verified"
    assert verify_certificate(data)


def test_json_types(certificate_json):
    doc = json.loads(certificate_json)

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)
        else:
            assert isinstance(x, (str, bool)) or x is None, x

    walk(doc)
    assert list(doc)[:3] == ["tool_version", "precision_policy", "config"]


def test_text_report_sections(certificate):
    text = emit_report(certificate, "text").decode()
    positions = [text.index(f"== {s} ==") for s in STAGES]
    assert positions == sorted(positions)
    assert "verdict:" in text


def test_round_trip(certificate_json):
    assert verify_certificate_report(certificate_json) == []
    assert verify_certificate(certificate_json)


def test_tamper_removed_solution(certificate_json):
    bad = tamper(certificate_json, lambda d: d["final_solution_set"].pop())
    assert not verify_certificate(bad)
    bad = tamper(certificate_json, lambda d: d["stage_records"][-1]["solutions"].pop(0))
    assert not verify_certificate(bad)


def test_tamper_negated_epsilon(certificate_json):
    def negate(d):
        rec = d["stage_records"][3]["records"][0]
        rec["epsilon_lower"] = "-" + rec["epsilon_lower"]

    problems = verify_certificate_report(tamper(certificate_json, negate))
    assert problems and problems[0].startswith("reduce_n_minus_m")


def test_tamper_w_bound_and_verdict(certificate_json):
    def shrink(d):
        d["stage_records"][4]["records"][5]["w_bound"] = "20"

    assert not verify_certificate(tamper(certificate_json, shrink))
    assert not verify_certificate(tamper(certificate_json, lambda d: d.update(verdict="verified")))


def test_unparseable_certificate():
    with pytest.raises(ValueError):
        verify_certificate(b"{not json")
    with pytest.raises(ValueError):
        verify_certificate(b"{}")


@pytest.mark.slow
def test_idempotent(certificate_json):
    assert emit_report(run_pipeline(PipelineConfig())) == certificate_json


def test_partial_run_stops():
    cert = run_pipeline(stop_after="reduce_n_minus_m")
    assert cert.verdict == "incomplete"
    assert [r["stage"] for r in cert.stage_records] == list(STAGES[:4])
    assert verify_certificate(emit_report(cert))
    with pytest.raises(ValueError):
        run_pipeline(stop_after="nope")


def test_small_m_big_fails_absolute_bound():
    cert = run_pipeline(PipelineConfig(m_big=10**20))
    assert cert.verdict == "failed" and cert.failure["stage"] == "absolute_bound"


def test_degenerate_shift_identities():
    assert len(structural_degeneracy_notes()) == 3
    mu1, mu2, g = mu_expr((1,))(256), mu_expr((2,))(256), GAMMA(256)
    assert abs(mu1.midpoint) < Fraction(1, 2**200)
    assert abs(mu2.midpoint - (1 - g.midpoint)) < Fraction(1, 2**200)


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(output_format="xml")
    with pytest.raises(ValueError):
        PipelineConfig(m_big=1)


# -- command line ------------------------------------------------------------------


def test_cli_verify_exit_codes(tmp_path, certificate_json):
    good = tmp_path / "cert.json"
    good.write_bytes(certificate_json)
    assert main(["verify", str(good)]) == 0
    bad = tmp_path / "bad.json"
    bad.write_bytes(tamper(certificate_json, lambda d: d["final_solution_set"].pop()))
    assert main(["verify", str(bad), "--format", "text"]) == 1


def test_cli_run_stage_and_out(tmp_path):
    out = tmp_path / "partial.json"
    assert main(["run", "--stage", "bound_chain", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["verdict"] == "incomplete" and len(doc["stage_records"]) == 2


def test_cli_search_and_cf(capsys):
    assert main(["search", "--n-max", "10", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["not_in_claimed_list"] == [["4", "2", "2", "4"]]
    assert main(["cf", "--terms", "100"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["partial_quotients"][:5] == ["0", "1", "3", "1", "2"]
    assert doc["bracket"]["lower"] == "87" and doc["bracket"]["max_a_1_to_upper"] == "100"


@pytest.mark.parametrize("argv", [
    ["run", "--m-big", "4.5"],
    ["run", "--stage", "nope"],
    ["run", "--precision-bits", "512", "--max-precision-bits", "256"],
    ["frobnicate"],
    [],
])
def test_cli_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_cli_bad_certificate_is_usage_error(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("garbage")
    with pytest.raises(SystemExit) as exc:
        main(["verify", str(p)])
    assert exc.value.code == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "pellsum", "search", "--n-max", "3", "--format", "text"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "(3, 2, 1, 3)" in r.stdout
