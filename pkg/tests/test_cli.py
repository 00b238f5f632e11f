"""Config parsing, report determinism, and exit-code contracts of the CLI."""
from __future__ import annotations

import json
import math

import pytest

from orthoforms.cli import main
from orthoforms.special import limit_constant
from orthoforms.suites import (
    ConfigError, RunConfig, RunParams, parse_config, run,
)


def _write_config(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


# ---------------------------------------------------------------------------
# config parsing


def test_parse_config_unknown_top_level_field():
    with pytest.raises(ConfigError) as err:
        parse_config({"suite": "identities", "bogus": 1})
    assert err.value.field == "bogus"


def test_parse_config_unknown_parameter_named():
    with pytest.raises(ConfigError) as err:
        parse_config({"suite": "identities",
                      "parameters": {"not_a_knob": 3}})
    assert "not_a_knob" in err.value.field


def test_parse_config_unknown_suite():
    with pytest.raises(ConfigError) as err:
        parse_config({"suite": "nonsense"})
    assert err.value.field == "suite"
    assert "nonsense" in str(err.value)


def test_parse_config_bad_value_types():
    with pytest.raises(ConfigError) as err:
        parse_config({"suite": "identities",
                      "parameters": {"samples": "many"}})
    assert err.value.field == "parameters.samples"
    with pytest.raises(ConfigError) as err:
        parse_config({"suite": "identities",
                      "parameters": {"n_values": [7]}})
    assert err.value.field == "parameters.n_values"
    with pytest.raises(ConfigError) as err:
        parse_config({"suite": "identities", "output": 5})
    assert err.value.field == "output"


def test_parse_config_defaults():
    cfg = parse_config({"suite": "metric"})
    assert cfg.params.seed == RunParams().seed
    assert cfg.lattice == {"standard": 2}


# ---------------------------------------------------------------------------
# report invariants


def test_report_byte_identical_for_fixed_seed(tmp_path):
    cfg = _write_config(tmp_path, {
        "suite": "geometry", "parameters": {"samples": 6, "seed": 31}})
    out1, out2 = tmp_path / "a.ndjson", tmp_path / "b.ndjson"
    assert main(["verify", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["verify", "--config", cfg, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_report_records_sorted_and_well_formed(tmp_path):
    cfg = _write_config(tmp_path, {
        "suite": "metric", "parameters": {"samples": 4}})
    out = tmp_path / "r.ndjson"
    assert main(["verify", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    header = json.loads(lines[0])["header"]
    assert header["suite"] == "metric"
    assert header["rng"] == "numpy PCG64"
    records = [json.loads(line) for line in lines[1:]]
    ids = [r["check_id"] for r in records]
    assert ids == sorted(ids)
    for r in records:
        assert set(r) >= {"check_id", "anchor", "inputs_digest", "value",
                          "reference", "abs_err", "rel_err", "tolerance",
                          "pass"}


def test_empty_identities_suite_passes_with_empty_report(tmp_path):
    cfg = _write_config(tmp_path, {
        "suite": "identities", "parameters": {"samples": 0}})
    out = tmp_path / "r.ndjson"
    assert main(["verify", "--config", cfg, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1  # header only, no records
    assert "header" in json.loads(lines[0])


def test_csv_export_shape(tmp_path):
    cfg = _write_config(tmp_path, {
        "suite": "identities", "parameters": {"samples": 3,
                                              "n_values": [1, 2]}})
    csv_path = tmp_path / "r.csv"
    assert main(["verify", "--config", cfg, "--csv", str(csv_path)]) == 0
    rows = csv_path.read_text().splitlines()
    assert rows[0].startswith("check_id,anchor,")
    assert len(rows) == 1 + 10  # 5 battery checks x 2 ranks
    assert all(row.count(",") == rows[0].count(",") for row in rows)


def test_constants_suite_record_matches_closed_form(tmp_path):
    report = run(RunConfig(suite="constants"))
    by_id = {r.check_id: r for r in report.records}
    rec = by_id["constants/limit-constant/n2-kappa3"]
    closed = -math.pi / (2.0 * 4.0 ** 3 * 2.0)
    assert rec.passed
    assert abs(rec.value - closed) < 1e-12
    assert report.passed


# ---------------------------------------------------------------------------
# exit codes


def test_bad_config_exits_2_naming_field(tmp_path, capsys):
    cfg = _write_config(tmp_path, {
        "suite": "identities", "parameters": {"wrong": 1}})
    assert main(["verify", "--config", cfg]) == 2
    assert "parameters.wrong" in capsys.readouterr().err


def test_missing_suite_exits_2(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"parameters": {"samples": 2}})
    assert main(["verify", "--config", cfg]) == 2
    assert "suite" in capsys.readouterr().err


def test_unreadable_config_exits_2(tmp_path, capsys):
    assert main(["verify", "identities", "--config",
                 str(tmp_path / "missing.json")]) == 2
    assert "--config" in capsys.readouterr().err


def test_duality_without_cycle_data_exits_2(capsys):
    assert main(["verify", "duality"]) == 2
    err = capsys.readouterr().err
    assert "duality" in err and "mu" in err


def test_verify_failure_exits_1(tmp_path, capsys):
    # the collar-limit comparison against the printed constant is a known
    # honest failure: the measured limit is twice that value
    cfg = _write_config(tmp_path, {
        "suite": "tube_limit",
        "parameters": {"kappa_values": [3],
                       "eps_schedule": [0.1, 0.05]}})
    assert main(["verify", "--config", cfg]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "doubled-constant" in out


# ---------------------------------------------------------------------------
# evaluator subcommands


def test_eval_kernel_json(capsys):
    code = main(["eval-kernel", "--n", "2", "--lam", "0,0,1,1",
                 "--kappa", "3", "--z", "0.3+1.2j,0.1+0.2j", "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["kind"] == "omega"
    re, im = payload["value"]
    assert math.isfinite(re) and math.isfinite(im)


def test_eval_kernel_singular_point_exits_1(capsys):
    # lam = e' pairs with psi(Z) as 1, but the positive-cone condition for
    # ptilde fails for a vector of zero norm
    code = main(["eval-kernel", "--n", "1", "--lam", "0,0,1",
                 "--kappa", "3", "--z", "0.0+1.0j", "--kind", "ptilde"])
    assert code == 1
    assert "singular" in capsys.readouterr().err


def test_eval_kernel_bad_vector_exits_2(capsys):
    assert main(["eval-kernel", "--n", "2", "--lam", "1,2",
                 "--z", "0.3+1.2j,0.1+0.2j"]) == 2
    assert "--lam" in capsys.readouterr().err


def test_eval_series_reports_value_tail_count(capsys):
    code = main(["eval-series", "--n", "1", "--m", "1", "--kappa", "4",
                 "--bound", "10", "--z", "0.2+1.1j", "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["count"] > 0
    assert payload["tail"] >= 0.0


def test_constant_matches_library(capsys):
    assert main(["constant", "--n", "2", "--kappa", "4", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    lib = limit_constant(2, 4)
    assert abs(complex(*payload["value"]) - lib) < 1e-15


def test_constant_bad_domain_exits_2(capsys):
    assert main(["constant", "--n", "4", "--kappa", "3"]) == 2
