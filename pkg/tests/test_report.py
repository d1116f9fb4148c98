import csv
import math

from normid import NormSpec, parallelogram, frechet, plain_as_signed
from normid.report import probe_sweep, residual_sweep, write_report


def test_residual_sweep_dips_at_p2():
    rows = residual_sweep(parallelogram(), trials=50, seed=0)
    by_label = {row.norm_label: row for row in rows}
    assert not by_label["lp:2"].violated
    assert by_label["lp:2"].max_rel_residual < 1e-9
    assert by_label["lp:1"].violated
    assert by_label["linf"].violated
    assert math.isinf(by_label["linf"].p)


def test_residual_sweep_on_plain_identity():
    rows = residual_sweep(plain_as_signed(frechet()), trials=30, seed=1)
    assert any(row.violated for row in rows if row.norm_label != "lp:2")
    assert not next(row for row in rows if row.norm_label == "lp:2").violated


def test_probe_sweep_separates_norms():
    rows = probe_sweep()
    worst = {}
    for row in rows:
        worst[row.norm_label] = max(
            worst.get(row.norm_label, 0.0), abs(row.third_difference)
        )
    assert worst["lp:2"] <= 1e-8
    assert worst["lp:1"] >= 3 - 1e-6
    assert worst["linf"] >= 1.0


def test_write_report_produces_csv_and_figures(tmp_path):
    artifacts = write_report(parallelogram(), tmp_path / "out", trials=20, seed=0)
    for path in (
        artifacts.residuals_csv,
        artifacts.probe_csv,
        artifacts.residuals_figure,
        artifacts.probe_figure,
    ):
        assert path.exists()
        assert path.stat().st_size > 0
    with artifacts.residuals_csv.open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == len(artifacts.sweep_rows)
    assert {row["norm"] for row in rows} >= {"lp:1", "lp:2", "linf"}
    p2 = next(row for row in rows if row["norm"] == "lp:2")
    assert p2["violated"] == "0"
    with artifacts.probe_csv.open() as fh:
        probe_rows = list(csv.DictReader(fh))
    assert len(probe_rows) == len(artifacts.probe_rows)
    assert artifacts.residuals_figure.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_report_cli_roundtrip(tmp_path, capsys, monkeypatch):
    import io
    import json
    import sys
    from importlib import resources

    import jsonschema

    from normid.cli import main
    from normid import serialize

    text = serialize(2, parallelogram())
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    code = main(
        ["report", "-", "--out", str(tmp_path / "rep"), "--trials", "10", "--json"]
    )
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out)
    schema = json.loads(
        resources.files("normid").joinpath("run_report.schema.json").read_text()
    )
    jsonschema.validate(payload, schema)
    assert len(payload["result"]["files"]) == 4
    assert (tmp_path / "rep" / "residuals.png").exists()
