import csv
import io
import json
import os
from dataclasses import replace

import pytest
import yaml

from netselect import cli
from netselect.config import ConfigError, config_to_dict, load_config, parse_config, serialize_config
from netselect.report import (
    AGGREGATE_COLUMNS,
    RUN_COLUMNS,
    EmitError,
    RunManifest,
    emit_report,
    report_json,
    runs_csv,
)
from netselect.simulator import run_simulation
from netselect.strategy import InconsistentJudgmentsError, VariantId

V = VariantId


def default_doc(default_config):
    return config_to_dict(default_config)


def small_report(default_config, cls="conversational", **over):
    over.setdefault("replications", 2)
    return run_simulation(default_config.simulation(cls, **over), default_config.profiles[cls])


def test_default_config_shape(default_config):
    assert default_config.traffic_classes == ("background", "conversational", "interactive",
                                              "streaming")
    nets = {n.network_id: n for n in default_config.networks}
    assert list(nets) == ["UMTS", "WLAN", "WIMAX"]
    assert (nets["UMTS"].cb, nets["UMTS"].s, nets["UMTS"].ab_range) == (60, 70, (0.1, 2.0))
    assert (nets["WLAN"].cb, nets["WLAN"].s, nets["WLAN"].d_range) == (10, 50, (100.0, 150.0))
    assert (nets["WIMAX"].cb, nets["WIMAX"].s, nets["WIMAX"].j_range) == (40, 60, (3.0, 10.0))
    assert all(n.l_range == (20.0, 80.0) for n in nets.values())
    assert default_config.decision_points == 12
    assert default_config.variants == tuple(V)


def test_missing_level3_names_criterion(default_config):
    doc = default_doc(default_config)
    del doc["judgments"]["streaming"]["level3"]["J"]
    with pytest.raises(ConfigError, match=r"streaming\.level3\.J"):
        parse_config(yaml.safe_dump(doc))


def test_inverted_range_is_rejected(default_config):
    doc = default_doc(default_config)
    doc["networks"][1]["ab"] = [11, 1]
    with pytest.raises(ConfigError, match=r"networks\.WLAN\.ab: invalid range"):
        parse_config(yaml.safe_dump(doc))


def test_inconsistent_matrix_is_named(default_config):
    doc = default_doc(default_config)
    doc["judgments"]["background"]["level2"] = {
        "AB": {"D": 9, "J": "1/9", "L": 1}, "D": {"J": 9, "L": 1}, "J": {"L": 1}}
    with pytest.raises(InconsistentJudgmentsError, match=r"background\.level2"):
        parse_config(yaml.safe_dump(doc))


@pytest.mark.parametrize("text, where", [
    ("- a\n- b\n", "top level"),
    ("networks: []\njudgments: {}\n", "networks"),
    ("bogus: 1\n", "unknown section"),
    ("networks: [\n", "invalid YAML"),
])
def test_schema_errors(text, where):
    with pytest.raises(ConfigError, match=where):
        parse_config(text)


def test_bad_simulation_values(default_config):
    doc = default_doc(default_config)
    doc["simulation"]["decision_points"] = 0
    with pytest.raises(ConfigError, match="simulation.decision_points"):
        parse_config(yaml.safe_dump(doc))
    doc = default_doc(default_config)
    doc["simulation"]["variants"] = ["TOPSIS9"]
    with pytest.raises(ConfigError, match="simulation.variants"):
        parse_config(yaml.safe_dump(doc))


def test_round_trip(default_config):
    again = parse_config(serialize_config(default_config))
    assert config_to_dict(again) == config_to_dict(default_config)
    assert again.networks == default_config.networks
    for name, prof in default_config.profiles.items():
        assert again.profiles[name].matrices() == prof.matrices()


def test_simulation_overrides(default_config):
    sim = default_config.simulation("background", seed=7, replications=3)
    assert (sim.seed, sim.replications, sim.decision_points) == (7, 3, 12)
    with pytest.raises(ConfigError):
        default_config.simulation("video")


def test_manifest_validation():
    with pytest.raises(ValueError):
        RunManifest("out", formats=())
    with pytest.raises(ValueError):
        RunManifest("out", formats=("xml",))
    assert RunManifest("out", formats=(" CSV ",)).formats == ("csv",)


def test_empty_variant_set_gives_header_only(default_config):
    rep = small_report(default_config, variants=())
    assert runs_csv([rep]) == ",".join(RUN_COLUMNS) + "\n"


def test_one_replication_one_variant_one_row(default_config, tmp_path):
    rep = small_report(default_config, replications=1, variants=(V.TOPSIS2,))
    emit_report([rep], RunManifest(str(tmp_path)))
    rows = list(csv.DictReader(open(tmp_path / "runs.csv")))
    assert len(rows) == 1
    agg = list(csv.DictReader(open(tmp_path / "aggregate.csv")))
    assert len(agg) == 1 and tuple(agg[0]) == AGGREGATE_COLUMNS


def test_rates_recompute_from_rows(default_config):
    rep = small_report(default_config, "interactive", replications=5)
    for row in csv.DictReader(io.StringIO(runs_csv([rep]))):
        assert float(row["abnormality_rate"]) == pytest.approx(int(row["abnormality_events"]) / 12,
                                                               abs=1e-12)
        assert float(row["handoff_rate"]) == pytest.approx(int(row["handoff_count"]) / 12, abs=1e-12)


def test_json_carries_traces(default_config):
    rep = small_report(default_config, "streaming", replications=1, decision_points=3)
    doc = json.loads(report_json([rep]))
    cls = doc["traffic_classes"][0]
    assert cls["traffic_class"] == "streaming" and cls["seed"] == 42
    run = cls["runs"][0]
    assert len(run["trace"]) == 3
    point = run["trace"][0]
    assert set(point["snapshots"]) == {"UMTS", "WLAN", "WIMAX"}
    assert point["snapshots"]["UMTS"]["cb"] == 60
    assert set(point["variants"]) == {v.value for v in V}


def test_emit_is_byte_stable(default_config, tmp_path):
    rep = small_report(default_config)
    a, b = tmp_path / "a", tmp_path / "b"
    emit_report([rep], RunManifest(str(a)))
    emit_report([small_report(default_config)], RunManifest(str(b)))
    for name in ("runs.csv", "aggregate.csv", "report.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_emit_single_format(default_config, tmp_path):
    paths = emit_report([small_report(default_config)], RunManifest(str(tmp_path), ("json",)))
    assert [os.path.basename(p) for p in paths] == ["report.json"]
    assert sorted(os.listdir(tmp_path)) == ["report.json"]


def test_emit_failure_cleans_up(default_config, tmp_path):
    out = tmp_path / "out"
    out.mkdir()
    (out / "report.json").mkdir()  # a directory where a file must go
    with pytest.raises(EmitError):
        emit_report([small_report(default_config)], RunManifest(str(out)))
    assert sorted(os.listdir(out)) == ["report.json"]


def test_emit_into_file_path_fails(default_config, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(EmitError):
        emit_report([small_report(default_config)], RunManifest(str(blocker / "sub")))


def test_cli_runs(tmp_path, capsys):
    code = cli.main(["--traffic-class", "streaming", "--variant", "TOPSIS1,TOPSIS4",
                     "--replications", "3", "--decision-points", "4", "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "streaming" in out and "TOPSIS4" in out
    rows = list(csv.DictReader(open(tmp_path / "runs.csv")))
    assert len(rows) == 6
    assert {r["variant"] for r in rows} == {"TOPSIS1", "TOPSIS4"}


@pytest.mark.parametrize("argv", [
    ["--traffic-class", "video"],
    ["--variant", "TOPSIS7"],
    ["--replications", "0"],
    ["--format", "xml"],
    ["--config", "/nonexistent/config.yaml"],
])
def test_cli_errors(argv, tmp_path, capsys):
    assert cli.main(argv + ["--out", str(tmp_path)]) == 1
    assert "error" in capsys.readouterr().err


def test_cli_custom_config(default_config, tmp_path):
    cfg = replace(default_config, traffic_classes=("background",), replications=2)
    path = tmp_path / "c.yaml"
    path.write_text(serialize_config(cfg))
    assert load_config(str(path)).replications == 2
    assert cli.main(["--config", str(path), "--out", str(tmp_path / "o"), "--format", "csv"]) == 0
    rows = list(csv.DictReader(open(tmp_path / "o" / "runs.csv")))
    assert len(rows) == 2 * 4 and {r["traffic_class"] for r in rows} == {"background"}
