import json
import time
from pathlib import Path

import pytest

from cvbqc.algebra import params
from cvbqc.cli import main

ROOT = Path(__file__).resolve().parents[1]
PROGRAM = ROOT / "demos" / "program_brick.json"
CONFIG = ROOT / "demos" / "config_fock.json"


def test_verify_identities_passes_and_lists_enough(tmp_path, capsys):
    assert main(["verify-identities", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "identities.json").read_text())
    assert rep["all_passed"] and len(rep["identities"]) >= 20
    assert "identities pass" in capsys.readouterr().out


def test_verify_identities_fails_on_corrupted_feed_forward(tmp_path, monkeypatch):
    monkeypatch.setattr(params, "mm_inverse", lambda m: params.mm_matrix(m))
    assert main(["verify-identities", "--n-random", "5", "--out", str(tmp_path)]) == 1
    rep = json.loads((tmp_path / "identities.json").read_text())
    failed = {r["name"] for r in rep["identities"] if not r["passed"]}
    assert "brick_sq_cubic" in failed


def test_run_blind_example_program_is_deterministic_and_fast(tmp_path):
    t0 = time.perf_counter()
    assert main(["run-blind", str(PROGRAM), "--config", str(CONFIG), "--out", str(tmp_path / "a")]) == 0
    assert time.perf_counter() - t0 < 60
    assert main(["run-blind", str(PROGRAM), "--config", str(CONFIG), "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "transcript.jsonl").read_bytes()
    assert a == (tmp_path / "b" / "transcript.jsonl").read_bytes()
    rep = json.loads((tmp_path / "a" / "report.json").read_text())
    assert rep["transcript_pattern"] == "Q" * 10 + "DO" * 8
    assert all(rep["checks"].values())


def test_run_blind_seed_flag_overrides_config(tmp_path, capsys):
    # the example program is cubic, which the gaussian backend cannot run
    assert main(["run-blind", str(PROGRAM), "--backend", "gaussian", "--out", str(tmp_path)]) == 2
    assert "bricks[0].v" in capsys.readouterr().err
    prog = tmp_path / "quadratic.json"
    prog.write_text(json.dumps({"strategy": "brickwork", "bricks": [{"kind": "sp", "v": [0.3, 0.2]}]}))
    base = ["run-blind", str(prog), "--config", str(CONFIG), "--backend", "gaussian"]
    assert main(base + ["--out", str(tmp_path / "a")]) == 0
    assert main(base + ["--seed", "5", "--out", str(tmp_path / "b")]) == 0
    rep = json.loads((tmp_path / "b" / "report.json").read_text())
    assert rep["config"]["seed"] == 5 and rep["config"]["backend"] == "gaussian"
    assert (tmp_path / "a" / "transcript.jsonl").read_bytes() != (tmp_path / "b" / "transcript.jsonl").read_bytes()


@pytest.mark.parametrize("program,field", [
    ({"strategy": "brickwork", "bricks": [{"kind": "swap"}]}, "bricks[0].kind"),
    ({"strategy": "brickwork", "bricks": [{"kind": "sq", "v": [1, "x"]}]}, "bricks[0].v"),
    ({"strategy": "brickwork", "bricks": [{"index": 4, "kind": "sq"}]}, "bricks[0].index"),
    ({"strategy": "teleport"}, "strategy"),
    ({"strategy": "graph", "graph": {"nodes": [0, 1], "edges": [[0, 1, 1]]}, "phi": {"7": [1]}}, "phi.7"),
    ({"strategy": "hidden", "logical": {"nodes": [0, 2]}, "host": {"nodes": [0, 1], "edges": [[0, 1, 1]]}}, "host"),
])  # fmt: skip
def test_run_blind_malformed_program_names_field(tmp_path, capsys, program, field):
    path = tmp_path / "p.json"
    path.write_text(json.dumps(program))
    assert main(["run-blind", str(path), "--backend", "gaussian", "--out", str(tmp_path)]) == 2
    assert f"configuration error: {field}:" in capsys.readouterr().err


def test_run_blind_reports_json_line(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text('{\n  "strategy": "brickwork",\n  "bricks": [,]\n}')
    assert main(["run-blind", str(path), "--out", str(tmp_path)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_bad_config_value_and_file(tmp_path, capsys):
    assert main(["demo", "schedule", "--omega", "-1", "--out", str(tmp_path)]) == 2
    assert "omega" in capsys.readouterr().err
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"cutof": 40}))
    assert main(["demo", "schedule", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "cutof" in capsys.readouterr().err


@pytest.mark.parametrize("variant,artifact", [
    ("brickwork", "brickwork.json"), ("hide-graph", "hide_graph.json"), ("hair", "hair.json"), ("schedule", "schedule.json"),
])  # fmt: skip
def test_demos_pass_and_write_artifacts(tmp_path, variant, artifact):
    assert main(["demo", variant, "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / artifact).read_text())
    assert data


def test_schedule_demo_single_cz_in_flight(tmp_path):
    main(["demo", "schedule", "--out", str(tmp_path)])
    data = json.loads((tmp_path / "schedule.json").read_text())
    plan = data["plan"]
    assert data["audit"]["ok"] and data["audit"]["max_cz_per_step"] == 1
    assert all(isinstance(op, dict) and op["op"] in ("prepare", "cz", "measure") for op in plan)


def test_blindness_identical_programs(tmp_path):
    code = main(["blindness-test", "--phi-a", "1,0,0", "--phi-b", "1,0,0", "--L-list", "1,5",
                 "--n-samples", "500", "--out", str(tmp_path)])  # fmt: skip
    rep = json.loads((tmp_path / "blindness.json").read_text())
    assert all(r["trace_distance"] < 2e-2 for r in rep["rows"])
    # identical programs: TD is sampling noise only, so the strict decrease is not guaranteed; the exit
    # code follows the reported checks
    assert code == (0 if rep["trace_distance_decreasing"] and rep["ks_pass_at_largest_L"] else 1)


def test_blindness_shape_mismatch_and_bad_list(tmp_path, capsys):
    assert main(["blindness-test", "--phi-a", "1,0,0,0", "--out", str(tmp_path)]) == 2
    assert main(["blindness-test", "--L-list", "5,1", "--n-samples", "10", "--out", str(tmp_path)]) == 2
    assert "L_list" in capsys.readouterr().err


def test_blindness_distinct_programs_decreasing(tmp_path):
    main(["blindness-test", "--L-list", "1,5,25", "--n-samples", "400", "--n-ks", "200", "--out", str(tmp_path)])
    rep = json.loads((tmp_path / "blindness.json").read_text())
    assert rep["trace_distance_decreasing"]
