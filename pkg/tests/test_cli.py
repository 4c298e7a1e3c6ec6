"""End-to-end CLI runs: determinism, artifacts, structured errors."""

import json
import math

import pytest

from singlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def write_config(tmp_path, doc, name="job.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def enneper_config(out_dir, **extra):
    doc = {
        "kind": "maxface",
        "expressions": {"g": "z", "omega": "1"},
        "domain": [-2.0, 2.0, -2.0, 2.0],
        "grid": [32, 32],
        "output_dir": str(out_dir),
    }
    doc.update(extra)
    return doc


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def test_classify_maxface_census_and_artifacts(tmp_path, capsys):
    cfg = write_config(tmp_path, enneper_config(tmp_path / "out"))
    code, out = run(capsys, "classify", "--config", cfg)
    assert code == 0
    summary = json.loads(out)
    assert summary["tags"]["Swallowtail"] == 4
    assert summary["tags"]["CuspidalCrossCap"] == 4
    assert summary["tags"].get("DegeneratePoint", 0) == 0
    assert summary["curves"][0]["closed"]
    # Polygonal length close to the unit circle circumference (the
    # inscribed 13-gon undershoots by about 1 percent).
    assert summary["curves"][0]["length"] == pytest.approx(2 * math.pi, rel=0.02)
    for name in ("classification.csv", "curve.csv", "summary.json"):
        assert (tmp_path / "out" / name).exists()
    header = (tmp_path / "out" / "classification.csv").read_text().splitlines()[0]
    assert header == "index,re_z,im_z,tag,re_alpha,im_alpha,second_test"


def test_classify_outputs_are_byte_identical(tmp_path, capsys):
    outputs = []
    for sub in ("a", "b"):
        cfg = write_config(tmp_path, enneper_config(tmp_path / sub),
                           name=f"{sub}.json")
        code, _ = run(capsys, "classify", "--config", cfg)
        assert code == 0
        outputs.append({name: (tmp_path / sub / name).read_bytes()
                        for name in ("classification.csv", "curve.csv",
                                     "summary.json")})
    assert outputs[0] == outputs[1]


def test_classify_cmc1_appends_det_drift(tmp_path, capsys):
    doc = enneper_config(tmp_path / "out", kind="cmc1")
    code, out = run(capsys, "classify", "--config", write_config(tmp_path, doc))
    assert code == 0
    lines = (tmp_path / "out" / "classification.csv").read_text().splitlines()
    assert lines[0].endswith(",det_drift")
    assert json.loads(out)["tags"]["Swallowtail"] == 4


def test_classify_frontal_preset(tmp_path, capsys):
    doc = {"kind": "frontal",
           "expressions": {"preset": "cuspidal-cross-cap"},
           "seeds": [[0.0, 0.0], [0.3, 0.0]],
           "output_dir": str(tmp_path / "out")}
    code, out = run(capsys, "classify", "--config", write_config(tmp_path, doc))
    assert code == 0
    summary = json.loads(out)
    assert summary["tags"] == {"CuspidalCrossCap": 1, "CuspidalEdge": 1}
    ccr = summary["reports"][0]
    assert ccr["location"] == pytest.approx([0.0, 0.0], abs=1e-9)
    assert ccr["psi1"] == pytest.approx(-1.5, abs=1e-3)
    header = (tmp_path / "out" / "classification.csv").read_text().splitlines()[0]
    assert header.endswith(",psi0,psi1")


# ---------------------------------------------------------------------------
# mesh / singular-curve
# ---------------------------------------------------------------------------

def test_mesh_maxface(tmp_path, capsys):
    doc = enneper_config(tmp_path / "out", grid=[2, 2])
    code, out = run(capsys, "mesh", "--config", write_config(tmp_path, doc))
    assert code == 0
    summary = json.loads(out)
    assert summary["vertices"] == 9 and summary["faces"] == 8
    text = (tmp_path / "out" / "mesh.obj").read_text().splitlines()
    assert sum(1 for ln in text if ln.startswith("v ")) == 9
    assert sum(1 for ln in text if ln.startswith("f ")) == 8


def test_mesh_cmc1_writes_x0_sidecar(tmp_path, capsys):
    doc = {"kind": "cmc1", "expressions": {"g": "z", "omega": "1"},
           "domain": [-0.5, 0.5, -0.5, 0.5], "grid": [2, 2],
           "output_dir": str(tmp_path / "out")}
    code, out = run(capsys, "mesh", "--config", write_config(tmp_path, doc))
    assert code == 0
    sidecar = tmp_path / "out" / "mesh.obj.x0.csv"
    lines = sidecar.read_text().splitlines()
    assert lines[0] == "vertex,x0"
    assert len(lines) == 10                       # header + 9 vertices


def test_singular_curve_command(tmp_path, capsys):
    cfg = write_config(tmp_path, enneper_config(tmp_path / "out"))
    code, out = run(capsys, "singular-curve", "--config", cfg)
    assert code == 0
    lines = (tmp_path / "out" / "curve.csv").read_text().splitlines()
    assert lines[0].startswith("curve,node,re_z,im_z")
    assert len(lines) > 10


# ---------------------------------------------------------------------------
# duality-check / genericity-probe / jet-check
# ---------------------------------------------------------------------------

def test_duality_check_enneper_has_no_violations(tmp_path, capsys):
    cfg = write_config(tmp_path, enneper_config(tmp_path / "out"))
    code, out = run(capsys, "duality-check", "--config", cfg)
    assert code == 0
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["violations"] == 0
    assert report["points"] > 0


def test_duality_check_empty_locus_is_ok(tmp_path, capsys):
    doc = enneper_config(tmp_path / "out")
    doc["expressions"] = {"g": "2", "omega": "1"}
    code, out = run(capsys, "duality-check", "--config",
                    write_config(tmp_path, doc))
    assert code == 0
    assert json.loads(out)["points"] == 0


def test_genericity_probe(tmp_path, capsys):
    doc = {"kind": "genericity", "expressions": {"h": "z"},
           "domain": [-0.5, 0.5, -0.5, 0.5], "seed": 3,
           "probe": {"magnitude": 1e-3, "trials": 2},
           "output_dir": str(tmp_path / "out")}
    code, out = run(capsys, "genericity-probe", "--config",
                    write_config(tmp_path, doc))
    assert code == 0
    assert json.loads(out)["generic_fraction"] == 1.0
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["seed"] == 3 and len(report["per_trial"]) == 2


def test_jet_check(tmp_path, capsys):
    doc = {"kind": "genericity", "expressions": {"h": "z"},
           "jet": {"p": [0, 0], "h": [0, 0], "h1": [1, 0], "h2": [2, 0]},
           "probe": {"random_jets": 10},
           "output_dir": str(tmp_path / "out")}
    code, out = run(capsys, "jet-check", "--config", write_config(tmp_path, doc))
    assert code == 0
    summary = json.loads(out)
    assert summary["jet"]["tag"] == "Swallowtail"
    assert summary["jet"]["jacobians"]["closed_form_B"] == pytest.approx(2.0)
    assert summary["random_jets"]["max_rel_error"] < 1e-6


def test_presets_command(capsys):
    code, out = run(capsys, "presets")
    assert code == 0
    names = json.loads(out)["presets"]
    assert names == ["cuspidal-cross-cap", "cuspidal-edge", "plane",
                     "swallowtail", "tangent-developable"]


# ---------------------------------------------------------------------------
# Overrides and error reporting
# ---------------------------------------------------------------------------

def test_overrides_rename_output_and_patch_tolerances(tmp_path, capsys):
    cfg = write_config(tmp_path, enneper_config(tmp_path / "out"))
    code, _ = run(capsys, "classify", "--config", cfg,
                  "output.summary-json=custom.json",
                  "tolerances.eps-zero=1e-6")
    assert code == 0
    assert (tmp_path / "out" / "custom.json").exists()


def test_output_dir_flag(tmp_path, capsys):
    doc = enneper_config(tmp_path / "ignored", grid=[2, 2])
    cfg = write_config(tmp_path, doc)
    code, _ = run(capsys, "mesh", "--config", cfg,
                  "--output-dir", str(tmp_path / "flagged"))
    assert code == 0
    assert (tmp_path / "flagged" / "mesh.obj").exists()


def test_parse_error_is_structured_json_exit_2(tmp_path, capsys):
    doc = enneper_config(tmp_path / "out")
    doc["expressions"] = {"g": "z ^^ 2", "omega": "1"}
    code, out = run(capsys, "classify", "--config", write_config(tmp_path, doc))
    assert code == 2
    err = json.loads(out)["error"]
    assert err["type"] == "ExprSyntaxError"
    assert err["offset"] == 3
    assert "Traceback" not in out


def test_config_error_exit_2(tmp_path, capsys):
    doc = enneper_config(tmp_path / "out")
    doc["bogus"] = 1
    code, out = run(capsys, "classify", "--config", write_config(tmp_path, doc))
    assert code == 2
    assert json.loads(out)["error"]["type"] == "ConfigError"


def test_missing_config_file_exit_2(tmp_path, capsys):
    code, out = run(capsys, "classify", "--config", str(tmp_path / "nope.json"))
    assert code == 2
    assert json.loads(out)["error"]["type"] == "ConfigError"


def test_runtime_error_exit_1(tmp_path, capsys):
    doc = {"kind": "frontal", "expressions": {"preset": "does-not-exist"},
           "output_dir": str(tmp_path / "out")}
    code, out = run(capsys, "classify", "--config", write_config(tmp_path, doc))
    assert code == 1
    assert json.loads(out)["error"]["type"] == "KeyError"
