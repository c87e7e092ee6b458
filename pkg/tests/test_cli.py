import json
import shutil
from pathlib import Path

import pytest

from layerarch import __version__
from layerarch.cli import main
from layerarch.ingest import parse_json_graph
from layerarch.samples import sample_network2_document

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestAnalyze:
    def test_text_remark_column(self, capsys):
        code, out, _ = run(capsys, "analyze", "--graph", "sample")
        assert code == 1
        rows = [line.split() for line in out.splitlines()[3:18]]
        assert [r[-1] for r in rows] == ["Normal", "Back", "Normal", "Normal", "Skip", "Normal", "Skip", "Back"] + ["Normal"] * 7

    def test_json_system_block(self, capsys):
        code, out, _ = run(capsys, "analyze", "--graph", "sample", "--out", "json")
        assert code == 1
        system = json.loads(out)["system"]
        assert system["cv"] == 0.25
        assert [round(x, 3) for x in system["lsi"]] == [0.778, 0.857, 1.0]

    def test_missing_layers_file(self, capsys, tmp_path):
        missing = tmp_path / "nope.json"
        code, _, err = run(capsys, "analyze", "--graph", "sample", "--layers", str(missing))
        assert code == 2
        assert str(missing) in err

    def test_bottom_first_layers_file(self, capsys):
        csv = str(FIXTURES / "sample_network2.csv")
        _, embedded, _ = run(capsys, "analyze", "--graph", "sample", "--out", "json")
        code, out, _ = run(capsys, "analyze", "--graph", csv,
                           "--layers", str(FIXTURES / "sample_network2_layers_bottom_first.json"), "--out", "json")
        assert code == 1
        a, b = json.loads(embedded), json.loads(out)
        # the CSV declares nodes in first-mention order, so compare by name
        assert sorted(a["node_table"], key=lambda n: n["name"]) == sorted(b["node_table"], key=lambda n: n["name"])
        for key in ("asv", "bvs", "svs", "cv", "lsi"):
            assert a["system"][key] == b["system"][key]
        named = lambda r, comp: sorted(r["nodes"][i] for i in comp["nodes"])  # noqa: E731
        assert named(a, a["system"]["cv_components"][0]) == named(b, b["system"]["cv_components"][0])

    def test_csv_without_layers(self, capsys):
        code, _, err = run(capsys, "analyze", "--graph", str(FIXTURES / "sample_network2.csv"))
        assert code == 2 and "--layers" in err

    def test_penalty_override(self, capsys):
        code, out, _ = run(capsys, "analyze", "--graph", "sample", "--out", "json",
                           "--alpha", "1", "--beta", "1", "--alpha", "0", "--beta", "0")
        asv = json.loads(out)["system"]["asv"]
        assert [(a["alpha"], a["beta"], a["ratio"]["num"], a["ratio"]["den"]) for a in asv] == [(1, 1, 6, 17), (0, 0, 0, 17)]

    def test_unpaired_penalty(self, capsys):
        code, _, err = run(capsys, "analyze", "--graph", "sample", "--alpha", "1")
        assert code == 2 and "--beta" in err

    def test_invalid_penalty(self, capsys):
        code, _, _ = run(capsys, "analyze", "--graph", "sample", "--alpha", "2", "--beta", "0")
        assert code == 2

    def test_threshold_and_gate(self, capsys):
        assert run(capsys, "analyze", "--graph", "sample", "--tau-back", "0.2")[0] == 0
        assert run(capsys, "analyze", "--graph", "sample", "--tau-back", "0.2", "--fail-on", "open")[0] == 1
        assert run(capsys, "analyze", "--graph", "sample", "--fail-on", "never")[0] == 0

    def test_precision(self, capsys):
        _, out, _ = run(capsys, "analyze", "--graph", "sample", "--precision", "3")
        assert "2/9=0.222" in out

    def test_malformed_graph_line(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"nodes": [\n{"id": "a"},\n{"id": "a"}\n], "edges": []}')
        code, _, err = run(capsys, "analyze", "--graph", str(bad))
        assert code == 2 and f"{bad}:3" in err

    def test_dedupe(self, capsys, tmp_path):
        g = tmp_path / "g.csv"
        g.write_text("a,b\na,b\nb,a\n")
        layers = tmp_path / "l.json"
        layers.write_text('{"direction": "top-first", "layers": [["a"], ["b"]]}')
        _, out, _ = run(capsys, "analyze", "--graph", str(g), "--layers", str(layers), "--out", "json", "--dedupe")
        assert json.loads(out)["system"]["edges"] == 2

    def test_both_layer_sources(self, capsys):
        code, _, err = run(capsys, "analyze", "--graph", "sample", "--layers", "x.json", "--recover",
                           "--granularity", "1", "--layer-count", "1")
        assert code == 2


class TestExtract:
    def test_pipeline(self, capsys, tmp_path):
        out = tmp_path / "deps.json"
        code, _, err = run(capsys, "extract", str(FIXTURES / "java_project"), "-o", str(out))
        assert code == 0 and "5 edge(s)" in err and "5 external" in err
        layers = tmp_path / "layers.json"
        layers.write_text('{"direction": "top-first", "layers": [["app.ui"], ["app.service"], ["app.data"]]}')
        code, text, _ = run(capsys, "analyze", "--graph", str(out), "--layers", str(layers), "--out", "json")
        report = json.loads(text)
        assert code == 0 and report["style"] == "open"
        assert [e["class"] for e in report["edges"]] == ["Normal", "Normal", "Skip", "Normal", "Normal"]

    def test_recover_from_extracted(self, capsys, tmp_path):
        out = tmp_path / "deps.json"
        run(capsys, "extract", str(FIXTURES / "java_project"), "-o", str(out))
        code, text, _ = run(capsys, "analyze", "--graph", str(out), "--recover", "--granularity", "2",
                            "--layer-count", "3", "--out", "json")
        assert code == 0
        assert not json.loads(text)["system"]["bv"]

    def test_empty_dir(self, capsys, tmp_path):
        out = tmp_path / "empty.json"
        code, _, err = run(capsys, "extract", str(tmp_path), "-o", str(out))
        assert code == 0 and "warning" in err
        doc = parse_json_graph(out.read_text())
        assert doc.nodes == [] and doc.edges == []

    def test_skip_count(self, capsys, tmp_path):
        tree = tmp_path / "src"
        shutil.copytree(FIXTURES / "java_project", tree)
        (tree / "app" / "ui" / "Broken.java").write_bytes(b"\xff\xfe\x00")
        code, _, err = run(capsys, "extract", str(tree))
        assert code == 0 and "1 file(s) skipped" in err

    def test_not_a_directory(self, capsys, tmp_path):
        assert run(capsys, "extract", str(tmp_path / "missing"))[0] == 2


def prefixed_sample(tmp_path) -> Path:
    doc = sample_network2_document()
    layer = doc.layers.to_assignment().layer_of
    rename = {n: f"l{layer[n]}.n{n}" for n in doc.node_ids}
    graph = {
        "nodes": [{"id": rename[n]} for n in doc.node_ids],
        "edges": [{"src": rename[s], "dst": rename[d]} for s, d in doc.edges],
    }
    path = tmp_path / "prefixed.json"
    path.write_text(json.dumps(graph))
    return path


class TestRecover:
    def test_reproduces_sample_layers(self, capsys, tmp_path):
        code, out, _ = run(capsys, "recover", "--graph", str(prefixed_sample(tmp_path)),
                           "--granularity", "1", "--layer-count", "3")
        assert code == 0
        layers = json.loads(out)
        assert layers["direction"] == "top-first"
        members = [sorted(int(m.split(".n")[1]) for m in l["members"]) for l in layers["layers"]]
        assert members == [[1, 2, 3], [4, 5, 6], [7, 8, 9, 10]]

    def test_flat_names_single_cluster(self, capsys, tmp_path):
        graph = tmp_path / "flat.csv"
        graph.write_text("app.a,app.b\napp.b,app.c\n")
        code, out, _ = run(capsys, "recover", "--graph", str(graph), "--granularity", "1", "--layer-count", "1",
                           "-o", str(tmp_path / "l.json"))
        assert code == 0
        code, _, err = run(capsys, "recover", "--graph", str(graph), "--granularity", "1", "--layer-count", "2")
        assert code == 2 and "--layer-count 1" in err

    def test_too_many_layers(self, capsys, tmp_path):
        code, _, err = run(capsys, "recover", "--graph", str(prefixed_sample(tmp_path)),
                           "--granularity", "1", "--layer-count", "4")
        assert code == 2 and "--layer-count 3 or less" in err


class TestGen:
    def test_deterministic(self, capsys):
        args = ("gen", "--nodes", "3,4,3", "--p-back", "0.2", "--p-skip", "0.2", "--seed", "9")
        assert run(capsys, *args)[1] == run(capsys, *args)[1]

    def test_zero_violations_and_schema(self, capsys, tmp_path):
        out = tmp_path / "g.json"
        code, _, _ = run(capsys, "gen", "--nodes", "3,4,3", "--p-down", "0.6", "--p-intra", "0.2", "--seed", "1",
                         "-o", str(out))
        assert code == 0
        raw = json.loads(out.read_text())
        assert set(raw) == {"nodes", "edges", "layers"}
        assert all(set(n) <= {"id", "attrs"} for n in raw["nodes"])
        assert all(set(e) == {"src", "dst"} for e in raw["edges"])
        assert raw["layers"]["direction"] in ("top-first", "bottom-first")
        code, text, _ = run(capsys, "analyze", "--graph", str(out), "--out", "json")
        report = json.loads(text)
        assert code == 0 and report["system"]["bv"] == [] and report["system"]["sv"] == []
        assert report["style"] == "closed-conformant"

    def test_invalid_spec(self, capsys):
        assert run(capsys, "gen", "--nodes", "3,0")[0] == 2
        assert run(capsys, "gen", "--nodes", "3", "--p-back", "1.5")[0] == 2


def test_version(capsys):
    code, out, _ = run(capsys, "version")
    assert code == 0 and __version__ in out


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "layerarch", "version"], capture_output=True, text=True)
    assert proc.returncode == 0 and __version__ in proc.stdout
