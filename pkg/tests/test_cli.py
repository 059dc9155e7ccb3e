import json
import subprocess
import sys

import pytest

from qhdecomp import reports
from qhdecomp.cli import main
from qhdecomp.families import FamilySpec, generate
from qhdecomp.graph import from_edge_list, to_edge_list


def run_cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "qhdecomp.cli", *args],
        cwd=cwd,
        capture_output=True,
        text=True,
    )


@pytest.fixture
def workdir(tmp_path):
    return tmp_path


def test_generate_round_trip(workdir):
    out = workdir / "g.el"
    assert main(["generate", "--kind", "grid_torus", "--params", "5,5", "--out", str(out)]) == 0
    g = from_edge_list(out.read_text())
    assert g.n == 25 and g.edge_count() == 50
    # parse(serialize(G)) = G bit-exactly
    assert to_edge_list(g) == out.read_text()


def test_generated_families_round_trip_bit_exact(workdir):
    specs = [
        FamilySpec("cycle", (13,)),
        FamilySpec("path", (9,)),
        FamilySpec("random_regular", (20, 3), seed=5),
        FamilySpec("d_ary_tree", (2, 3)),
    ]
    for spec in specs:
        g = generate(spec)
        text = to_edge_list(g)
        assert to_edge_list(from_edge_list(text)) == text


def test_stats_distance_pipeline(workdir):
    c = workdir / "c.el"
    t = workdir / "t.el"
    main(["generate", "--kind", "cycle", "--params", "16", "--out", str(c)])
    main(["generate", "--kind", "grid_torus", "--params", "6,6", "--out", str(t)])
    sc, st_ = workdir / "c.json", workdir / "t.json"
    assert main(["stats", "--input", str(c), "--radius", "2", "--out", str(sc)]) == 0
    assert main(["stats", "--input", str(t), "--radius", "2", "--out", str(st_)]) == 0
    for path in (sc, st_):
        doc = json.loads(path.read_text())
        reports.validate_document(doc)
        vec = reports.stat_vector_from_json(doc)
        assert sum(vec.at(1).values()) == 1
    d = workdir / "d.json"
    assert main(["distance", "--a", str(sc), "--b", str(st_), "--out", str(d)]) == 0
    doc = reports.validate_document(json.loads(d.read_text()))
    assert doc["value"]["den"] > 0


def test_atlas_dump(workdir):
    g = workdir / "g.el"
    main(["generate", "--kind", "cycle", "--params", "10", "--out", str(g)])
    s, atlas = workdir / "s.json", workdir / "a.json"
    assert main(["stats", "--input", str(g), "--radius", "1", "--out", str(s),
                 "--dump-atlas", str(atlas)]) == 0
    doc = reports.validate_document(json.loads(atlas.read_text()))
    assert len(doc["entries"]) == 1 and doc["entries"][0]["count"] == 10
    assert doc["entries"][0]["vertices"] == 3


def test_editdist_and_density(workdir):
    a, b, p3 = workdir / "a.el", workdir / "b.el", workdir / "p.el"
    main(["generate", "--kind", "cycle", "--params", "4", "--out", str(a)])
    (workdir / "b.el").write_text("4 2\n0 1\n1 2\n2 3\n")
    main(["generate", "--kind", "path", "--params", "3", "--out", str(p3)])
    out = workdir / "e.json"
    assert main(["editdist", "--a", str(a), "--b", str(b), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert (doc["value"]["num"], doc["value"]["den"]) == (1, 4)
    dens = workdir / "dens.json"
    assert main(["sparse-density", "--pattern", str(p3), "--input", str(a),
                 "--out", str(dens)]) == 0
    doc = json.loads(dens.read_text())
    assert (doc["value"]["num"], doc["value"]["den"]) == (1, 1)


def test_color_edges_formats(workdir):
    g = workdir / "g.el"
    main(["generate", "--kind", "grid_torus", "--params", "4,4", "--out", str(g)])
    cj, cel = workdir / "c.json", workdir / "c.el"
    assert main(["color-edges", "--input", str(g), "--out", str(cj),
                 "--out-el", str(cel)]) == 0
    doc = reports.validate_document(json.loads(cj.read_text()))
    assert doc["vertex_palette"] == 17
    lines = cel.read_text().splitlines()
    assert lines[0] == "16 4"
    assert all(len(line.split()) == 3 for line in lines[1:])
    # colored stats accept the JSON colors
    s = workdir / "s.json"
    assert main(["stats", "--input", str(g), "--radius", "1", "--colors", str(cj),
                 "--out", str(s)]) == 0


def test_check_quasihom_verdict_json(workdir):
    g = workdir / "g.el"
    main(["generate", "--kind", "cycle", "--params", "12", "--out", str(g)])
    v = workdir / "v.json"
    assert main(["check-quasihom", "--input", str(g), "--epsilon", "1/12",
                 "--lambda", "1/2", "--delta", "1/2", "--radius", "1",
                 "--exact", "--out", str(v)]) == 0
    doc = reports.validate_document(json.loads(v.read_text()))
    assert doc["status"] == "holds_exact"


def test_decompose_verify_pipeline(workdir):
    spec = workdir / "spec.json"
    spec.write_text(json.dumps({
        "kind": "bridged_union",
        "parts": [
            {"kind": "grid_torus", "params": [6, 6]},
            {"kind": "random_regular", "params": [36, 3], "seed": 3},
        ],
        "bridges": 2,
        "seed": 3,
    }))
    g = workdir / "g.el"
    assert main(["generate", "--spec", str(spec), "--out", str(g)]) == 0
    part = workdir / "p.json"
    assert main(["decompose", "--input", str(g), "--delta", "0.1", "--lambda", "0.3",
                 "--kmax", "2", "--signature-radius", "1", "--seed", "0",
                 "--out", str(part)]) == 0
    pdoc = reports.validate_document(json.loads(part.read_text()))
    assert pdoc["K"] == 2 and len(pdoc["deleted_edges"]) == 2
    v = workdir / "v.json"
    assert main(["verify-partition", "--input", str(g), "--partition", str(part),
                 "--delta", "0.1", "--lambda", "0.3", "--epsilon", "0.05",
                 "--radius", "2", "--mode", "heuristic", "--budget", "800",
                 "--out", str(v)]) == 0
    vdoc = reports.validate_document(json.loads(v.read_text()))
    assert vdoc["passed"] is True
    # split diagnostics on the same pair
    rep = workdir / "split.json"
    assert main(["split-diagnostics", "--inputs", str(g), "--partitions", str(part),
                 "--radius", "2", "--out", str(rep)]) == 0
    sdoc = reports.validate_document(json.loads(rep.read_text()))
    assert sdoc["items"][0]["mixture_exact"] is True


def test_convergence_report(workdir):
    specs = workdir / "specs.json"
    specs.write_text(json.dumps({
        "format_version": 1,
        "kind": "family_specs",
        "specs": [{"kind": "grid_torus", "params": [L, L]} for L in (6, 8, 10)],
    }))
    out = workdir / "conv.json"
    assert main(["convergence", "--specs", str(specs), "--radius", "2",
                 "--out", str(out)]) == 0
    doc = reports.validate_document(json.loads(out.read_text()))
    assert all(p["value"]["num"] == 0 for p in doc["pairwise"])


def test_manifest_written_and_replays(workdir):
    g = workdir / "g.el"
    args = ["generate", "--kind", "random_regular", "--params", "18,3",
            "--seed", "7", "--out", str(g)]
    assert main(args) == 0
    manifest = json.loads((workdir / "g.el.manifest.json").read_text())
    reports.validate_document(manifest)
    assert manifest["subcommand"] == "generate"
    first = g.read_text()
    # replay the recorded argv: outputs must be byte-identical
    assert main(manifest["argv"]) == 0
    assert g.read_text() == first


def test_exit_codes(workdir):
    g1, g2 = workdir / "a.el", workdir / "b.el"
    main(["generate", "--kind", "cycle", "--params", "4", "--out", str(g1)])
    main(["generate", "--kind", "cycle", "--params", "6", "--out", str(g2)])
    # domain error: mismatched vertex sets
    assert main(["editdist", "--a", str(g1), "--b", str(g2)]) == 1
    # usage error: unknown subcommand (argparse exits 2)
    proc = run_cli(["definitely-not-a-command"], cwd=workdir)
    assert proc.returncode == 2


def test_threads_env_override(workdir, monkeypatch):
    monkeypatch.setenv("QUASIHOM_THREADS", "2")
    from qhdecomp.cli import _default_threads

    assert _default_threads() == 2
