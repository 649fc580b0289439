"""Command line driver: outputs, exit codes, verdict files."""
import json

import pytest

from homgraph import cli


def run(capsys, *argv):
    rc = cli.main(list(argv))
    cap = capsys.readouterr()
    return rc, cap.out, cap.err


def test_analyze_text(capsys):
    rc, out, err = run(capsys, "analyze", "zmod:p=2,k=2,type=[2]")
    assert rc == 0
    assert "order:       4" in out
    assert "uniserial:   True" in out
    assert "complete:    True" in out
    assert "diameter:    1" in out


def test_analyze_json(capsys):
    rc, out, _ = run(capsys, "analyze", "field:p=2,dim=2", "--json")
    assert rc == 0
    doc = json.loads(out)
    assert len(doc["vertices"]) == 4
    assert doc["properties"]["complete"] is True


def test_graph_dot(capsys):
    rc, out, _ = run(capsys, "graph", "zmod:p=2,k=2,type=[2]", "--format", "dot")
    assert rc == 0
    assert out.startswith("graph G {")
    assert "0 -- 1;" in out


def test_graph_to_file(tmp_path, capsys):
    target = tmp_path / "g.json"
    rc, out, _ = run(capsys, "graph", "zmod:p=2,k=2,type=[2]",
                     "--format", "json", "--out", str(target))
    assert rc == 0
    doc = json.loads(target.read_text())
    assert doc["edges"] == [[0, 1]]


def test_spectrum_output(capsys):
    rc, out, _ = run(capsys, "spectrum", "zmod:p=2,k=2,type=[2,1]")
    assert rc == 0
    assert "lambda_max:  6.000000" in out
    assert "satisfied" in out


def test_homtest_agreement(capsys):
    rc, out, _ = run(capsys, "homtest", "kxy:p=2,preset=R/x",
                     "kxy:p=2,preset=R/y")
    assert rc == 0
    assert "solver invariant factors: (2,)" in out
    assert "agreement: ok" in out


def test_homtest_zero_hom(capsys):
    rc, out, _ = run(capsys, "homtest", "prod:p=2,mult=[1,0]",
                     "prod:p=2,mult=[0,1]")
    assert rc == 0
    assert "solver invariant factors: 0" in out


def test_homtest_ring_mismatch(capsys):
    rc, _, err = run(capsys, "homtest", "field:p=2,dim=1", "field:p=3,dim=1")
    assert rc == 1
    assert "error" in err


def test_usage_errors_exit_1(capsys):
    rc, _, err = run(capsys, "analyze", "zmod:p=2")
    assert rc == 1
    rc, _, err = run(capsys, "analyze", "nope:p=2")
    assert rc == 1
    rc, _, err = run(capsys, "verify", "--claims", "no-such-claim")
    assert rc == 1
    rc, _, err = run(capsys, "spectrum", "field:p=2,dim=2", "--tol", "-1")
    assert rc == 1


def test_cap_exit_2(capsys):
    rc, _, err = run(capsys, "analyze", "field:p=2,dim=13")
    assert rc == 2
    assert "cap exceeded" in err
    rc, _, err = run(capsys, "analyze", "zmod:p=2,k=2,type=[2,2]",
                     "--max-module-order", "8")
    assert rc == 2


def test_internal_inconsistency_exit_3(capsys, monkeypatch):
    from homgraph import homcore
    from homgraph.homcore import HomStructure

    monkeypatch.setattr(homcore, "hom_oracle",
                        lambda a, b, caps: HomStructure((4,)))
    rc, _, err = run(capsys, "homtest", "zmod:p=2,k=2,type=[1]",
                     "zmod:p=2,k=2,type=[2]")
    assert rc == 3
    assert "internal inconsistency" in err


def test_homtest_oracle_cap_skip(capsys):
    # source order 128 exceeds the oracle cap but not the module cap
    rc, out, _ = run(capsys, "homtest", "zmod:p=2,k=3,type=[3,3,1]",
                     "zmod:p=2,k=3,type=[3]")
    assert rc == 0
    assert "solver invariant factors:" in out
    assert "oracle skipped" in out


def test_verify_summary_and_files(tmp_path, capsys):
    outdir = tmp_path / "v"
    rc, out, _ = run(capsys, "verify", "--ring", "kxy", "--p", "2",
                     "--bound", "2", "--out", str(outdir))
    assert rc == 0
    assert "reconstruction-artinian-local" in out
    assert "refuted" in out
    data = json.loads((outdir / "verdicts.json").read_text())
    assert isinstance(data, list) and len(data) == 18
    csv_text = (outdir / "verdicts.csv").read_text()
    assert csv_text.startswith("claim_id,status,instances,witness_count\n")


def test_verify_reruns_byte_identical(tmp_path, capsys):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    for d in (d1, d2):
        rc, _, _ = run(capsys, "verify", "--ring", "zmod", "--p", "2",
                       "--kk", "2", "--bound", "3", "--out", str(d))
        assert rc == 0
    assert (d1 / "verdicts.json").read_bytes() == (d2 / "verdicts.json").read_bytes()
    assert (d1 / "verdicts.csv").read_bytes() == (d2 / "verdicts.csv").read_bytes()


def test_verify_claims_filter(capsys):
    rc, out, _ = run(capsys, "verify", "--ring", "field", "--p", "2",
                     "--bound", "2", "--claims", "chordal-perfect")
    assert rc == 0
    lines = [l for l in out.strip().split("\n") if l and not l.startswith(" ")]
    assert len(lines) == 1
    assert lines[0].startswith("chordal-perfect")


def test_verify_witness_flag(capsys):
    rc, out, _ = run(capsys, "verify", "--ring", "kxy", "--p", "2",
                     "--bound", "2", "--claims", "reconstruction-artinian-local",
                     "--witnesses")
    assert rc == 0
    assert "annihilator profiles differ" in out


def test_reconstruct_zmod_confirmed(capsys):
    rc, out, _ = run(capsys, "reconstruct", "--ring", "zmod", "--p", "2",
                     "--kk", "2", "--bound", "4")
    assert rc == 0
    assert "confirmed" in out


def test_reconstruct_kxy_refuted_with_witnesses(capsys):
    rc, out, _ = run(capsys, "reconstruct", "--ring", "kxy", "--p", "2",
                     "--bound", "2")
    assert rc == 0
    assert "refuted" in out
    assert "R/x" in out and "R/y" in out


def test_default_verify_covers_all_rings(capsys):
    rc, out, _ = run(capsys, "verify")
    assert rc == 0
    lines = [l for l in out.strip().split("\n") if l and not l.startswith(" ")]
    assert len(lines) == 18
