from __future__ import annotations

import json
import re
import socket
import subprocess
import sys
import time

import httpx
import pytest

from citetree.cli import main
from citetree.store import snapshot_load, snapshot_save

from conftest import FIXTURES

QUARTET_AUTHORS = str(FIXTURES / "mutual_quartet" / "authors.jsonl")
QUARTET_PAIRS = str(FIXTURES / "mutual_quartet" / "author_pairs.tsv")
DEMO = FIXTURES / "demo"


def _ingest_quartet(out_path) -> int:
    return main(
        ["ingest", QUARTET_AUTHORS, "--author-pairs", QUARTET_PAIRS, "--out", str(out_path)]
    )


def test_ingest_quartet_fixture(tmp_path, capsys):
    out = tmp_path / "quartet.snap"
    assert _ingest_quartet(out) == 0
    printed = capsys.readouterr().out
    assert "authors=4" in printed
    assert "UniqueName=4" in printed
    snapshot = snapshot_load(out)
    assert snapshot.author_count == 4


def test_ingest_missing_file_names_path(tmp_path, capsys):
    code = main(
        [
            "ingest",
            str(DEMO / "authors.jsonl"),
            str(DEMO / "articles.jsonl"),
            str(tmp_path / "nowhere.txt"),
            "--out",
            str(tmp_path / "x.snap"),
        ]
    )
    assert code == 2
    assert "nowhere.txt" in capsys.readouterr().err


def test_ingest_requires_citation_source(tmp_path, capsys):
    code = main(["ingest", QUARTET_AUTHORS, "--out", str(tmp_path / "x.snap")])
    assert code == 2


def test_reingest_is_byte_identical(tmp_path):
    first, second = tmp_path / "one.snap", tmp_path / "two.snap"
    assert _ingest_quartet(first) == 0
    assert _ingest_quartet(second) == 0
    assert first.read_bytes() == second.read_bytes()


def test_report_matches_golden(tmp_path, capsys):
    snap = tmp_path / "quartet.snap"
    _ingest_quartet(snap)
    out = tmp_path / "report.tsv"
    code = main(
        [
            "report",
            "--snapshot",
            str(snap),
            "--threshold-lower",
            "0.5",
            "--threshold-upper",
            "0.8",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    golden = (FIXTURES / "golden" / "report_quartet.tsv").read_bytes()
    assert out.read_bytes() == golden
    printed = capsys.readouterr().out
    assert "lineage_dependent=3" in printed
    assert re.search(r"^N=4 elapsed_ms=\d+$", printed, re.MULTILINE)


def test_report_empty_corpus(tmp_path, capsys):
    authors = tmp_path / "authors.jsonl"
    authors.write_text("")
    pairs = tmp_path / "pairs.tsv"
    pairs.write_text("")
    snap = tmp_path / "empty.snap"
    assert main(["ingest", str(authors), "--author-pairs", str(pairs), "--out", str(snap)]) == 0
    assert main(["report", "--snapshot", str(snap)]) == 0
    printed = capsys.readouterr().out
    assert "lineage_dependent=0" in printed


def test_report_rejects_version_mismatch(tmp_path, capsys):
    snap = tmp_path / "future.snap"
    snap.write_text("citetree-snapshot 99\nmax_advisors 2\nauthors 0\narticles 0\ncitations 0\nend\n")
    assert main(["report", "--snapshot", str(snap)]) == 2
    assert "version" in capsys.readouterr().err


def test_report_validates_threshold_flags(tmp_path, capsys):
    snap = tmp_path / "quartet.snap"
    _ingest_quartet(snap)
    code = main(
        ["report", "--snapshot", str(snap), "--threshold-lower", "0.9",
         "--threshold-upper", "0.2"]
    )
    assert code == 2


def test_gen_synthetic_deterministic(tmp_path, capsys):
    first, second = tmp_path / "one", tmp_path / "two"
    for out in (first, second):
        assert main(
            ["gen-synthetic", "--authors", "50", "--cartels", "2", "--seed", "9",
             "--out", str(out)]
        ) == 0
    for name in ("authors.jsonl", "articles.jsonl", "citations.txt", "cartels.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_gen_synthetic_small_without_cartels(tmp_path, capsys):
    out = tmp_path / "tiny"
    assert main(["gen-synthetic", "--authors", "4", "--seed", "1", "--out", str(out)]) == 0
    lines = (out / "authors.jsonl").read_text().splitlines()
    assert len(lines) == 4
    assert json.loads((out / "cartels.json").read_text())["cartels"] == []


def test_gen_synthetic_rejects_bad_parameters(tmp_path, capsys):
    assert main(["gen-synthetic", "--authors", "0", "--out", str(tmp_path / "x")]) == 2
    assert main(
        ["gen-synthetic", "--authors", "3", "--cartels", "5", "--out", str(tmp_path / "y")]
    ) == 2


def test_export_roundtrip(tmp_path, capsys):
    snap = tmp_path / "demo.snap"
    assert main(
        ["ingest", str(DEMO / "authors.jsonl"), str(DEMO / "articles.jsonl"),
         str(DEMO / "citations.txt"), "--out", str(snap)]
    ) == 0
    out = tmp_path / "exported"
    assert main(["export", "--snapshot", str(snap), "--out", str(out)]) == 0
    snap2 = tmp_path / "demo2.snap"
    assert main(
        ["ingest", str(out / "authors.jsonl"), str(out / "articles.jsonl"),
         str(out / "citations.txt"), "--out", str(snap2)]
    ) == 0
    first = snapshot_load(snap)
    second = snapshot_load(snap2)
    assert first.parent_of == second.parent_of
    assert first.cited_by == second.cited_by


# ---------------------------------------------------------------------------
# serve
# ---------------------------------------------------------------------------


def _free_port() -> int:
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        return probe.getsockname()[1]


@pytest.fixture(scope="module")
def served_quartet(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("serve")
    snap = tmp / "quartet.snap"
    assert _ingest_quartet(snap) == 0
    port = _free_port()
    process = subprocess.Popen(
        [
            sys.executable, "-m", "citetree.cli", "serve",
            "--snapshot", str(snap),
            "--listen", f"127.0.0.1:{port}",
            "--threshold-lower", "0.5",
            "--threshold-upper", "0.8",
        ],
        stdout=subprocess.PIPE,
        stderr=subprocess.STDOUT,
    )
    base = f"http://127.0.0.1:{port}"
    try:
        deadline = time.time() + 15
        while True:
            try:
                httpx.get(base + "/authors/0", timeout=1)
                break
            except httpx.TransportError:
                if time.time() > deadline or process.poll() is not None:
                    raise RuntimeError("service did not come up")
                time.sleep(0.1)
        yield base
    finally:
        process.terminate()
        process.wait(timeout=10)


def test_serve_smoke(served_quartet):
    response = httpx.get(served_quartet + "/authors/0")
    assert response.status_code == 200
    assert response.json()["name"] == "A"


def test_serve_agrees_with_report(served_quartet):
    golden_rows = (FIXTURES / "golden" / "report_quartet.tsv").read_text().splitlines()[1:]
    for row in golden_rows:
        (author, _, total, genealogical, ngc, ratio, verdict, score, _) = row.split("\t")
        payload = httpx.get(f"{served_quartet}/authors/{author}/community").json()
        assert payload["total_citations"] == int(total)
        assert payload["genealogical_citations"] == int(genealogical)
        assert payload["non_genealogical"] == int(ngc)
        assert payload["verdict"] == verdict
        assert payload["lineage_score"] == float(score)
        if ratio == "":
            assert payload["ratio"] is None
        else:
            assert payload["ratio"] == float(ratio)


def test_serve_missing_snapshot(tmp_path, capsys):
    code = main(["serve", "--snapshot", str(tmp_path / "none.snap"), "--listen", "127.0.0.1:0"])
    assert code == 2


def test_serve_port_in_use(tmp_path, capsys):
    snap = tmp_path / "quartet.snap"
    _ingest_quartet(snap)
    holder = socket.socket()
    holder.bind(("127.0.0.1", 0))
    holder.listen(1)
    port = holder.getsockname()[1]
    try:
        code = main(["serve", "--snapshot", str(snap), "--listen", f"127.0.0.1:{port}"])
    finally:
        holder.close()
    assert code == 1


def test_serve_rejects_bad_listen(tmp_path, capsys):
    snap = tmp_path / "quartet.snap"
    _ingest_quartet(snap)
    assert main(["serve", "--snapshot", str(snap), "--listen", "nonsense"]) == 2
