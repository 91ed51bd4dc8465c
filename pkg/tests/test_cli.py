import csv
import io
import json

import pytest

from prodinf.cli import main
from prodinf.spec_io import uniform_spec


def write(tmp_path, doc, name="spec.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


@pytest.fixture
def tribes(tmp_path):
    return write(tmp_path, uniform_spec(2, 4, {"family": {"name": "tribes", "params": {"w": 2, "s": 2}}}))


@pytest.fixture
def majority(tmp_path):
    return write(tmp_path, uniform_spec(2, 3, {"family": {"name": "majority"}}), "maj.json")


@pytest.fixture
def zero_line(tmp_path):
    return write(tmp_path, {"ground": ["1/2", "1/2", "0"], "n": 1, "event": {"tuples": [[0], [1]]}}, "z.json")


def test_bound_tribes(capsys, tribes):
    code, out = run(capsys, "bound", tribes)
    doc = json.loads(out)
    assert code == 0
    assert (doc["p"], doc["m"], doc["total"]) == ("7/16", "3/8", "3/2")
    assert doc["total_ratio"] == pytest.approx(21.187, abs=1e-3)
    assert doc["total_ratio_status"] == "ok"


def test_influence_json_and_csv_agree(capsys, tribes):
    code, out = run(capsys, "influence", tribes, "--h", "quad")
    assert code == 0
    doc = json.loads(out)
    code, out = run(capsys, "influence", tribes, "--h", "quad", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    exact = {(r["section"], r["coord"], r["name"]): r["exact"] for r in rows}
    assert exact[("measure", "", "p")] == doc["p"]["exact"] == "7/16"
    for row in doc["influences"]:
        assert exact[("influence", str(row["coord"]), "indicator")] == row["exact"] == "3/8"
    for name, hrows in doc["h_influences"].items():
        for row in hrows:
            assert exact[("h_influence", str(row["coord"]), name)] == row["exact"]
    assert doc["h_influences"]["quad"][0]["exact"] == "3/32"


def test_influence_with_mc(capsys, majority):
    code, out = run(capsys, "influence", majority, "--mc", "4000", "--seed", "5")
    doc = json.loads(out)
    assert code == 0
    for row in doc["monte_carlo"]:
        assert abs(row["estimate"] - 0.5) <= 4 * row["stderr"]


def test_influence_large_space_requires_mc(capsys, tmp_path):
    path = write(tmp_path, uniform_spec(2, 26, {"family": {"name": "parity"}}))
    code, out = run(capsys, "influence", path)
    assert code == 2 and json.loads(out)["error"]["code"] == "too-large"
    code, out = run(capsys, "influence", path, "--mc", "500")
    doc = json.loads(out)
    assert code == 0 and "p" not in doc
    assert all(r["estimate"] == 1.0 for r in doc["monte_carlo"])


def test_compare_definitions_zero_weight(capsys, zero_line):
    code, out = run(capsys, "compare-definitions", zero_line)
    doc = json.loads(out)
    assert code == 0
    assert doc["coordinates"][0] == {
        "coord": 0,
        "influence": "0/1",
        "bkkkl_influence": "1/1",
        "inequality_holds": True,
        "strict": True,
    }


def test_transport_verify(capsys, majority, tmp_path):
    boxes = tmp_path / "boxes.json"
    code, out = run(capsys, "transport", majority, "--verify", "--h", "quad", "--emit-boxes", str(boxes))
    doc = json.loads(out)
    assert code == 0 and doc["verification"]["ok"]
    assert json.loads(boxes.read_text()) == doc["boxes"]
    assert doc["transport"][1]["interval"] == ["0/1", "1/2"]


def test_input_errors_exit_2(capsys, tmp_path):
    bad = write(tmp_path, uniform_spec(2, 2, {"bits": "011"}))
    code, out = run(capsys, "bound", bad)
    assert code == 2 and json.loads(out)["error"]["code"] == "bad-length"
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    code, out = run(capsys, "bound", str(junk))
    assert code == 2 and json.loads(out)["error"]["code"] == "malformed-json"
    code, out = run(capsys, "influence", bad.replace("spec", "missing"))
    assert code == 2 and json.loads(out)["error"]["code"] == "unreadable"


def test_corpus_is_reproducible(capsys):
    argv = ["corpus", "--random-events", "30", "--seed", "9", "--max-n", "3", "--max-k", "3", "--run-all"]
    code, out1 = run(capsys, *argv)
    assert code == 0
    code, out2 = run(capsys, *argv, "--jobs", "2")
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["failures"] == [] and doc["strict_bkkkl_gaps"] >= 1


def test_corpus_listing_and_bad_family(capsys):
    code, out = run(capsys, "corpus", "--families", "parity", "--random-events", "2")
    assert code == 0 and len(json.loads(out)["items"]) == 4 + 1 + 2
    code, out = run(capsys, "corpus", "--families", "bogus")
    assert code == 2


def test_help_documents_rank_order(capsys):
    with pytest.raises(SystemExit):
        main(["influence", "--help"])
    assert "coordinate 0 most significant" in capsys.readouterr().out
