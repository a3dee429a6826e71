import io
import json

import pytest

from tedst.cli import DATA_ERROR, USAGE_ERROR, main
from tedst.io import write_pairs
from tedst.samples import MODIFIER_HYPOTHESIS, MODIFIER_PREMISE, WORKED_T1, WORKED_T2
from tedst.synthetic import make_corpus


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def worked(tmp_path):
    a, b = tmp_path / "t1.txt", tmp_path / "t2.txt"
    a.write_text(WORKED_T1 + "\n")
    b.write_text(WORKED_T2 + "\n")
    return str(a), str(b)


@pytest.fixture
def pairs(tmp_path):
    text = (f"# id=fwd gold=yes\n{MODIFIER_PREMISE}\n{MODIFIER_HYPOTHESIS}\n"
            f"# id=bwd gold=no\n{MODIFIER_HYPOTHESIS}\n{MODIFIER_PREMISE}")
    path = tmp_path / "pairs.conll"
    path.write_text(text)
    stop = tmp_path / "stop.txt"
    stop.write_text("the\n")
    return str(path), str(stop)


def test_distance(worked):
    code, out, _ = run("distance", "--t1", worked[0], "--t2", worked[1])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "cost\t6"
    assert lines[1] == "ops\tdddmmiiimm"
    assert lines[2].split() == ["S1:", "e", "f", "b", "g", "c", "_", "_", "_", "d", "a"]


def test_distance_grouped(worked):
    code, out, _ = run("distance", "--t1", worked[0], "--t2", worked[1], "--grouped",
                       "--costs", "illustration")
    assert code == 0
    assert "cost\t3" in out.splitlines()
    assert "marker\t++d+m++imm" in out.splitlines()
    assert "delete subtree" in out


def test_oracle(worked):
    code, out, _ = run("oracle", "--t1", worked[0], "--t2", worked[1])
    assert (code, out) == (0, "cost\t6\n")
    code, _, err = run("oracle", "--t1", worked[0], "--t2", worked[1], "--bound", "4")
    assert code == USAGE_ERROR and "bound" in err


def test_entail_tsv(pairs):
    code, out, _ = run("entail", "--pairs", pairs[0], "--stopwords", pairs[1],
                       "--method", "ted_st", "--low", "1")
    assert code == 0
    head, body = out.split("\n\n", 1)
    rows = [line.split("\t") for line in head.splitlines()]
    assert rows[0] == ["id", "method", "score", "decision", "gold", "marker"]
    assert rows[1][:5] == ["fwd", "ted_st", "0", "yes", "yes"]
    assert rows[2][:5] == ["bwd", "ted_st", "410", "no", "no"]
    assert all(line.startswith("# ") for line in body.splitlines())
    assert "accuracy" in body


def test_entail_json(pairs):
    code, out, _ = run("entail", "--pairs", pairs[0], "--stopwords", pairs[1],
                       "--method", "zs_ted", "--low", "20", "--output", "json")
    assert code == 0
    doc = json.loads(out)
    assert [r["score"] for r in doc["results"]] == [19, 205]
    assert doc["metrics"]["accuracy"] == 1.0


def test_entail_three_way(pairs):
    code, out, _ = run("entail", "--pairs", pairs[0], "--stopwords", pairs[1],
                       "--method", "zs_ted", "--low", "10", "--high", "300")
    assert code == 0
    rows = [line.split("\t") for line in out.split("\n\n")[0].splitlines()[1:]]
    assert [r[3] for r in rows] == ["unknown", "unknown"]


def test_tune(tmp_path):
    records, lexicon = make_corpus(20, seed=3)
    path = tmp_path / "dev.conll"
    path.write_text(write_pairs(records))
    code, out, _ = run("tune", "--pairs", str(path), "--method", "bow")
    assert code == 0
    fields = dict(line.split("\t") for line in out.splitlines())
    assert fields["polarity"] == "similarity"
    float(fields["low"])


def test_usage_errors(worked):
    assert run()[0] == USAGE_ERROR
    assert run("distance", "--t1", worked[0])[0] == USAGE_ERROR
    assert run("entail", "--pairs", "x", "--method", "magic", "--low", "1")[0] == USAGE_ERROR


def test_data_errors(tmp_path, worked):
    bad = tmp_path / "bad.txt"
    bad.write_text("a(b\n")
    code, _, err = run("distance", "--t1", str(bad), "--t2", worked[1])
    assert code == DATA_ERROR and "offset" in err
    assert run("distance", "--t1", str(tmp_path / "missing"), "--t2", worked[1])[0] == DATA_ERROR
    pairs = tmp_path / "p.conll"
    pairs.write_text("# id=1 gold=yes\n1\ta\ta\tX\tX\t_\t0\troot\n")
    assert run("entail", "--pairs", str(pairs), "--low", "1")[0] == DATA_ERROR


def test_output_is_deterministic(pairs, worked):
    args = ("entail", "--pairs", pairs[0], "--stopwords", pairs[1], "--method", "ted_st", "--low", "1")
    assert run(*args) == run(*args)
    args = ("distance", "--t1", worked[0], "--t2", worked[1], "--grouped")
    assert run(*args) == run(*args)
