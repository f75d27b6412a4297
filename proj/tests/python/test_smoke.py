import math
import os
import subprocess
from pathlib import Path

import pytest

import tempo_score as ts

DEMO = Path(__file__).resolve().parents[2] / "data" / "demo"


def constant(p, n, cls="car", id="t"):
    return ts.ScoreTrace(id, {cls: [p] * n})


def test_always_car_example():
    six, seven = constant(0.9, 6), constant(0.9, 7)
    assert ts.logstop(six, "G car") == pytest.approx(6 * math.log(0.9), abs=1e-12)
    fixed = ts.match(seven, "G car", window="1", threshold="fixed")
    assert not fixed["matched"]
    adaptive = ts.match(seven, "G car", window="1")
    assert adaptive["matched"]
    assert adaptive["threshold"] == pytest.approx(7 * math.log(0.5))


def test_formula_round_trip():
    f = ts.Formula("(a & b) U F c")
    assert str(f) == "((a & b) U (F c))"
    assert f.atoms == ["a", "b", "c"]
    assert ts.parse_formula(str(f)) == f
    assert len(ts.templates()) == 15


def test_smoothing_and_robustness():
    tr = ts.ScoreTrace("x", {"car": [0.9, 0.1, 0.9, 0.9, 0.9, 0.9]})
    assert ts.logstop(tr, "car", window=3) == pytest.approx(math.log(19 / 30), abs=1e-12)
    a = ts.stl_robustness(ts.ScoreTrace("a", {"car": [0.9, 0.9, 0.1]}), "G car")
    b = ts.stl_robustness(ts.ScoreTrace("b", {"car": [0.1, 0.1, 0.1]}), "G car")
    assert a == b
    starts = ts.logstop_all_starts(constant(0.9, 4), "G car")
    assert [t for t, _ in starts] == [1, 2, 3, 4]


def test_oracle_and_metrics():
    lt = ts.LabelTrace("l", {"p": [1, 1, 0, 1]})
    assert not ts.eval_boolean(lt, "G p", 1, 3)
    assert ts.eval_boolean(lt, "F p", 2, 4)
    m = ts.rank_metrics(["a", "b", "c", "d"], {"a", "c"})
    assert m["AP"] == 5 / 6
    assert m["R@r"] == 0.5


def test_retrieve_demo_corpus():
    db = ts.load_score_db(str(DEMO / "scores"))
    ranked = ts.retrieve(db, "car U person", tlo=10, thi=30, k=3)
    assert len(ranked) == 3
    assert ranked[0]["score"] >= ranked[1]["score"] >= ranked[2]["score"]
    lo, hi = ranked[0]["span"]
    assert 10 <= hi - lo + 1 <= 30


def test_errors():
    with pytest.raises(ts.ParseError):
        ts.Formula("G (")
    with pytest.raises(ts.ContractError):
        ts.logstop(constant(0.5, 3), "car", end=9)
    with pytest.raises(ts.DataError):
        ts.ScoreTrace("bad", {"car": [1.5]})
    with pytest.raises(ValueError):
        ts.match(constant(0.5, 3), "car", semantics="ltl")


def test_cli_entry_points():
    code, out, _ = ts.run_cli(["--version"])
    assert code == 0 and ts.__version__ in out
    binary = os.environ.get("TEMPO_SCORE_BIN")
    if binary:
        result = subprocess.run([binary, "oracle", "--labels", str(DEMO / "labels" / "clip00.csv"), "--query", "F car"],
                                capture_output=True, text=True)
        assert result.returncode == 0
        assert '"value":true' in result.stdout
