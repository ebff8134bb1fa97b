import json
import shutil
from fractions import Fraction as F

import pytest

from toricglue import cli
from toricglue.report import (
    FULL,
    NOT_APPLICABLE,
    NOT_BALANCED,
    PARTIAL,
    FeasibilityReport,
    ReportOptions,
    batch,
    run_fan,
    run_report,
)
from toricglue.toric import parse_fan


def test_example_fans_are_partial(fans_dir):
    r1 = run_report(fans_dir / "X1.json")
    assert r1.verdict == PARTIAL and r1.balancing["labels"] == ["C1", "C4", "C5", "C7", "C11", "C12"]
    r4 = run_report(fans_dir / "X4.json")
    assert r4.verdict == PARTIAL and r4.balancing["witness"]["b"] == ["1"] * 4


def test_smooth_fan_not_applicable(fans_dir):
    assert run_report(fans_dir / "P2.json").verdict == NOT_APPLICABLE


def fan(rays, cones):
    return parse_fan(json.dumps({"name": "t", "dim": len(rays[0]), "rays": rays, "max_cones": cones}))


def test_full_and_not_balanced_verdicts():
    # P^2 / Z_3: three A_2-type points, all SU, vertices summing to zero
    r = run_fan(fan([[2, -1], [-1, 2], [-1, -1]], [[0, 1], [1, 2], [2, 0]]))
    assert [c.order for c in r.cones] == [3, 3, 3] and all(c.is_SU for c in r.cones)
    assert r.verdict == FULL
    # barycenter at the origin, but the SU vertices cannot be balanced with positive weights
    rays = [[1, -2], [3, -2], [2, -1], [-1, 2], [-3, 2]]
    r = run_fan(fan(rays, [[i, (i + 1) % 5] for i in range(5)]))
    assert r.polytope["barycenter"] == ["0", "0"]
    assert r.verdict == NOT_BALANCED and r.balancing["witness"] is None


def test_weighted_projective_plane_is_not_einstein():
    r = run_fan(fan([[1, 0], [0, 1], [-1, -2]], [[0, 1], [1, 2], [2, 0]]))
    assert r.verdict == NOT_APPLICABLE and any("barycenter" in n for n in r.notes)


def test_report_round_trip_and_determinism(fans_dir):
    opts = ReportOptions(epsilon=F(1, 10**7), c_gamma=F(1), delta=F(-3, 2))
    a = run_report(fans_dir / "X1.json", opts)
    b = run_report(fans_dir / "X1.json", opts)
    assert a.to_json() == b.to_json()
    again = FeasibilityReport.from_dict(json.loads(a.to_json()))
    assert again == a
    assert all(t["budget"]["verdict"] for t in a.tuning)


def test_epsilon_needs_c_gamma():
    with pytest.raises(ValueError, match="c-gamma"):
        ReportOptions(epsilon=F(1, 100))


def test_batch_isolates_failures(tmp_path, fans_dir):
    assert batch(tmp_path).reports == []
    shutil.copy(fans_dir / "X1.json", tmp_path / "X1.json")
    (tmp_path / "bad.json").write_text('{"name": "bad", "dim": 3}')
    res = batch(tmp_path)
    assert [r.fan for r in res.reports] == ["X1"] and [f for f, _ in res.failures] == ["bad.json"]
    shutil.copy(fans_dir / "X4.json", tmp_path / "X4.json")
    (tmp_path / "bad.json").unlink()
    assert [r.verdict for r in batch(tmp_path).reports] == [PARTIAL, PARTIAL]


def test_cli_subcommands(fans_dir, capsys):
    x1 = str(fans_dir / "X1.json")
    assert cli.main(["classify", x1, "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert sum(c["is_SU"] for c in out["cones"]) == 6
    assert cli.main(["polytope", x1]) == 0
    assert "C1    <-> (3, 0, 0)" in capsys.readouterr().out
    assert cli.main(["balance", x1]) == 0
    assert "b = (1, 1, 1, 1, 1, 1)" in capsys.readouterr().out
    assert cli.main(["report", x1, "--epsilon", "1/10000000", "--c-gamma", "1", "--delta=-3/2", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == PARTIAL
    assert cli.main(["tune", "--m", "3", "--order", "3", "--c-gamma", "1", "--epsilon", "1/10000000", "--delta=-3/2", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["budget"]["verdict"] is True
    assert cli.main(["harmonics", "--order", "3", "--exponents", "1", "2", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["first_invariant_mode"] == 2


def test_cli_dtn_table(capsys):
    cli.main(["dtn-table", "--m", "3", "--max-gamma", "0"])
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "3,0,-4,-2/3,0,-4,16"
    cli.main(["dtn-table", "--m", "3", "--max-gamma", "-1"])
    assert capsys.readouterr().out.splitlines() == ["m,gamma,p11,p12,p21,p22,det"]


def test_cli_exit_codes(tmp_path, fans_dir, capsys, monkeypatch):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert cli.main(["classify", str(bad)]) == 1
    assert cli.main(["report", str(fans_dir / "X1.json"), "--epsilon", "1/100"]) == 1
    shutil.copy(fans_dir / "X1.json", tmp_path / "X1.json")
    assert cli.main(["batch", str(tmp_path)]) == 1
    bad.unlink()
    assert cli.main(["batch", str(tmp_path)]) == 0

    from toricglue import toric

    def broken(c):
        raise toric.InconsistencyError("forced")

    monkeypatch.setattr(toric, "is_isolated", broken)
    assert cli.main(["classify", str(fans_dir / "X1.json")]) == 2
