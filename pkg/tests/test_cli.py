import json

import pytest

from periodic_macdonald import cli


def test_config_parsing(tmp_path):
    path = tmp_path / "cfg.txt"
    path.write_text("# comment\nq = 1/3\nx = 1/2, 1/3\nseed = 5\n")
    cfg = cli.load_config("A4", str(path))
    assert cfg.frac("q", "0") == cli.Fraction(1, 3)
    assert cfg.fracs("x", "") == (cli.Fraction(1, 2), cli.Fraction(1, 3))
    assert cfg.seed == 5


def test_malformed_rational_names_the_key(tmp_path):
    path = tmp_path / "cfg.txt"
    path.write_text("q = 1/x\n")
    cfg = cli.load_config("A4", str(path))
    with pytest.raises(cli.ConfigError, match="'q'"):
        cfg.frac("q", "0")
    assert cli.main(["verify", "A4", "--config", str(path)]) == 2


def test_unknown_check_and_profile(monkeypatch):
    assert cli.main(["verify", "A99"]) == 2
    monkeypatch.setenv(cli.PROFILE_ENV, "nonsense")
    assert cli.main(["verify", "A4"]) == 2


def test_verify_writes_deterministic_report(tmp_path):
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert cli.main(["verify", "A6", "--out", str(out1)]) == 0
    assert cli.main(["verify", "A6", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    for key in ("check_id", "params", "lhs", "rhs", "abs_err", "rel_err", "tolerance", "truncation",
                "pass", "runtime_ms"):
        assert key in report
    assert report["pass"] is True and report["check_id"] == "A6"


def test_failing_check_exit_code(tmp_path):
    # a single series term cannot meet the A13 tolerance
    path = tmp_path / "cfg.txt"
    path.write_text("K = 1\nn_max = 1\nN_max = 1\n")
    assert cli.main(["verify", "A13", "--config", str(path)]) == 1


def test_run_check_timing_field():
    rep = cli.run_check(cli.load_config("A11"))
    assert rep.passed
    assert rep.runtime_ms is not None and rep.runtime_ms >= 0
    assert rep.to_dict()["runtime_ms"] is None
    assert rep.to_dict(timing=True)["runtime_ms"] == rep.runtime_ms


def test_export_and_sample(tmp_path, capsys):
    path = tmp_path / "cfg.txt"
    path.write_text("a = 1/3\nb = 1/5\nK = 6\nL = 4\nwinding_cap = 4\n")
    out = tmp_path / "t.csv"
    assert cli.main(["export", "--kind", "phl", "--config", str(path), "--out", str(out)]) == 0
    assert out.read_text().startswith("base_length,up_marks,down_marks,probability")
    assert cli.main(["export", "--kind", "sixvertex", "--config", str(path)]) == 0
    assert capsys.readouterr().out.startswith("winding,s1,s2,probability")
    assert cli.main(["export", "--kind", "stationarity", "--config", str(path)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "u,tv_distance"
    assert cli.main(["sample", "--config", str(path), "--size", "3", "--seed", "1"]) == 0
    first = capsys.readouterr().out
    assert cli.main(["sample", "--config", str(path), "--size", "3", "--seed", "1"]) == 0
    assert capsys.readouterr().out == first
    assert len(first.strip().splitlines()) == 3


def test_convergence_study_shrinks():
    cfg = cli.load_config("A13", overrides={"n_max": "1", "N_max": "1"})
    text = cli.convergence_study(cfg, "K", [4, 8, 12])
    rows = [line.split(",") for line in text.strip().splitlines()[1:]]
    errs = [float(r[1]) for r in rows]
    assert errs[0] > errs[1] > errs[2]
    with pytest.raises(cli.ConfigError):
        cli.convergence_study(cfg, "bogus", [1])


def test_u_zero_export_has_no_winding(tmp_path, capsys):
    path = tmp_path / "cfg.txt"
    path.write_text("u = 0\nL = 6\n")
    assert cli.main(["export", "--kind", "sixvertex", "--config", str(path)]) == 0
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    assert {r.split(",")[0] for r in rows} == {"0"}
    total = sum(cli.Fraction(r.split(",")[3]) for r in rows)
    assert total == 1
