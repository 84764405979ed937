from antisync.cli import main

CONTROLLED = "scenarios/paper_s4_controlled.toml"


def _path(scenario_dir, name):
    return str(scenario_dir / f"{name}.toml")


def test_verify_controlled_admissible(scenario_dir, capsys, tmp_path):
    out = tmp_path / "report.txt"
    code = main(["verify", _path(scenario_dir, "paper_s4_controlled"),
                 "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert "admissible = yes" in text
    assert "[thresholds]" in text
    assert "[certificate]" in text
    # the published mu values differ from the literal thresholds; eta agrees
    assert "MISMATCH" in text
    assert "eta_bar[1] computed 5 reference 5.0 MATCH" in text
    assert text == capsys.readouterr().out


def test_verify_weak_gains_inadmissible(scenario_dir, capsys):
    code = main(["verify", _path(scenario_dir, "paper_s4_weak_gains")])
    assert code == 1
    text = capsys.readouterr().out
    assert "admissible = no" in text
    assert "violated = " in text
    assert "mu_bar[0]" in text


def test_verify_uncontrolled_has_no_gains(scenario_dir, capsys):
    code = main(["verify", _path(scenario_dir, "paper_s4_uncontrolled")])
    assert code == 1
    assert "no gain set supplied" in capsys.readouterr().out


def test_verify_lipschitz_mode(scenario_dir, capsys):
    code = main(["verify", _path(scenario_dir, "paper_s4_controlled"),
                 "--mode", "lipschitz"])
    assert code == 0
    assert "mode = lipschitz" in capsys.readouterr().out


def test_missing_config_is_input_error(capsys):
    code = main(["verify", "/no/such/file.toml"])
    assert code == 2
    assert "[missing-file]" in capsys.readouterr().err


def test_bounds_with_published_constants(scenario_dir, capsys):
    code = main(["bounds", _path(scenario_dir, "paper_s4_controlled"),
                 "--epsilon", "0.25", "--rho", "0.4"])
    assert code == 0
    text = capsys.readouterr().out
    assert "m_e1_0 = 10" in text
    assert "t1 computed 9.317766" in text and "reference 9.318 MATCH" in text
    assert "t2 computed 21.817766" in text and "reference 21.818 MATCH" in text


def test_bounds_rejects_infeasible_epsilon(scenario_dir, capsys):
    code = main(["bounds", _path(scenario_dir, "paper_s4_controlled"),
                 "--epsilon", "1.0"])
    assert code == 1
    assert "epsilon" in capsys.readouterr().err


def test_bounds_rejects_infeasible_rho(scenario_dir, capsys):
    code = main(["bounds", _path(scenario_dir, "paper_s4_controlled"),
                 "--rho", "0.5"])
    assert code == 1
    assert "rho" in capsys.readouterr().err


def test_bounds_searches_when_unconstrained(scenario_dir, capsys):
    code = main(["bounds", _path(scenario_dir, "paper_s4_controlled")])
    assert code == 0
    assert "epsilon_sup = " in capsys.readouterr().out


def test_bounds_requires_gains(scenario_dir, capsys):
    code = main(["bounds", _path(scenario_dir, "paper_s4_uncontrolled")])
    assert code == 1


def test_simulate_writes_csv(scenario_dir, tmp_path, capsys):
    out = tmp_path / "traj.csv"
    code = main(["simulate", _path(scenario_dir, "paper_s4_controlled"),
                 "--out", str(out), "--t-end", "2.0"])
    assert code == 0
    lines = out.read_text().splitlines()
    header = lines[0].split(",")
    assert header == [
        "t",
        "x1_re", "x1_im", "y1_re", "y1_im", "e1_re", "e1_im",
        "x2_re", "x2_im", "y2_re", "y2_im", "e2_re", "e2_im",
        "norm_e1", "monitor_m", "norm_e2", "monitor_v", "settled",
    ]
    assert lines[1].startswith("0,")
    first = lines[1].split(",")
    # admissible scenario: monitor column is populated from t = 0
    assert first[header.index("monitor_m")] != ""
    assert first[header.index("settled")] in ("0", "1")
    # the second-phase columns are empty until the error enters the unit band
    assert first[header.index("norm_e2")] == ""
    text = capsys.readouterr().out
    assert "settling_time = " in text
    assert "certified_t2 = " in text


def test_simulate_is_deterministic(scenario_dir, tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    for out in (a, b):
        code = main(["simulate", _path(scenario_dir, "paper_s4_controlled"),
                     "--out", str(out), "--t-end", "2.0"])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep(scenario_dir, tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", _path(scenario_dir, "paper_s4_controlled"),
                 "--scales", "0.01,1.0", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "scale,admissible,settling_time,chattering_amplitude"
    assert len(lines) == 3
    weak = lines[1].split(",")
    full = lines[2].split(",")
    assert weak[1] == "no"
    assert full[1] == "yes"
    # both runs settle within the horizon
    assert weak[2] != "" and full[2] != ""


def test_sweep_rejects_bad_scales(scenario_dir, capsys):
    code = main(["sweep", _path(scenario_dir, "paper_s4_controlled"),
                 "--scales", "1.0,abc", "--out", "/dev/null"])
    assert code == 2
    code = main(["sweep", _path(scenario_dir, "paper_s4_controlled"),
                 "--scales", "-1.0", "--out", "/dev/null"])
    assert code == 2


def test_sweep_requires_gains(scenario_dir, capsys):
    code = main(["sweep", _path(scenario_dir, "paper_s4_uncontrolled"),
                 "--scales", "1.0", "--out", "/dev/null"])
    assert code == 2
