import copy

import pytest

from antisync.config import (
    ConfigError,
    dump_scenario,
    load_scenario,
    scenario_from_dict,
    scenario_to_dict,
)

MINIMAL = {
    "name": "tiny",
    "mode": "theorem1",
    "network": {
        "n": 1,
        "d": [1.0],
        "tau": 0.5,
        "A": [[[0.5, -0.25]]],
        "B": [[[0.1, 0.2]]],
        "H": [[0.0, 0.0]],
        "phi_init": [[1.0, -1.0]],
        "psi_init": [[0.5, 0.5]],
        "f": [{"kind": "sigmoid-pair", "mix": [1.0, 0.0, 0.0, 1.0]}],
        "g": [{"kind": "saturating-linear", "mix": [1.0, 0.0, 0.0, 1.0]}],
        "delays": [{"kind": "constant", "value": 0.5, "bound": 0.5}],
    },
    "weights": {"xi": [1.0], "phi": [1.0]},
    "gains": {
        "beta": 0.5,
        "mu_bar": [5.0], "rho_bar": [1.0], "eta_bar": [1.0],
        "mu_tilde": [5.0], "rho_tilde": [1.0], "eta_tilde": [1.0],
    },
    "sim": {"t_end": 1.0, "dt": 0.01},
}


def _variant(**edits):
    raw = copy.deepcopy(MINIMAL)
    for dotted, value in edits.items():
        parts = dotted.split(".")
        node = raw
        for p in parts[:-1]:
            node = node[p]
        if value is None:
            del node[parts[-1]]
        else:
            node[parts[-1]] = value
    return raw


def test_minimal_scenario_parses():
    sc = scenario_from_dict(MINIMAL)
    assert sc.name == "tiny"
    assert sc.network.n == 1
    assert sc.gains.beta == 0.5
    assert sc.reference is None


def test_shipped_scenarios_parse(s4_controlled, s4_uncontrolled, s4_weak):
    for sc in (s4_controlled, s4_uncontrolled, s4_weak):
        assert sc.network.n == 2
        assert sc.weights.xi == (0.4, 0.8)
        assert sc.weights.phi == (0.5, 0.6)
        assert sc.network.tau == 1.0
    assert s4_controlled.gains.beta == 0.5
    assert s4_uncontrolled.gains is None
    assert s4_controlled.reference is not None


def _expect_code(raw, code):
    with pytest.raises(ConfigError) as exc:
        scenario_from_dict(raw)
    assert exc.value.code == code


def test_missing_section():
    _expect_code(_variant(**{"weights": None}), "missing-field")


def test_missing_network_field():
    _expect_code(_variant(**{"network.d": None}), "missing-field")


def test_bad_type():
    _expect_code(_variant(**{"network.d": ["one"]}), "bad-type")


def test_dimension_mismatch():
    _expect_code(_variant(**{"network.H": [[0.0, 0.0], [1.0, 1.0]]}),
                 "dimension-mismatch")
    _expect_code(_variant(**{"weights.xi": [1.0, 2.0]}), "dimension-mismatch")


def test_exponent_out_of_range():
    _expect_code(_variant(**{"gains.beta": 1.5}), "exponent-range")
    _expect_code(_variant(**{"gains.beta": 0.0}), "exponent-range")


def test_weight_positivity():
    _expect_code(_variant(**{"weights.xi": [0.0]}), "weight-positivity")
    _expect_code(_variant(**{"weights.phi": [-1.0]}), "weight-positivity")


def test_unknown_kinds():
    _expect_code(
        _variant(**{"network.f": [{"kind": "relu", "mix": [1, 0, 0, 1]}]}),
        "bad-kind")
    _expect_code(
        _variant(**{"network.delays": [{"kind": "ramp", "bound": 0.5}]}),
        "bad-kind")


def test_bad_mode():
    _expect_code(_variant(**{"mode": "theorem2"}), "bad-value")


def test_invalid_network_value():
    _expect_code(_variant(**{"network.d": [-1.0]}), "bad-value")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError) as exc:
        load_scenario(tmp_path / "nope.toml")
    assert exc.value.code == "missing-file"


def test_parse_error(tmp_path):
    p = tmp_path / "broken.toml"
    p.write_text("name = [unclosed\n")
    with pytest.raises(ConfigError) as exc:
        load_scenario(p)
    assert exc.value.code == "parse-error"


def test_round_trip_preserves_scenario(s4_controlled, tmp_path):
    text = dump_scenario(s4_controlled)
    p = tmp_path / "copy.toml"
    p.write_text(text)
    again = load_scenario(p)
    assert scenario_to_dict(again) == scenario_to_dict(s4_controlled)
    # serialization is deterministic
    assert dump_scenario(again) == text


def test_round_trip_without_gains(s4_uncontrolled, tmp_path):
    p = tmp_path / "copy.toml"
    p.write_text(dump_scenario(s4_uncontrolled))
    again = load_scenario(p)
    assert again.gains is None
    assert scenario_to_dict(again) == scenario_to_dict(s4_uncontrolled)
