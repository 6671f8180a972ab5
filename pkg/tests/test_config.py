"""Tests for configuration layering."""

from fractions import Fraction

import pytest

from fraq.config import (
    PRESETS,
    Config,
    KernelConfig,
    get_data_dir,
    layer_config,
    parse_alpha_pairs,
    parse_fraction,
    parse_key_values,
    resolve_threads,
)
from fraq.errors import ConfigError, ParameterError, SingularParameterError


def _write(tmp_path, text):
    path = tmp_path / "run.yaml"
    path.write_text(text)
    return path


def test_defaults():
    exp = Config.load().experiment
    assert exp.schemes == ["be", "fastbe"]
    assert exp.alpha_pairs == [(0.3, 0.6)]
    assert exp.coupling_a == 2.0 and exp.transition_m is None
    assert exp.grid_m == 255
    assert exp.taus == [Fraction(1, 100 * 2**k) for k in range(5)]
    assert exp.ref_tau == Fraction(1, 3200)
    assert exp.solve_tau == Fraction(1, 100)
    assert exp.kernel == KernelConfig()


@pytest.mark.parametrize(
    "raw, expected",
    [
        ("1/3200", Fraction(1, 3200)),
        (" 3 / 4 ", Fraction(3, 4)),
        (0.01, Fraction(1, 100)),
        ("0.01", Fraction(1, 100)),
        (2, Fraction(2)),
        (Fraction(5, 7), Fraction(5, 7)),
    ],
)
def test_parse_fraction(raw, expected):
    assert parse_fraction(raw) == expected


@pytest.mark.parametrize("raw", ["abc", "1/0", True, "1/x"])
def test_parse_fraction_rejects(raw):
    with pytest.raises(ConfigError):
        parse_fraction(raw)


def test_parse_alpha_pairs():
    assert parse_alpha_pairs("0.3:0.6, 0.4:0.7") == [(0.3, 0.6), (0.4, 0.7)]
    assert parse_alpha_pairs([[0.2, 0.4], "0.6:0.8"]) == [(0.2, 0.4), (0.6, 0.8)]
    with pytest.raises(ConfigError):
        parse_alpha_pairs("0.3")
    with pytest.raises(ConfigError):
        parse_alpha_pairs("")


def test_layer_precedence(tmp_path):
    path = _write(tmp_path, "grid_m: 63\na: 5\ntaus: 1/20,1/40\nref_tau: 1/160\n")
    exp = Config.load(config_path=path, preset="table3", overrides={"grid_m": 31}).experiment
    assert exp.grid_m == 31
    assert exp.coupling_a == 5.0
    assert exp.taus == [Fraction(1, 20), Fraction(1, 40)]
    assert exp.schemes == ["sbd", "fastsbd"]
    assert exp.init == "poly_sinpi"


def test_preset_values():
    exp = Config.load(preset="table4").experiment
    assert exp.alpha_pairs == [(0.2, 0.4), (0.6, 0.8)]
    assert exp.coupling_a == -1.0
    assert exp.init == "indicator"
    assert exp.grid_m == 1023
    assert exp.ref_tau == Fraction(1, 640)
    assert set(PRESETS) >= {"table1", "table5", "figure1", "figure2"}
    assert Config.load(preset="table1").experiment.ref_tau == Fraction(1, 6400)
    assert Config.load(preset="table5").experiment.init == "poly_sinpi"


def test_alpha_overrides_replace_pairs():
    exp = Config.load(preset="table1", overrides={"alpha1": 0.45}).experiment
    assert exp.alpha_pairs == [(0.45, 0.6)]
    exp = Config.load(overrides={"alpha2": 0.9}).experiment
    assert exp.alpha_pairs == [(0.3, 0.9)]


def test_kernel_preset():
    exp = Config.load(preset="figure2").experiment
    assert exp.alpha_pairs[0][0] == 0.8
    assert exp.solve_tau == Fraction(1, 1000)
    assert (exp.kernel.n_points_1, exp.kernel.n_points_2, exp.kernel.n_head) == (41, 41, 17)


def test_transition_parameter_and_explicit_coupling(tmp_path):
    path = _write(tmp_path, "m: 0.75\n")
    exp = Config.load(config_path=path).experiment
    assert exp.effective_coupling == pytest.approx(0.5)

    exp = Config.load(config_path=path, overrides={"a": 3}).experiment
    assert exp.transition_m is None
    assert exp.effective_coupling == 3.0


def test_singular_transition_parameter():
    with pytest.raises(SingularParameterError):
        Config.load(overrides={"m": 0.5})
    with pytest.raises(ParameterError):
        Config.load(overrides={"m": 1.5})


def test_aliases_and_dashes(tmp_path):
    path = _write(tmp_path, "grid-m: 7\nn_points_be: 12\nns: auto\nns-auto: yes\n")
    exp = Config.load(config_path=path).experiment
    assert exp.grid_m == 7
    assert exp.kernel.n_points_be == 12
    assert exp.kernel.n_head is None
    assert exp.kernel.auto_head is True


def test_key_value_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text(
        "# convergence run\n"
        "alpha1 = 0.3\n"
        "alpha2 = 0.7   # second state\n"
        "\n"
        "schemes = sbd, fastsbd\n"
        "taus = 1/100,1/200\n"
        "ref_tau = 1/400\n"
        "ns-auto = yes\n"
        "np_auto = off\n"
        "m =\n"
    )
    exp = Config.load(config_path=path).experiment
    assert exp.alpha_pairs == [(0.3, 0.7)]
    assert exp.schemes == ["sbd", "fastsbd"]
    assert exp.taus == [Fraction(1, 100), Fraction(1, 200)]
    assert exp.ref_tau == Fraction(1, 400)
    assert exp.transition_m is None
    assert exp.kernel.auto_head is True
    assert exp.kernel.points_auto is False


def test_parse_key_values():
    text = "a = 2\n  # note\nsnapshots = 1/2, 1  # two\na = 3\nns =\n"
    assert parse_key_values(text) == {"a": "3", "snapshots": "1/2, 1", "ns": ""}
    with pytest.raises(ConfigError, match="run.conf:2"):
        parse_key_values("a = 2\ngrid_m 63\n", "run.conf")
    with pytest.raises(ConfigError):
        parse_key_values("= 4\n")


@pytest.mark.parametrize("text", ["grid_m 63\n", "bogus = 1\n", "grid_m = many\n"])
def test_bad_key_value_files(tmp_path, text):
    path = tmp_path / "run.conf"
    path.write_text(text)
    with pytest.raises(ConfigError):
        Config.load(config_path=path)


def test_points_auto_defaults_on():
    assert Config.load().experiment.kernel.points_auto is True
    exp = Config.load(overrides={"np_auto": False}).experiment
    assert exp.kernel.points_auto is False
    assert "np_auto = false" in Config.load(overrides={"np_auto": False}).describe()


def test_yaml_lists(tmp_path):
    text = "schemes: [SBD, fastsbd]\nalpha_pairs:\n  - [0.2, 0.4]\nsnapshots: [1/2, 1]\n"
    path = _write(tmp_path, text)
    exp = Config.load(config_path=path).experiment
    assert exp.schemes == ["sbd", "fastsbd"]
    assert exp.alpha_pairs == [(0.2, 0.4)]
    assert exp.snapshots == [Fraction(1, 2), Fraction(1)]


@pytest.mark.parametrize(
    "text",
    [
        "bogus: 1\n",
        "grid_m: [1, 2\n",
        "- just\n- a list\n",
        "grid_m: many\n",
    ],
)
def test_bad_config_files(tmp_path, text):
    with pytest.raises(ConfigError):
        Config.load(config_path=_write(tmp_path, text))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        Config.load(config_path=tmp_path / "missing.yaml")


def test_empty_config_file(tmp_path):
    assert Config.load(config_path=_write(tmp_path, "")).experiment.grid_m == 255


@pytest.mark.parametrize(
    "overrides",
    [
        {"schemes": "be,bdf3"},
        {"init": "gaussian"},
        {"taus": "1/200,1/100"},
        {"ref_tau": "1/100"},
        {"grid_m": 0},
        {"alpha_pairs": "0.3:1.2"},
        {"t_final": 0},
    ],
)
def test_validation(overrides):
    with pytest.raises(ConfigError):
        Config.load(overrides=overrides)


def test_unknown_preset():
    with pytest.raises(ConfigError):
        Config.load(preset="table9")


def test_layer_config_skips_empty_layers():
    merged = layer_config(("defaults", {"grid_m": 5}), ("file", None), ("cli", {}))
    assert merged == {"grid_m": 5}
    with pytest.raises(ConfigError):
        layer_config(("cli", {"gridm": 5}))


def test_describe_lists_resolved_values():
    lines = Config.load(overrides={"m": 0.75, "tau": "1/50"}).describe()
    assert lines == sorted(lines)
    assert "a = 0.5" in lines
    assert "m = 0.75" in lines
    assert "tau = 1/50" in lines
    assert "ns = default" in lines


def test_resolve_threads(monkeypatch):
    assert resolve_threads(4) == 4
    assert resolve_threads(0) == 1
    monkeypatch.setenv("FRAQ_THREADS", "2")
    assert resolve_threads(4) == 2
    for bad in ("zero", "0"):
        monkeypatch.setenv("FRAQ_THREADS", bad)
        with pytest.raises(ConfigError):
            resolve_threads(4)


def test_data_dir_in_development(monkeypatch):
    monkeypatch.setenv("FRAQ_DEV", "1")
    assert get_data_dir() == ".fraq-dev"
