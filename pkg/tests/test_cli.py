import json

import pandas as pd
import pytest

from src.afc import efficiency_analytic
from src.cli import build_parser, load_config, main
from src.cli.config import with_override
from src.core.errors import ConfigError

IDEAL_STORE = """\
grid:
  lo: -60
  hi: 59.95
  step: 0.05
spectrum:
  peak_od: 2.0
  passes: 6
comb:
  source: ideal
  afc:
    spacing: 6.0
    finesse: 4.5
    d: 12.0
    d0: 0.4
pulse:
  duration: 80.0
counting:
  events: 20000
"""

EXPERIMENTS = ["fig1_holeburn", "fig2_efficient", "fig2_efficient_ideal", "fig3_twobin",
               "fig4_broadband", "fig5_commensurate"]


def read_summary(path):
    return json.loads((path / "summary.json").read_text(encoding="utf-8"))


@pytest.mark.parametrize("name", EXPERIMENTS)
def test_experiment_configs_load(name):
    config = load_config(name)
    assert config.ion.name == "Tm:YAG"
    assert str(config.out).startswith("out")


def test_parser_requires_config():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["store"])


def test_invalid_config_exits_with_line(write_config, tmp_path, capsys):
    path = write_config(IDEAL_STORE.replace("duration: 80.0", "duration: -5"))
    out = tmp_path / "run"
    assert main(["store", "--config", str(path), "--out", str(out)]) == 2
    err = capsys.readouterr().err.strip().splitlines()
    assert err[0].startswith("error: cfg.yaml:16: pulse.duration: ")
    assert not out.exists()


def test_unknown_key_is_rejected(write_config, tmp_path, capsys):
    path = write_config(IDEAL_STORE + "colour: blue\n")
    assert main(["store", "--config", str(path), "--out", str(tmp_path / "run")]) == 2
    assert "colour" in capsys.readouterr().err


def test_missing_named_config(capsys):
    assert main(["compile", "--config", "no_such_experiment"]) == 2
    assert "experiments/no_such_experiment" in capsys.readouterr().err


def test_bad_thread_count(write_config, tmp_path):
    path = write_config(IDEAL_STORE)
    assert main(["store", "--config", str(path), "--out", str(tmp_path / "run"),
                 "--threads", "0"]) == 2


def test_store_ideal_outputs(write_config, tmp_path):
    out = tmp_path / "store"
    assert main(["store", "--config", str(write_config(IDEAL_STORE)), "--out", str(out)]) == 0
    for name in ("trace.csv", "counts.csv", "spectrum.csv", "summary.json",
                 "trace.png", "spectrum.png"):
        assert (out / name).exists(), name
    summary = read_summary(out)
    assert summary["source"] == "ideal"
    assert 0.26 <= summary["efficiency"] <= 0.31
    assert summary["efficiency_eq"] == pytest.approx(0.28077, rel=1e-3)
    assert summary["echo_peak_ns"]["1"] == pytest.approx(166.7, abs=2.0)


def test_store_is_deterministic(write_config, tmp_path):
    path = str(write_config(IDEAL_STORE))
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["store", "--config", path, "--out", str(first), "--seed", "5"]) == 0
    assert main(["store", "--config", path, "--out", str(second), "--seed", "5",
                 "--threads", "3"]) == 0
    for name in ("trace.csv", "counts.csv", "spectrum.csv", "summary.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_holeburn_features(write_config, tmp_path):
    out = tmp_path / "burn"
    assert main(["holeburn", "--config", "fig1_holeburn", "--out", str(out)]) == 0
    features = pd.read_csv(out / "features.csv")
    assert len(features) == 9
    assert (out / "holeburn.png").exists()

    zero = write_config("grid:\n  lo: -20\n  hi: 20\n  step: 0.1\n", "zero.yaml")
    out0 = tmp_path / "burn0"
    assert main(["holeburn", "--config", str(zero), "--out", str(out0)]) == 0
    assert len(pd.read_csv(out0 / "features.csv")) == 1
    assert read_summary(out0)["holes_MHz"] == [0.0]


def test_commensurate_single_point(write_config, tmp_path):
    path = write_config(
        "commensurate:\n  b_range: [630, 630, 1]\n  y_range: [250, 250, 1]\n"
        "  threshold: 0.1\n  audit: false\n")
    out = tmp_path / "comm"
    assert main(["commensurate", "--config", str(path), "--out", str(out)]) == 0
    assert len(pd.read_csv(out / "mismatch_map.csv")) == 1
    assert len(pd.read_csv(out / "minima.csv")) == 1
    assert not (out / "mismatch_map.png").exists()
    assert not (out / "search.csv").exists()
    summary = read_summary(out)
    assert summary["shape"] == [1, 1]
    assert summary["minimum"] == pytest.approx(0.088125, abs=1e-6)
    assert "audit" not in summary


def test_commensurate_range_validation(write_config, tmp_path, capsys):
    path = write_config("commensurate:\n  b_range: [700, 50, 1]\n")
    assert main(["commensurate", "--config", str(path), "--out", str(tmp_path / "c")]) == 2
    assert "commensurate.b_range" in capsys.readouterr().err


def test_compile_efficient(tmp_path):
    out = tmp_path / "compile"
    assert main(["compile", "--config", "fig2_efficient", "--out", str(out)]) == 0
    summary = read_summary(out)
    assert summary["mode"] == "aom"
    assert summary["segments"] == 5
    assert summary["coverage"]["bandwidth_MHz"] == pytest.approx(30.0)
    assert (out / "schedule.csv").read_text(encoding="utf-8").startswith("# afcmem-schedule v1")


def test_sweep_keeps_value_order(write_config, tmp_path):
    text = IDEAL_STORE + ("sweep:\n  parameter: comb.afc.finesse\n"
                          "  values: [6.0, 3.0, 4.5]\n  command: store\n")
    out = tmp_path / "sweep"
    assert main(["sweep", "--config", str(write_config(text)), "--out", str(out),
                 "--threads", "3"]) == 0
    frame = pd.read_csv(out / "sweep.csv")
    assert list(frame["comb.afc.finesse"]) == [6.0, 3.0, 4.5]
    for F, eta in zip(frame["comb.afc.finesse"], frame["efficiency"]):
        assert eta == pytest.approx(efficiency_analytic(12.0, F, 0.4), rel=0.05)
    summary = read_summary(out)
    assert [p["comb.afc.finesse"] for p in summary["points"]] == [6.0, 3.0, 4.5]


def test_with_override_errors():
    config = load_config("fig2_efficient")
    changed = with_override(config, "pump_target.wait_time", 20.0)
    assert changed.pump_target.wait_time == 20.0
    assert config.pump_target.wait_time == 5.0
    assert with_override(config, "pump_target.windows.0.center", 3.0).pump_target.windows[0].center == 3.0
    with pytest.raises(ConfigError) as info:
        with_override(config, "pump_target.wait_time", -1.0)
    assert info.value.problems[0].startswith("sweep: pump_target.wait_time=-1.0: ")


PUMP_SMALL = """\
grid:
  lo: -15
  hi: 15
  step: 0.05
spectrum:
  peak_od: 1.0
  passes: 2
pump_target:
  comb_spacing: 6.0
  tooth_width: 1.33
  wait_time: 0.0
  windows:
    - center: 0.0
      bandwidth: 30.0
pulse_train:
  t0: 0.15
  N_l: 20
  delta_p: 4.2
  peak_rate: 5.0
"""


def test_pump_from_schedule_matches_direct(write_config, tmp_path):
    direct, scheduled = tmp_path / "direct", tmp_path / "scheduled"
    assert main(["pump", "--config", str(write_config(PUMP_SMALL)), "--out", str(direct)]) == 0
    text = PUMP_SMALL + "comb:\n  from_schedule: true\n"
    assert main(["pump", "--config", str(write_config(text, "sched.yaml")),
                 "--out", str(scheduled)]) == 0
    a = pd.read_csv(direct / "pump.csv")
    b = pd.read_csv(scheduled / "pump.csv")
    assert len(a) == len(b) == 601
    assert a["od"].to_numpy() == pytest.approx(b["od"].to_numpy(), rel=1e-8, abs=1e-12)
    assert read_summary(scheduled)["peak_rate"] == 5.0


def test_rate_rules_are_exclusive(write_config, tmp_path, capsys):
    text = PUMP_SMALL + "comb:\n  calibrate_d0: 0.4\n  optimize_rate: true\n"
    out = tmp_path / "run"
    assert main(["pump", "--config", str(write_config(text)), "--out", str(out)]) == 2
    assert "mutually exclusive" in capsys.readouterr().err
    assert not out.exists()
