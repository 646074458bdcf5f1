import json
import math

import pytest
from scipy.stats import binom

from rsasd.asd import t_of_s
from rsasd.harness import (
    SimConfig,
    emit_bounds,
    emit_region,
    main,
    parse_grid,
    run_simulation,
    simulate_point,
    wilson_interval,
)
from rsasd.regions import worst_case_score_cost


def within_3sigma(point, p):
    sd = math.sqrt(p * (1 - p) / point.frames)
    return abs(point.fer - p) <= 3 * sd


@pytest.mark.parametrize("decoder", ["bm", "gmd", "bgmd", "asd-pmas", "pmas-predicate"])
def test_clean_channel_has_no_errors(decoder):
    cfg = SimConfig(code=(15, 11, 4), channel="bec", grid=[0.0], decoder=decoder, M=2, trials=200)
    (pt,) = run_simulation(cfg)
    assert (pt.frames, pt.frame_errors, pt.fer) == (200, 0, 0.0)


@pytest.mark.parametrize("N,K,m,p", [(15, 11, 4, 0.05), (31, 25, 5, 0.02)])
def test_bm_on_bsc_matches_analytic(N, K, m, p):
    cfg = SimConfig(code=(N, K, m), channel="bsc", grid=[p], decoder="bm", trials=20_000, stop_at=None, seed=4)
    (pt,) = run_simulation(cfg)
    ps = 1 - (1 - p) ** m
    assert within_3sigma(pt, float(binom.sf((N - K) // 2, N, ps)))


@pytest.mark.parametrize("N,K,m,eps", [(15, 11, 4, 0.06), (31, 25, 5, 0.03)])
def test_bm_on_bec_matches_analytic(N, K, m, eps):
    cfg = SimConfig(code=(N, K, m), channel="bec", grid=[eps], decoder="bm", trials=20_000, stop_at=None, seed=5)
    (pt,) = run_simulation(cfg)
    ps = 1 - (1 - eps) ** m
    assert within_3sigma(pt, float(binom.sf(N - K, N, ps)))


def test_early_stop_agrees_with_full_run():
    base = dict(code=(15, 11, 4), channel="bsc", grid=[0.05], decoder="bm", seed=11)
    full = simulate_point(SimConfig(**base, trials=20_000, stop_at=None), 0.05)
    early = simulate_point(SimConfig(**base, trials=20_000, stop_at=50), 0.05)
    assert early.frame_errors == 50 and early.frames < full.frames
    assert early.ci_low <= full.fer <= early.ci_high
    assert early.ci_low <= full.ci_high and full.ci_low <= early.ci_high


def test_worker_count_does_not_change_results():
    base = dict(code=(15, 11, 4), channel="bsc", grid=[0.05], decoder="bm", trials=3000, seed=2, stop_at=20)
    a = run_simulation(SimConfig(**base, workers=1))
    b = run_simulation(SimConfig(**base, workers=2))
    assert a == b


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and 0.03 < hi < 0.04
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(decoder="bgmd", M=3)
    with pytest.raises(ValueError):
        SimConfig(trials=0)
    with pytest.raises(ValueError):
        SimConfig(channel="bsc", grid=[1.5])
    with pytest.raises(ValueError):
        SimConfig(grid=[])
    assert SimConfig(stop_at=0).stop_at is None


def test_parse_grid():
    assert parse_grid("4:0.25:5") == [4.0, 4.25, 4.5, 4.75, 5.0]
    assert parse_grid("0.01,0.02") == [0.01, 0.02]
    assert parse_grid("7") == [7.0]


def test_region_emitter_rows():
    lines = emit_region((255, 239, 8), "finite", 2).splitlines()
    assert lines[0] == "f,e_max,strategy,M"
    assert len(lines) == 1 + 26
    assert lines[1] == "0,8,finite,2"
    assert lines[-1] == "25,0,finite,2"


def test_region_emitter_matches_direct_check():
    rows = [tuple(map(int, line.split(",")[:2])) for line in emit_region((63, 23, 6), "finite", 2).splitlines()[1:]]
    for f, e_max in rows:
        ok = [e for e in range(0, 63 - f + 1) if t_of_s(worst_case_score_cost(63, 2, e, f)[0], 23) > worst_case_score_cost(63, 2, e, f)[1]]
        assert max(ok) == e_max
    assert rows[-1][0] == max(f for f in range(64) if t_of_s(worst_case_score_cost(63, 2, 0, f)[0], 23) > worst_case_score_cost(63, 2, 0, f)[1])


def test_bound_emitter_marks_inapplicable_lower():
    lines = emit_bounds((31, 10, 5), "pmas-bec", None, [0.05]).splitlines()
    assert lines[0] == "param,fer_bound,kind,strategy,M"
    assert any("lower-inapplicable" in ln and ",nan," in ln for ln in lines)


def test_cli_simulate_is_byte_identical(tmp_path):
    argv = ["simulate", "--code", "15,11,4", "--channel", "bsc", "--param", "0.04:0.02:0.08", "--decoder", "bm",
            "--trials", "2e3", "--stop-at", "30", "--seed", "42"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "param,frames,frame_errors,fer,ci_low,ci_high"
    assert len(lines) == 4


def test_cli_config_file_and_json(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"code": "15,11,4", "channel": "bec", "snr": [0.05], "decoder": "bgmd", "mult": 2,
                               "trials": 300, "seed": 1}))
    out = tmp_path / "out.json"
    assert main(["simulate", "--config", str(cfg), "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["command"] == "simulate"
    assert doc["columns"] == ["param", "frames", "frame_errors", "fer", "ci_low", "ci_high"]
    assert doc["config"]["decoder"] == "bgmd" and doc["config"]["M"] == 2
    assert doc["version"]
    assert len(doc["rows"]) == 1 and doc["rows"][0]["frames"] == 300


def test_cli_region_and_bound(tmp_path, capsys):
    assert main(["region", "--code", "255,239,8", "--mult", "2"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 27
    assert main(["bound", "--code", "31,25,5", "--strategy", "bm", "--snr", "6,7"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "param,fer_bound,kind,strategy,M" and len(lines) == 3


def test_cli_full_length_code_region(capsys):
    # every word is a codeword, so f <= 1 bit erasures still leave it on the list
    assert main(["region", "--code", "7,7,3", "--mult", "2"]) == 0
    assert capsys.readouterr().out.splitlines() == ["f,e_max,strategy,M", "0,0,finite,2", "1,0,finite,2"]


def test_cli_reports_bad_config():
    with pytest.raises(SystemExit) as info:
        main(["simulate", "--code", "15,11,4", "--decoder", "bgmd", "--mult", "3"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["region"])
