import json

import pytest

from rangergame.cli import main


def test_ne_command_prints_equilibrium(capsys):
    assert main(["ne", "--dist", "0.9,0.9,0.9"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["value"] == pytest.approx(0.9 - 1.9 / 3, abs=1e-9)
    assert out["ranger_strategy"] == pytest.approx([1 / 3] * 3)
    assert out["method"] == "closed_form"


def test_ne_command_reported_strategy(capsys):
    assert main(["ne", "--dist", "0.2,0.4,0.6,0.8"]) == 0
    out = json.loads(capsys.readouterr().out)
    for got, shown in zip(out["ranger_strategy"], (0.08, 0.22, 0.31, 0.39)):
        assert got == pytest.approx(shown, abs=0.0055)


def test_ne_command_oracle_flag(capsys):
    assert main(["ne", "--dist", "0.5,0.5", "--oracle"]) == 0
    assert json.loads(capsys.readouterr().out)["method"] == "linear_program"


def test_ne_command_rejects_bad_distribution(capsys):
    assert main(["ne", "--dist", "1.5,0.2"]) == 1
    assert "error" in capsys.readouterr().err


def test_run_is_deterministic_and_traceable(tmp_path, capsys):
    args = ["run", "--dist", "0.2,0.4,0.6,0.8", "--rounds", "50",
            "--poacher", "pfa:M=10,s=1", "--ranger", "fp", "--seed", "7"]
    out1 = tmp_path / "a.jsonl"
    out2 = tmp_path / "b.jsonl"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2),
                        "--trace", str(tmp_path / "trace.csv")]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    trace = (tmp_path / "trace.csv").read_text().splitlines()
    header = next(l for l in trace if not l.startswith("#"))
    assert header == "round,freq_site_0,freq_site_1,freq_site_2,freq_site_3"
    meta = json.loads(out1.read_text().splitlines()[0])
    assert meta["seed"] == 7  # replay info embedded


def test_batch_command_writes_csv(tmp_path, capsys):
    out = tmp_path / "batch.csv"
    code = main(["batch", "--dist", "0.5,0.5", "--rounds", "20",
                 "--poacher", "pm", "--ranger", "pm", "--seed", "3",
                 "--reps", "5", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    data = [l for l in lines if not l.startswith("#")]
    assert data[0] == "rep,avg_poacher_utility"
    assert len(data) == 6
    assert any(l.startswith("# config=") for l in lines)


def test_sweep_command(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--dist", "0.5,0.5,0.5", "--s", "0,1", "--M", "10",
                 "--rounds", "30", "--reps", "3", "--seed", "1",
                 "--out", str(out)])
    assert code == 0
    data = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert data[0] == "distribution,s=0,s=1"
    assert len(data) == 2


def test_config_file_supplies_defaults(tmp_path, capsys):
    cfg = tmp_path / "exp.json"
    cfg.write_text(json.dumps({
        "distribution": [0.2, 0.8],
        "rounds": 25,
        "poacher": {"kind": "pfa", "M": 5, "s": 1},
        "ranger": "fp",
        "seed": 12,
    }))
    out = tmp_path / "from_config.jsonl"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == 0
    meta = json.loads(out.read_text().splitlines()[0])
    assert meta["rounds"] == 25
    assert meta["poacher"] == {"kind": "pfa", "M": 5, "s": 1}
    # flags override the file
    out2 = tmp_path / "override.jsonl"
    assert main(["run", "--config", str(cfg), "--rounds", "10",
                 "--out", str(out2)]) == 0
    assert json.loads(out2.read_text().splitlines()[0])["rounds"] == 10


def test_analyze_command(tmp_path, capsys):
    logdir = tmp_path / "logs"
    logdir.mkdir()
    for k in range(4):
        main(["run", "--dist", "0.8,0.3,0.8,0.3", "--rounds", "40",
              "--poacher", "pfa:M=10,s=0", "--ranger", "pfa:M=100,s=0",
              "--seed", str(100 + k), "--out", str(logdir / f"g{k}.jsonl")])
    capsys.readouterr()
    code = main(["analyze", "--logs", str(logdir),
                 "--out-prefix", str(tmp_path / "out" / "run1")])
    assert code == 0
    sticky = (tmp_path / "out" / "run1_stickiness.csv").read_text().splitlines()
    rows = [l for l in sticky if not l.startswith("#")]
    assert rows[0] == "player,utility,p_stick,n_pairs"
    assert len(rows) == 4


def test_analyze_cluster(tmp_path, capsys):
    logdir = tmp_path / "logs"
    logdir.mkdir()
    specs = ["pm", "level0-uniform", "level2", "pm", "level0-uniform", "level2"]
    for k, spec in enumerate(specs):
        main(["run", "--dist", "0.9,0.6,0.2", "--rounds", "100",
              "--poacher", spec, "--ranger", "pfa:M=100,s=0",
              "--seed", str(k), "--out", str(logdir / f"g{k}.jsonl")])
    capsys.readouterr()
    code = main(["analyze", "--logs", str(logdir), "--cluster",
                 "--out-prefix", str(tmp_path / "c")])
    assert code == 0
    rows = [l for l in (tmp_path / "c_clusters.csv").read_text().splitlines()
            if not l.startswith("#")]
    assert rows[0].startswith("index,cluster_id,label")
    assert len(rows) == 7


def test_unprofitable_distribution_warns(tmp_path):
    with pytest.warns(UserWarning, match="no profitable"):
        main(["ne", "--dist", "0.1,0.1"])


def test_help_exits_zero(capsys):
    for args in (["--help"], ["ne", "--help"], ["run", "--help"],
                 ["batch", "--help"], ["sweep", "--help"],
                 ["analyze", "--help"], ["serve", "--help"]):
        with pytest.raises(SystemExit) as exc:
            main(args)
        assert exc.value.code == 0
        assert capsys.readouterr().out
