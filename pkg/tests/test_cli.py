import json
from pathlib import Path

import pytest

from parity_audit.cli import build_parser, config_from_args, main
from parity_audit.errors import UsageError

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"

RAW_COHORT = (
    "race,decile_score,days,event\n"
    + "".join(f"Caucasian,{2 + i % 3},{10 + 3 * i},{i % 2}\n" for i in range(40))
    + "".join(f"African-American,{2 + i % 3},{5 + 2 * i},{(i + 1) % 2}\n" for i in range(40))
    + "Hispanic,3,40,1\n"
)


def _run_dirs(out):
    return sorted(p for p in Path(out).iterdir() if p.name.startswith("run-"))


def _simulate(tmp_path, config="dag_h0.yml", n="300", seed="7"):
    output = tmp_path / "synthetic.csv"
    code = main(["simulate", "--dag-config", str(CONFIG_DIR / config), "--n", n, "--seed", seed,
                 "--output", str(output), "--per-group"])
    assert code == 0
    return output


def test_simulate_writes_cohort_and_sidecar(tmp_path, capsys):
    output = _simulate(tmp_path)
    assert output.read_text(encoding="utf-8").startswith("group,stratum,time_days,event\n")
    meta = json.loads(Path(str(output) + ".meta.json").read_text(encoding="utf-8"))
    assert meta["seed"] == 7
    assert meta["rng_algorithm"] == "PCG64"
    assert meta["hypothesis"] == "H0"
    assert "cohort:" in capsys.readouterr().out


def test_audit_of_synthetic_cohort(tmp_path, capsys):
    cohort = _simulate(tmp_path)
    code = main(["audit", "--input", str(cohort), "--horizon-start", "28", "--horizon-step", "28"])
    assert code == 0

    (run_dir,) = _run_dirs(tmp_path / "out")
    report = json.loads((run_dir / "report.json").read_text(encoding="utf-8"))
    assert report["metadata"]["seed"] == 7
    assert report["metadata"]["rng_algorithm"] == "PCG64"
    assert report["metadata"]["mapping_preset"] == "normalized"
    assert [b["stratum"] for b in report["strata"]] == ["low", "medium", "high"]
    assert (run_dir / "pvalue_timeline.csv").is_file()
    assert (run_dir / "survival_low.svg").is_file()
    assert (run_dir / "logs" / "parity_audit.json.log").is_file()

    out = capsys.readouterr().out
    assert "low:" in out and "artifacts:" in out


def test_repeat_runs_produce_identical_artifacts(tmp_path):
    cohort = _simulate(tmp_path)
    for _ in range(2):
        assert main(["audit", "--input", str(cohort), "--horizon-step", "14"]) == 0
    first, second = _run_dirs(tmp_path / "out")
    names = sorted(p.name for p in first.iterdir() if p.is_file())
    assert "report.json" in names
    assert names == sorted(p.name for p in second.iterdir() if p.is_file())
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_audit_with_yaml_mapping(write_cohort, tmp_path):
    path = write_cohort(RAW_COHORT)
    mapping = tmp_path / "mapping.yml"
    mapping.write_text(
        "group_column: race\n"
        "group_majority_value: Caucasian\n"
        "group_minority_value: African-American\n"
        "score_column: decile_score\n"
        "time_column: days\n"
        "event_column: event\n",
        encoding="utf-8",
    )
    code = main(["audit", "--input", str(path), "--mapping", str(mapping), "--dataset-id", "raw"])
    assert code == 0
    (run_dir,) = _run_dirs(tmp_path / "out")
    report = json.loads((run_dir / "report.json").read_text(encoding="utf-8"))
    assert report["metadata"]["dataset_id"] == "raw"
    assert [b["stratum"] for b in report["strata"]] == ["low"]
    assert report["strata"][0]["counts"] == {"Caucasian": 40, "African-American": 40}


def test_raw_quantizer_gives_one_block_per_score(write_cohort, tmp_path):
    path = write_cohort(RAW_COHORT)
    code = main([
        "curves", "--input", str(path), "--mapping", str(CONFIG_DIR / "mapping_example.yml"),
        "--quantizer", "raw",
    ])
    # в примере схемы другие имена столбцов
    assert code == 2

    mapping = tmp_path / "mapping.yml"
    mapping.write_text(
        "group_column: race\ngroup_majority_value: Caucasian\ngroup_minority_value: African-American\n"
        "score_column: decile_score\ntime_column: days\nevent_column: event\n",
        encoding="utf-8",
    )
    assert main(["curves", "--input", str(path), "--mapping", str(mapping), "--quantizer", "raw"]) == 0
    (run_dir,) = [d for d in _run_dirs(tmp_path / "out") if any(d.glob("curves_*.csv"))]
    assert sorted(p.name for p in run_dir.glob("curves_*.csv")) == ["curves_2.csv", "curves_3.csv", "curves_4.csv"]
    assert not (run_dir / "report.json").exists()


def test_all_degenerate_exits_3(write_cohort):
    path = write_cohort(
        "group,stratum,time_days,event\n"
        "majority,low,10,0\n"
        "minority,low,12,0\n"
        "majority,high,5,1\n"
    )
    assert main(["audit", "--input", str(path)]) == 3


@pytest.mark.parametrize("argv_tail", [
    ["--input", "does-not-exist.csv", "--mapping", "propublica"],
    ["--mapping", "propublica"],
])
def test_input_errors_exit_2(argv_tail, capsys):
    assert main(["audit", *argv_tail]) == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_mapping_exits_2(write_cohort):
    path = write_cohort("race,decile_score,days,event\nCaucasian,3,1,1\n")
    assert main(["audit", "--input", str(path), "--mapping", "no_such_preset"]) == 2


def test_invalid_alpha_exits_2(write_cohort):
    path = write_cohort("group,stratum,time_days,event\nmajority,low,1,1\nminority,low,2,1\n")
    assert main(["audit", "--input", str(path), "--alpha", "1.5"]) == 2


def test_unknown_subcommand_is_argparse_error():
    with pytest.raises(SystemExit) as exc_info:
        main(["explain"])
    assert exc_info.value.code == 2


def test_calibrate_rejects_zero_replications():
    assert main(["calibrate", "--dag-config", str(CONFIG_DIR / "dag_h0.yml"), "--replications", "0"]) == 2


def test_calibrate_writes_result(tmp_path, capsys):
    code = main([
        "calibrate", "--dag-config", str(CONFIG_DIR / "dag_h0.yml"),
        "--replications", "100", "--n-per-group", "40", "--seed", "3", "--workers", "2",
    ])
    assert code == 0
    (run_dir,) = _run_dirs(tmp_path / "out")
    result = json.loads((run_dir / "calibration.json").read_text(encoding="utf-8"))
    assert result["kind"] == "type1"
    assert result["replications"] == 100
    assert 0.0 <= result["rejection_rate"] <= 1.0
    assert "type1: rate=" in capsys.readouterr().out


def test_config_file_and_flag_precedence(tmp_path, write_cohort):
    path = write_cohort("group,stratum,time_days,event\nmajority,low,1,1\nminority,low,2,1\n")
    config = tmp_path / "audit.yml"
    config.write_text(
        f"input_path: {path}\nalpha: 0.01\nhorizons:\n  start: 14\n  step: 14\n",
        encoding="utf-8",
    )
    args = build_parser().parse_args(["audit", "--config", str(config), "--horizon-step", "7"])
    audit_config = config_from_args(args)
    assert audit_config.alpha == 0.01
    assert audit_config.horizons.start == 14
    assert audit_config.horizons.step == 7
    assert audit_config.mapping.preset == "normalized"

    with pytest.raises(UsageError):
        config_from_args(build_parser().parse_args(["audit", "--mapping", "propublica"]))


def test_score_column_and_show_pooled_flags(write_cohort):
    path = write_cohort("race,decile_score,v_decile_score,start,end,event\nCaucasian,3,2,0,10,1\n")
    args = build_parser().parse_args([
        "audit", "--input", str(path), "--mapping", "propublica",
        "--score-column", "v_decile_score", "--show-pooled",
    ])
    audit_config = config_from_args(args)
    assert audit_config.mapping.score_column == "v_decile_score"
    assert audit_config.mapping.preset == "propublica"
    assert audit_config.show_pooled is True

    args = build_parser().parse_args(["audit", "--input", str(path), "--mapping", "propublica"])
    assert config_from_args(args).show_pooled is False


def test_score_column_clash_exits_2(write_cohort):
    path = write_cohort("race,decile_score,start,end,event\nCaucasian,3,0,10,1\n")
    assert main(["audit", "--input", str(path), "--mapping", "propublica", "--score-column", "race"]) == 2


def test_audit_with_pooled_overlay(tmp_path):
    cohort = _simulate(tmp_path)
    assert main(["audit", "--input", str(cohort), "--horizon-step", "28", "--show-pooled"]) == 0
    (run_dir,) = _run_dirs(tmp_path / "out")
    assert 'id="curve-pooled"' in (run_dir / "survival_low.svg").read_text(encoding="utf-8")


def test_drop_invalid_rows_flag(tmp_path):
    cohort = _simulate(tmp_path)
    with open(cohort, "a", encoding="utf-8") as f:
        f.write("majority,low,soon,1\n")
    assert main(["audit", "--input", str(cohort), "--horizon-step", "28"]) == 2
    assert main(["audit", "--input", str(cohort), "--horizon-step", "28", "--drop-invalid-rows"]) == 0

    args = build_parser().parse_args(["audit", "--input", str(cohort), "--drop-invalid-rows"])
    assert config_from_args(args).drop_invalid_rows is True
