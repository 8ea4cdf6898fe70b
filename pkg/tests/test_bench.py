"""Experiment harness: configs, runner, export and CLI."""

from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from mmopt.bench import cli
from mmopt.bench.config import AlgorithmSpec, ExperimentConfig, ProblemSpec, load_config
from mmopt.bench.export import comparison_table, export, median_run, sci
from mmopt.bench.runner import RunRecord, _cell_paths, load_records, run_experiment
from mmopt.bench.stats import summarize
from mmopt.core import ConfigurationError
from mmopt.indicators import evaluate_archive
from mmopt.problems import make_problem, read_points, read_reference_set


def small_config(tmp: Path, **kw) -> ExperimentConfig:
    base = dict(
        problems=[ProblemSpec("polygon", 2)],
        algorithms=[AlgorithmSpec.parse("moead-mm-tch"), AlgorithmSpec.parse("moead-tch")],
        runs=3, population=20, budget=200, output_dir=str(tmp), reference_size=300,
    )
    base.update(kw)
    return ExperimentConfig(**base)


# ---------------------------------------------------------------- config

def test_algorithm_ids_round_trip():
    for text in ("moead-mm-tch", "moead-mm-pbi-mu6", "moead-tch", "moead-pbi", "moead-ad"):
        assert AlgorithmSpec.parse(text).id == text
    assert AlgorithmSpec.parse("moead-mm-tch-mu4").id == "moead-mm-tch"
    with pytest.raises(ConfigurationError):
        AlgorithmSpec.parse("nsga2")


def test_problem_spec_parse():
    assert ProblemSpec.parse("polygon-d6") == ProblemSpec("polygon", 6)
    assert ProblemSpec.parse("suf3").id == "suf3"
    with pytest.raises(ConfigurationError):
        ProblemSpec.parse("zdt1")


def test_toml_config(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text(
        'runs = 5\npopulation = 40\nbudget = 400\nbase_seed = 9\noutput_dir = "out"\nmu_sweep = [2, 6]\n'
        '[[problems]]\nname = "polygon"\nD = 4\n'
        '[[problems]]\nname = "sympart"\n'
        '[[algorithms]]\nname = "moead-mm-tch"\n'
        '[[algorithms]]\nkind = "moead"\nscalarizer = "pbi"\nT = 10\n'
    )
    cfg = load_config(path)
    assert cfg.runs == 5 and cfg.base_seed == 9 and cfg.seed_for(3) == 12
    assert [p.id for p in cfg.problems] == ["polygon-d4", "sympart"]
    assert [a.id for a in cfg.all_algorithms()] == ["moead-mm-tch", "moead-pbi", "moead-mm-tch-mu2", "moead-mm-tch-mu6"]
    assert cfg.algorithms[1].T == 10


@pytest.mark.parametrize("body", [
    'runs = 0\n[[problems]]\nname = "sympart"\n[[algorithms]]\nname = "moead-tch"\n',
    'runs = 2\n[[problems]]\nname = "nope"\n[[algorithms]]\nname = "moead-tch"\n',
    'runs = 2\n[[problems]]\nname = "sympart"\n[[algorithms]]\nname = "nope"\n',
    'colour = 2\n[[problems]]\nname = "sympart"\n[[algorithms]]\nname = "moead-tch"\n',
])
def test_bad_configs_rejected(tmp_path, body):
    path = tmp_path / "bad.toml"
    path.write_text(body)
    with pytest.raises(ConfigurationError):
        load_config(path)


# ---------------------------------------------------------------- runner

def test_cell_count(tmp_path):
    recs = run_experiment(small_config(tmp_path, runs=31))
    assert len(recs) == 62
    assert {(r.algorithm, r.run) for r in recs} == {(a, k) for a in ("moead-mm-tch", "moead-tch") for k in range(31)}
    assert [r.seed for r in recs[:3]] == [1, 2, 3]


def test_resume_runs_nothing_new(tmp_path, monkeypatch):
    cfg = small_config(tmp_path)
    first = run_experiment(cfg)
    import mmopt.bench.runner as runner
    monkeypatch.setattr(runner, "run_cell", lambda *a: pytest.fail("completed cell was rerun"))
    assert run_experiment(cfg) == first


def test_partial_directory_resumes(tmp_path):
    cfg = small_config(tmp_path)
    full = run_experiment(cfg)
    victim = _cell_paths(tmp_path, "moead-tch", "polygon-d2", 1)[0]
    victim.unlink()
    again = run_experiment(cfg)
    assert [(r.igdx, r.igd_plus, r.hv) for r in again] == [(r.igdx, r.igd_plus, r.hv) for r in full]


def test_determinism_and_seed_isolation(tmp_path):
    a = run_experiment(small_config(tmp_path / "a"))
    cfg = small_config(tmp_path / "b")
    cfg.algorithms = cfg.algorithms[::-1]
    b = run_experiment(cfg)
    key = lambda r: (r.algorithm, r.problem, r.run)
    assert {key(r): (r.igdx, r.igd_plus, r.hv) for r in a} == {key(r): (r.igdx, r.igd_plus, r.hv) for r in b}


def test_parallel_matches_serial(tmp_path):
    a = run_experiment(small_config(tmp_path / "a"))
    b = run_experiment(small_config(tmp_path / "b", jobs=2))
    assert [(r.igdx, r.igd_plus, r.hv) for r in a] == [(r.igdx, r.igd_plus, r.hv) for r in b]


def test_archive_round_trip_rescoring(tmp_path):
    cfg = small_config(tmp_path)
    recs = run_experiment(cfg)
    ref = read_reference_set(next((tmp_path / "refsets").glob("polygon-d2_*.txt")))
    for r in recs:
        header, X, F = read_points(tmp_path / r.archive_path)
        assert header["problem"] == r.problem and len(X) == r.archive_size
        rep = evaluate_archive(X, F, ref.decision_points, ref.objective_points)
        assert (rep.igdx, rep.igd_plus, rep.hv) == (r.igdx, r.igd_plus, r.hv)


def test_unknown_ids_fail_before_running(tmp_path):
    cfg = small_config(tmp_path, problems=[ProblemSpec("nope")])
    with pytest.raises(ConfigurationError):
        run_experiment(cfg)
    assert not (tmp_path / "records").exists()


def test_load_records(tmp_path):
    recs = run_experiment(small_config(tmp_path))
    assert sorted(load_records(tmp_path), key=lambda r: (r.algorithm, r.run)) == \
        sorted(recs, key=lambda r: (r.algorithm, r.run))


# ---------------------------------------------------------------- export

def test_sci_format():
    assert sci(0.012359) == "1.2359e-2"
    assert sci(4.4101) == "4.4101e+0"
    assert sci(246.7) == "2.4670e+2"


def test_median_run_picks_lower_median():
    recs = [RunRecord("a", "p", k, k, 0, 0, v, 1, 0, "") for k, v in enumerate([5.0, 1.0, 3.0, 2.0])]
    assert median_run(recs, "hv").run == 3


def test_export_files_and_table_layout(tmp_path):
    recs = run_experiment(small_config(tmp_path))
    s = summarize(recs, "moead-mm-tch")
    paths = export(s, recs, tmp_path)
    names = {p.name for p in paths}
    assert {"table_igdx.tsv", "table_igd_plus.tsv", "table_hv.tsv", "runs_long.tsv", "runs.jsonl",
            "visualization.tsv"} <= names
    assert "mu_sweep.tsv" not in names and not (tmp_path / "report" / "mu_sweep.tsv").exists()
    rows = [line.split("\t") for line in (tmp_path / "report" / "table_igdx.tsv").read_text().splitlines()]
    assert rows[0] == ["problem", "M", "D", "moead-mm-tch", "moead-tch"]
    assert rows[1][:3] == ["polygon", "6", "2"]
    assert rows[-1][0] == "+/−/≈"
    counts = [int(v) for v in rows[-1][4].split("/")]
    assert sum(counts) == len(s.problems)
    assert len((tmp_path / "report" / "runs_long.tsv").read_text().splitlines()) == 1 + 6 * 3
    assert len((tmp_path / "report" / "runs.jsonl").read_text().splitlines()) == 6


def test_baseline_against_itself_is_all_approx(tmp_path):
    recs = run_experiment(small_config(tmp_path))
    s = summarize(recs, "moead-tch")
    assert all(s.marks[("moead-tch", p, ind)] == "≈" for p in s.problems for ind in ("igdx", "igd_plus", "hv"))


def test_identical_configs_give_byte_identical_tables(tmp_path):
    outs = []
    for sub in ("a", "b"):
        recs = run_experiment(small_config(tmp_path / sub))
        export(summarize(recs, "moead-mm-tch"), recs, tmp_path / sub)
        outs.append((tmp_path / sub / "report" / "table_igdx.tsv").read_bytes())
    assert outs[0] == outs[1]


def test_mu_sweep_cells(tmp_path):
    cfg = small_config(tmp_path, algorithms=[], mu_sweep=[2, 3, 4, 5, 6], runs=1, population=24, budget=48,
                       problems=[ProblemSpec("polygon", d) for d in (2, 4, 6, 8, 10)],
                       baseline="moead-mm-tch-mu4", reference_size=200)
    recs = run_experiment(cfg)
    # one run per cell is too few for the rank-sum test, but curves still come out
    s = summarize(recs, "moead-mm-tch-mu4")
    assert len(s.cells) == 25
    export(s, recs, tmp_path)
    rows = (tmp_path / "report" / "mu_sweep.tsv").read_text().splitlines()
    assert len(rows) == 26
    assert {tuple(r.split("\t")[1:3]) for r in rows[1:]} == {(str(d), str(m)) for d in (2, 4, 6, 8, 10)
                                                             for m in (2, 3, 4, 5, 6)}


def test_polygon_archive_reaches_every_hexagon(tmp_path):
    cfg = small_config(tmp_path, algorithms=[AlgorithmSpec.parse("moead-mm-tch")], runs=1,
                       population=100, budget=10_000)
    recs = run_experiment(cfg)
    export(summarize(recs, "moead-mm-tch"), recs, tmp_path)
    _, X, _ = read_points(tmp_path / "report" / "archives" / "moead-mm-tch__polygon-d2__median_hv.txt")
    assert set(make_problem("polygon").contains(X).tolist()) >= {0, 1, 2, 3}


# ---------------------------------------------------------------- CLI

def test_cli_run_report_and_score(tmp_path, capsys):
    out = tmp_path / "cli"
    rc = cli.main(["run", "--problem", "sympart", "--algorithm", "moead-mm-tch", "--algorithm", "moead-tch",
                   "--runs", "3", "--pop", "20", "--budget", "200", "--out", str(out)])
    assert rc == 0
    assert "igdx" in capsys.readouterr().out
    assert len(list((out / "records").rglob("*.json"))) == 6

    assert cli.main(["report", "--out", str(out)]) == 0
    assert (out / "report" / "table_igdx.tsv").exists()

    rec = RunRecord.load(next((out / "records").rglob("run000.json")))
    ref = next((out / "refsets").glob("*.txt"))
    capsys.readouterr()
    assert cli.main(["score", str(out / rec.archive_path), "--refset", str(ref)]) == 0
    scored = json.loads(capsys.readouterr().out)
    assert (scored["igdx"], scored["igd_plus"], scored["hv"]) == (rec.igdx, rec.igd_plus, rec.hv)


def test_cli_refset(tmp_path, capsys):
    assert cli.main(["refset", "--problem", "polygon", "--dim", "4", "-n", "50", "--out", str(tmp_path)]) == 0
    path = Path(capsys.readouterr().out.strip())
    header, X, F = read_points(path)
    assert X.shape == (50, 4) and F.shape == (50, 6)


def test_cli_config_with_overrides(tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text('runs = 31\npopulation = 300\n[[problems]]\nname = "ssuf1"\n'
                   '[[algorithms]]\nname = "moead-mm-tch"\n[[algorithms]]\nname = "moead-ad"\n')
    out = tmp_path / "o"
    assert cli.main(["run", "--config", str(cfg), "--runs", "3", "--pop", "20", "--budget", "100",
                     "--seed", "7", "--out", str(out)]) == 0
    recs = load_records(out)
    assert len(recs) == 6 and sorted({r.seed for r in recs}) == [7, 8, 9]


def test_cli_sweep(tmp_path):
    out = tmp_path / "s"
    assert cli.main(["sweep", "--mu", "2", "4", "--dims", "2", "--runs", "3", "--pop", "24", "--budget", "100",
                     "--out", str(out)]) == 0
    assert (out / "report" / "mu_sweep.tsv").exists()


def test_cli_configuration_error_exit_code(tmp_path, capsys):
    assert cli.main(["run", "--problem", "sympart", "--algorithm", "moead-tch", "--runs", "0",
                     "--out", str(tmp_path)]) == 2
    assert "configuration error" in capsys.readouterr().err
