import json

import pytest
from hypothesis import given, settings, strategies as st

from auxeval.cli import run_command
from auxeval.core import AuxTriple, BenchRecord
from auxeval.dataio import (REPORT_COLUMNS, ReportRow, RunConfig,
                            load_bench_dataset, load_run_config,
                            parse_bench_line, serialize_bench_record,
                            write_report, write_sweep_csv)
from auxeval.errors import ContractError, InvalidInputError
from auxeval.estimate import naive_estimate, one_step_fixed
from auxeval.nuisance import ClampCounter

SAMPLE_LINE = ('{"id":"gsm8k-0001","question":"How many?","answer":"64",'
               '"ground_truth":"64","phi":1,'
               '"aux":[{"w1":"r1","w2":"r2","v":1},{"w1":"r3","w2":"r4","v":0},'
               '{"w1":"r5","w2":"r6","v":1}],"tau_pred":[0.8,0.6,0.4]}')


def test_parse_sample_line():
    record = parse_bench_line(SAMPLE_LINE, 1)
    assert record.id == "gsm8k-0001"
    assert len(record.aux) == 3 and len(record.tau_pred) == 3  # M = 2
    assert record.aux[0].v == 1 and record.tau_pred == (0.8, 0.6, 0.4)
    assert record.phi == 1


def test_round_trip_of_sample_line():
    record = parse_bench_line(SAMPLE_LINE, 1)
    again = parse_bench_line(serialize_bench_record(record), 1)
    assert again == record


_texts = st.text(
    st.characters(blacklist_categories=("Cs",), blacklist_characters="\n\r"),
    max_size=30)


@settings(max_examples=60)
@given(st.integers(1, 4), st.lists(_texts, min_size=7, max_size=7),
       st.integers(0, 1), st.lists(st.floats(0, 1), min_size=5, max_size=5),
       st.integers(0, 1))
def test_round_trip_of_generated_records(m, texts, phi, taus, v):
    aux = tuple(AuxTriple(texts[j % 7], texts[(j + 1) % 7], (v + j) % 2)
                for j in range(m + 1))
    record = BenchRecord(id=texts[0], x=texts[1], y=texts[2], g=texts[3],
                         phi=phi, aux=aux, tau_pred=tuple(taus[: m + 1]))
    line = serialize_bench_record(record)
    assert parse_bench_line(line, 1) == record


def _mutate(key, value):
    obj = json.loads(SAMPLE_LINE)
    if value is ...:
        del obj[key]
    else:
        obj[key] = value
    return json.dumps(obj)


@pytest.mark.parametrize("key,value,fragment", [
    ("tau_pred", ..., "tau_pred"),
    ("phi", 0.5, "phi"),
    ("phi", 2, "phi"),
    ("tau_pred", [0.8, 0.6], "does not match aux"),
    ("aux", [], "at least 2"),
    ("extra_key", 1, "unknown"),
    ("answer", 64, "string"),
    ("tau_pred", [0.8, 0.6, float("nan")], "finite"),
])
def test_contract_violations(key, value, fragment):
    with pytest.raises(ContractError) as err:
        parse_bench_line(_mutate(key, value), 7)
    assert fragment in str(err.value)
    assert "line 7" in str(err.value)


def test_bad_aux_entry_and_malformed_json():
    obj = json.loads(SAMPLE_LINE)
    obj["aux"][1]["v"] = 3
    with pytest.raises(ContractError):
        parse_bench_line(json.dumps(obj), 2)
    with pytest.raises(ContractError) as err:
        parse_bench_line("{not json", 5)
    assert "line 5" in str(err.value)


def test_tau_clamped_at_load(tmp_path, caplog):
    obj = json.loads(SAMPLE_LINE)
    obj["tau_pred"] = [1.2, 0.6, -0.4]
    counter = ClampCounter()
    record = parse_bench_line(json.dumps(obj), 1, counter)
    assert record.tau_pred == (1.0, 0.6, 0.0)
    assert counter.count == 2


def test_load_dataset_uniform_m(tmp_path):
    path = tmp_path / "data.jsonl"
    obj = json.loads(SAMPLE_LINE)
    obj["aux"] = obj["aux"][:2] * 3  # M = 5
    obj["tau_pred"] = [0.5] * 6
    path.write_text(SAMPLE_LINE + "\n" + json.dumps(obj) + "\n", encoding="utf-8")
    with pytest.raises(ContractError) as err:
        load_bench_dataset(path)
    assert "line 1" in str(err.value) and "line 2" in str(err.value)


def test_load_dataset_ok_and_empty(tmp_path):
    path = tmp_path / "data.jsonl"
    path.write_text(SAMPLE_LINE + "\n\n" + SAMPLE_LINE + "\n", encoding="utf-8")
    records = load_bench_dataset(path)
    assert len(records) == 2
    empty = tmp_path / "empty.jsonl"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(ContractError):
        load_bench_dataset(empty)


def _rows():
    naive = naive_estimate([1] * 6 + [0] * 4)
    records = [parse_bench_line(SAMPLE_LINE, 1)] * 3
    onestep, _ = one_step_fixed(records)
    return [ReportRow(model="demo", naive=naive, onestep=onestep, gt=0.5909)]


def test_write_report_contents_and_determinism(tmp_path):
    path = tmp_path / "report.csv"
    write_report(_rows(), path)
    first = path.read_bytes()
    lines = first.decode().strip().splitlines()
    assert lines[0] == ",".join(REPORT_COLUMNS)
    cells = lines[1].split(",")
    assert cells[0] == "demo" and cells[1] == "59.09" and cells[2] == "60.00"
    assert cells[3] == "70.00"  # one-step on the 0.7 fixture
    # improvement on the percent scale: |60-59.09| - |70-59.09|
    assert cells[5] == f"{abs(60 - 59.09) - abs(70 - 59.09):.2f}"
    write_report(_rows(), path)
    assert path.read_bytes() == first


def test_write_report_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    write_report([], path)
    assert path.read_text().strip() == ",".join(REPORT_COLUMNS)


def test_write_sweep_csv(tmp_path):
    from auxeval.ranking import run_ranking_experiment
    from auxeval.simulate import SimConfig
    cfg = SimConfig(n=60, m=2, sigma_sq_per_model=(0.5, 4.0), seed=3, trials=2)
    out = run_ranking_experiment(cfg, sweep_coordinate=0.5)
    path = tmp_path / "sweep.csv"
    write_sweep_csv("base_sigma", [out], path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "axis,axis_value,method,exact_match,kendall_mean,trials"
    assert len(lines) == 3
    assert lines[1].startswith("base_sigma,0.5,naive,")


def test_run_config_file_and_validation(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"n": 64, "seed": 9, "sigma_sq_per_model": [1.0, 2.0]}))
    cfg = load_run_config(path)
    assert cfg.n == 64 and cfg.seed == 9 and cfg.sigma_sq_per_model == (1.0, 2.0)
    assert cfg.m == 500  # untouched defaults
    path.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ContractError):
        load_run_config(path)
    with pytest.raises(InvalidInputError):
        RunConfig(level=1.5)


# --- CLI ---

def _write_sample(tmp_path, name="data.jsonl", lines=(SAMPLE_LINE,)):
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def test_cli_validate_ok_and_failure(tmp_path, capsys):
    path = _write_sample(tmp_path)
    assert run_command(["validate", str(path)]) == 0
    assert "1 records" in capsys.readouterr().out
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "x"}\n', encoding="utf-8")
    assert run_command(["validate", str(bad)]) == 1
    assert "missing required field" in capsys.readouterr().err
    assert run_command(["validate", str(tmp_path / "nope.jsonl")]) == 1


def test_cli_estimate_prints_fixture_value(tmp_path, capsys):
    path = _write_sample(tmp_path)
    assert run_command(["estimate", str(path)]) == 0
    out = capsys.readouterr().out
    assert "theta_hat=0.7000" in out
    assert "method=one_step_fixed" in out and "method=naive" in out


def test_cli_estimate_writes_report(tmp_path, capsys):
    path = _write_sample(tmp_path)
    out_csv = tmp_path / "report.csv"
    code = run_command(["estimate", str(path), "--gt", "0.64", "--model", "m1",
                        "--out", str(out_csv)])
    assert code == 0
    lines = out_csv.read_text().strip().splitlines()
    assert lines[1].startswith("m1,64.00,100.00,70.00,")


def test_cli_simulate_deterministic(capsys):
    argv = ["simulate", "--seed", "7", "--n", "120", "--m-samples", "4"]
    assert run_command(argv) == 0
    first = capsys.readouterr().out
    assert run_command(argv) == 0
    assert capsys.readouterr().out == first
    assert "method=naive" in first and "method=one_step_crossfit" in first


def test_cli_usage_errors(capsys):
    assert run_command(["no-such-command"]) == 2
    assert run_command(["simulate", "--bogus-flag"]) == 2
    assert run_command(["--help"]) == 0


def test_validate_and_estimate_accept_the_same_files(tmp_path, capsys):
    good = _write_sample(tmp_path, "good.jsonl")
    bad = _write_sample(tmp_path, "bad.jsonl",
                        lines=(SAMPLE_LINE, SAMPLE_LINE.replace('"phi":1', '"phi":3')))
    for path in (good, bad):
        validate_code = run_command(["validate", str(path)])
        estimate_code = run_command(["estimate", str(path)])
        capsys.readouterr()
        assert (validate_code == 0) == (estimate_code == 0)


def test_cli_rank_and_sweep(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 80, "m": 2, "trials": 2,
                               "sigma_sq_per_model": [0.5, 4.0], "seed": 3}))
    assert run_command(["rank", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "method=naive" in out and "exact_match=" in out
    sweep_csv = tmp_path / "sweep.csv"
    assert run_command(["sweep", "--config", str(cfg), "--axis", "sigma_eta",
                        "--grid", "0.4,1.2", "--out", str(sweep_csv)]) == 0
    lines = sweep_csv.read_text().strip().splitlines()
    assert len(lines) == 5  # header + 2 grid points x 2 methods
    assert lines[1].split(",")[0] == "sigma_eta"


def test_cli_flag_overrides_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 64, "m": 3, "seed": 1}))
    assert run_command(["simulate", "--config", str(cfg)]) == 0
    with_seed_1 = capsys.readouterr().out
    assert run_command(["simulate", "--config", str(cfg), "--seed", "2"]) == 0
    with_seed_2 = capsys.readouterr().out
    assert "n=64" in with_seed_1
    assert with_seed_1 != with_seed_2
