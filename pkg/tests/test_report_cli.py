import dataclasses
import json

import numpy as np
import pytest

from csgmeasure import DataError, csg_pipeline, generate_blobs, load, save_csv
from csgmeasure.cli import main
from csgmeasure.report import (
    FORMAT_VERSION, ComplexityReport, report_from_json, report_to_json, spectrum_csv,
)
from csgmeasure.similarity import SimilarityParams


@pytest.fixture()
def blob_csv(tmp_path):
    path = tmp_path / "blobs.csv"
    save_csv(generate_blobs(3, 40, 2, 3.0, seed=1), path)
    return path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def strip_time(text):
    data = json.loads(text)
    data.pop("wall_time_seconds")
    return json.dumps(data, sort_keys=True)


# -------------------------------------------------------------- compute ----

def test_compute_requires_input(capsys):
    code, _, err = run(["compute"], capsys)
    assert code == 1 and "usage" in err


def test_unknown_flag_is_usage_error(capsys):
    assert main(["compute", "--input", "x", "--bogus"]) == 1


def test_compute_writes_report(blob_csv, capsys):
    code, out, _ = run(["compute", "--input", blob_csv, "--m-samples", 20], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["csg"] >= 0
    assert data["format_version"] == FORMAT_VERSION
    assert data["params"]["M"] == 20 and data["params"]["k"] == 3
    assert data["evaluation_count"] == 3 * 3 * 20
    report_from_json(out).check_consistency()


def test_compute_is_deterministic(blob_csv, capsys):
    argv = ["compute", "--input", blob_csv, "--seed", 5, "--m-samples", 25]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert strip_time(a) == strip_time(b)
    assert a.replace(str(json.loads(a)["wall_time_seconds"]), "") == \
        b.replace(str(json.loads(b)["wall_time_seconds"]), "")


def test_compute_outputs_to_files(blob_csv, tmp_path, capsys):
    out, spec = tmp_path / "r.json", tmp_path / "s.csv"
    code, stdout, _ = run(["compute", "--input", blob_csv, "--output", out,
                           "--spectrum-csv", spec], capsys)
    assert code == 0 and stdout == ""
    lines = spec.read_text().splitlines()
    assert lines[0] == "index,eigenvalue" and len(lines) == 4


def test_compute_data_errors_exit_2(tmp_path, capsys):
    assert run(["compute", "--input", tmp_path / "missing.csv"], capsys)[0] == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("label,f0\na,1.0\nb,oops\n")
    code, _, err = run(["compute", "--input", bad], capsys)
    assert code == 2 and "bad.csv:3" in err


def test_compute_numerical_error_exits_3(tmp_path, capsys, monkeypatch):
    import csgmeasure.cli as cli
    from csgmeasure import NumericalError

    def boom(*a, **k):
        raise NumericalError("forced")

    monkeypatch.setattr(cli, "csg_pipeline", boom)
    path = tmp_path / "x.csv"
    save_csv(generate_blobs(2, 5, 1, 1.0), path)
    assert run(["compute", "--input", path], capsys)[0] == 3


def test_binary_input(tmp_path, capsys):
    path = tmp_path / "blobs.bin"
    from csgmeasure import save
    save(generate_blobs(3, 20, 2, 2.0, seed=0), path)
    code, out, _ = run(["compute", "--input", path, "--m-samples", 10], capsys)
    assert code == 0 and json.loads(out)["params"]["effective_M"] == [10, 10, 10]


# ---------------------------------------------------------------- sweep ----

@pytest.mark.parametrize("ratios", ["0", "1.5", "0.5,0"])
def test_sweep_rejects_bad_ratios(blob_csv, ratios, capsys):
    assert run(["sweep", "--input", blob_csv, "--ratios", ratios], capsys)[0] == 1


def test_single_ratio_sweep_matches_compute(blob_csv, capsys):
    _, report, _ = run(["compute", "--input", blob_csv, "--m-samples", 15], capsys)
    _, swept, _ = run(["sweep", "--input", blob_csv, "--m-samples", 15, "--ratios", "1.0"],
                      capsys)
    assert json.loads(swept)["points"][0]["csg_mean"] == json.loads(report)["csg"]


def test_five_point_sweep_csv(blob_csv, tmp_path, capsys):
    csv_path = tmp_path / "sweep.csv"
    code, out, _ = run(["sweep", "--input", blob_csv, "--m-samples", 10, "--csv", csv_path],
                       capsys)
    assert code == 0 and out == ""
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "ratio,count_per_class,csg_mean,csg_std"
    assert len(rows) == 1 + 5


# ------------------------------------------------------------------ mds ----

def identity_report(tmp_path):
    ds = generate_blobs(3, 20, 2, 20.0, seed=0)
    report = csg_pipeline(ds, SimilarityParams(M=10))
    report = dataclasses.replace(report, W=np.eye(3))
    path = tmp_path / "report.json"
    path.write_text(report_to_json(report))
    return path


def test_mds_identity_report_is_equilateral(tmp_path, capsys):
    code, out, _ = run(["mds", "--report", identity_report(tmp_path)], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "class,x,y"
    rows = lines[2:]
    assert len(rows) == 3
    Y = np.array([[float(v) for v in r.split(",")[1:]] for r in rows])
    D = np.sqrt(((Y[:, None] - Y[None]) ** 2).sum(axis=2))
    np.testing.assert_allclose(D[np.triu_indices(3, 1)], 1.0, atol=1e-6)


def test_mds_from_dataset(blob_csv, capsys):
    code, out, _ = run(["mds", "--input", blob_csv, "--m-samples", 10], capsys)
    assert code == 0 and len(out.splitlines()) == 2 + 3


def test_mds_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["mds", "--report", bad], capsys)[0] == 2
    assert run(["mds"], capsys)[0] == 1
    assert run(["mds", "--report", tmp_path / "absent.json"], capsys)[0] == 2


# ------------------------------------------------------------ baselines ----

def test_baselines_all_measures(blob_csv, capsys):
    code, out, _ = run(["baselines", "--input", blob_csv], capsys)
    assert code == 0
    data = json.loads(out)
    assert {"f1", "n1", "n2", "n3", "t2"} <= set(data["scores"])
    assert data["scores"]["t2"] == 120 / 2 == data["N"] / data["d"]
    assert data["space"] == "raw"


def test_baselines_subset_and_unknown(blob_csv, capsys):
    code, out, _ = run(["baselines", "--input", blob_csv, "--measures", "n3,t2",
                        "--on-embedding"], capsys)
    data = json.loads(out)
    assert code == 0 and set(data["scores"]) == {"n3", "t2"} and data["space"] == "embedding"
    assert run(["baselines", "--input", blob_csv, "--measures", "f1,zz"], capsys)[0] == 1


# ---------------------------------------------------------------- synth ----

def test_synth_clean_blobs_and_counts(tmp_path, capsys):
    code, out, _ = run(["synth", "--classes", 4, "--per-class", 25, "--dim", 3,
                        "--seed", 2], capsys)
    assert code == 0
    path = tmp_path / "s.csv"
    path.write_text(out)
    ds = load(path)
    assert ds.K == 4 and ds.d == 3 and list(ds.class_sizes()) == [25] * 4
    clean = generate_blobs(4, 25, 3, 6.0, 1.0, seed=2)
    assert ds == clean


def test_synth_csv_reloads_losslessly(tmp_path, capsys):
    path = tmp_path / "s.csv"
    run(["synth", "--classes", 3, "--per-class", 10, "--swap-classes", 2,
         "--output", path], capsys)
    ds = load(path)
    again = tmp_path / "again.csv"
    save_csv(ds, again)
    assert again.read_bytes() == path.read_bytes()
    assert load(again) == ds


def test_synth_swap_changes_labels_only(tmp_path, capsys):
    _, clean, _ = run(["synth", "--classes", 3, "--per-class", 20], capsys)
    _, swapped, _ = run(["synth", "--classes", 3, "--per-class", 20, "--swap-classes", 3,
                         "--swap-frac", 0.5], capsys)
    a = [line.split(",", 1) for line in clean.splitlines()]
    b = [line.split(",", 1) for line in swapped.splitlines()]
    assert [x[1] for x in a] == [x[1] for x in b]
    assert sum(x[0] != y[0] for x, y in zip(a, b)) == 30


def test_synth_binary_output(tmp_path, capsys):
    path = tmp_path / "s.bin"
    assert run(["synth", "--classes", 2, "--per-class", 5, "--output", path], capsys)[0] == 0
    assert path.read_bytes()[:4] == b"CSGE"
    assert load(path).N == 10


def test_synth_flag_validation(capsys):
    assert run(["synth", "--swap-classes", 1], capsys)[0] == 1
    assert run(["synth", "--classes", 3, "--swap-classes", 4], capsys)[0] == 1
    assert run(["synth", "--swap-frac", 1.5], capsys)[0] == 1
    assert run(["synth", "--per-class", 0], capsys)[0] == 1


# --------------------------------------------------------------- report ----

def test_report_round_trip_and_future_version():
    report = csg_pipeline(generate_blobs(3, 20, 2, 2.0), SimilarityParams(M=10))
    text = report_to_json(report)
    again = report_from_json(text)
    assert report_to_json(again) == text
    data = json.loads(text)
    data["format_version"] = FORMAT_VERSION + 1
    with pytest.raises(DataError, match="newer"):
        report_from_json(json.dumps(data))
    del data["format_version"]
    with pytest.raises(DataError):
        report_from_json(json.dumps(data))


def test_report_consistency_check():
    report = csg_pipeline(generate_blobs(3, 20, 2, 2.0), SimilarityParams(M=10))
    report.check_consistency()
    with pytest.raises(DataError, match="csg"):
        dataclasses.replace(report, csg=report.csg + 1).check_consistency()
    with pytest.raises(DataError, match="evaluation_count"):
        dataclasses.replace(report, evaluation_count=1).check_consistency()


def test_spectrum_csv():
    assert spectrum_csv([0.0, 1.5]) == "index,eigenvalue\n0,0.0\n1,1.5\n"


def test_help_documents_defaults(capsys):
    for cmd in ("compute", "sweep", "mds", "baselines", "synth"):
        assert main([cmd, "--help"]) == 0
    main_help = capsys.readouterr().out
    assert "default: 100" in main_help and "default: 3" in main_help


def test_module_entry_point(blob_csv):
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "csgmeasure", "compute", "--input",
                           str(blob_csv), "--m-samples", "5"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "csg" in json.loads(proc.stdout)
