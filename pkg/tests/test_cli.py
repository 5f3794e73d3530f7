import json
import subprocess
import sys

import pytest

from refdoc.cli import main
from refdoc.corpus import save_corpus
from refdoc.model_io import save_model
from refdoc.synthetic import generate_corpus


@pytest.fixture(scope="module")
def corpus_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "corpus.jsonl"
    save_corpus(generate_corpus(seed=1, per_class=25), path)
    return path


@pytest.fixture(scope="module")
def model_path(tmp_path_factory, nb_model):
    path = tmp_path_factory.mktemp("model") / "model.json"
    save_model(nb_model, path)
    return path


def test_unknown_flag_exits_1_with_clean_stdout(capsys):
    assert main(["--definitely-not-a-flag"]) == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "usage" in captured.err


def test_no_command_exits_1(capsys):
    assert main([]) == 1
    assert capsys.readouterr().out == ""


def test_unknown_subcommand_exits_1(capsys):
    assert main(["frobnicate"]) == 1


def test_missing_corpus_is_a_data_error(capsys, tmp_path):
    assert main(["ingest", str(tmp_path / "nope.jsonl")]) == 2


def test_malformed_corpus_is_a_data_error(capsys, tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{not json}\n")
    assert main(["ingest", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_ingest_prints_class_counts(corpus_path, capsys):
    assert main(["ingest", str(corpus_path)]) == 0
    out = capsys.readouterr().out
    assert "150 records" in out
    assert "RenameMethod" in out and "25" in out


def test_sample_writes_balanced_subset(corpus_path, tmp_path, capsys):
    out_path = tmp_path / "sample.jsonl"
    assert main(["sample", str(corpus_path), "--per-class", "10",
                 "--seed", "3", "--out", str(out_path)]) == 0
    assert sum(1 for _ in open(out_path)) == 60


def test_train_then_predict(corpus_path, tmp_path, capsys):
    model_out = tmp_path / "m.json"
    assert main(["train", str(corpus_path), "--algo", "nb",
                 "--out", str(model_out)]) == 0
    capsys.readouterr()
    assert main(["predict", "Renamed getter for readability",
                 "--model", str(model_out)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "RenameMethod"


def test_predict_reads_stdin_and_env_model(model_path, capsys, monkeypatch):
    monkeypatch.setenv("REFDOC_MODEL", str(model_path))
    monkeypatch.setattr("sys.stdin", __import__("io").StringIO(
        "Extract common code into helper"))
    assert main(["predict"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "ExtractMethod"


def test_predict_scores_flag_outputs_json(model_path, capsys):
    assert main(["predict", "inline the trivial method", "--model",
                 str(model_path), "--scores"]) == 0
    lines = capsys.readouterr().out.splitlines()
    scores = json.loads(lines[1])
    assert abs(sum(scores.values()) - 1.0) <= 1e-9


def test_predict_without_model_is_a_data_error(capsys, monkeypatch):
    monkeypatch.delenv("REFDOC_MODEL", raising=False)
    assert main(["predict", "some message"]) == 2


def test_evaluate_prints_report_table(corpus_path, tmp_path, capsys):
    json_out = tmp_path / "report.json"
    assert main(["evaluate", str(corpus_path), "--algo", "nb",
                 "--folds", "3", "--json", str(json_out)]) == 0
    out = capsys.readouterr().out
    assert "Refactoring type" in out
    assert "macro" in out
    payload = json.loads(json_out.read_text())
    assert payload["folds"] == 3
    assert set(payload["per_class"]) == {
        "ExtractMethod", "InlineMethod", "MoveMethod", "PullUpMethod",
        "PushDownMethod", "RenameMethod"}


def test_evaluate_gbt_table_regression(corpus_path, capsys):
    # frozen from the first run: deterministic given (corpus, seed, folds)
    assert main(["evaluate", str(corpus_path), "--algo", "gbt",
                 "--folds", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["Refactoring", "type", "P", "R", "F1"]
    assert len(lines) == 9  # header, rule, six classes, macro
    assert lines[-1].startswith("macro")


def test_baseline_message_mode(capsys):
    assert main(["baseline", "the movie was moved"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "MoveMethod"


def test_baseline_no_match(capsys):
    assert main(["baseline", "Change name of `Decorator' to `Events'"]) == 0
    assert capsys.readouterr().out.strip() == "no-match"


def test_baseline_corpus_mode(corpus_path, capsys):
    assert main(["baseline", "--corpus", str(corpus_path)]) == 0
    assert "Refactoring type" in capsys.readouterr().out


def test_terms_subcommand(corpus_path, capsys):
    assert main(["terms", str(corpus_path), "--class", "RenameMethod",
                 "--n", "2", "--top", "5"]) == 0
    out = capsys.readouterr().out
    assert "method name" in out


def test_terms_unknown_class_is_a_data_error(corpus_path, capsys):
    assert main(["terms", str(corpus_path), "--class", "Nonsense"]) == 2


def test_inconsistency_subcommand(tmp_path, none_model, capsys):
    corpus = tmp_path / "rq4.jsonl"
    save_corpus(generate_corpus(seed=5, per_class=10, include_none=True),
                corpus)
    model_file = tmp_path / "none_model.json"
    save_model(none_model, model_file)
    json_out = tmp_path / "rq4.json"
    assert main(["inconsistency", str(corpus), "--model", str(model_file),
                 "--json", str(json_out)]) == 0
    out = capsys.readouterr().out
    for case in ("Consistent", "DocMissing", "CodeMissing", "TypeMismatch"):
        assert case in out
    payload = json.loads(json_out.read_text())
    assert payload["total"] == 70


def test_inconsistency_refuses_model_without_none(corpus_path, model_path,
                                                  capsys):
    assert main(["inconsistency", str(corpus_path), "--model",
                 str(model_path)]) == 2


def test_train_include_none_requires_none_rows(corpus_path, tmp_path, capsys):
    assert main(["train", str(corpus_path), "--algo", "nb", "--include-none",
                 "--out", str(tmp_path / "x.json")]) == 2


def test_module_entry_point_help():
    proc = subprocess.run([sys.executable, "-m", "refdoc", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "usage" in proc.stdout


def test_module_entry_point_unknown_flag_exit_code():
    proc = subprocess.run([sys.executable, "-m", "refdoc", "--nope"],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert proc.stdout == ""


def test_module_entry_point_predict(model_path):
    proc = subprocess.run(
        [sys.executable, "-m", "refdoc", "predict",
         "Renamed getter for readability", "--model", str(model_path)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "RenameMethod"
