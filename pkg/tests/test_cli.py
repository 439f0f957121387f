import json

import pytest

from cli.arguments import parse_args
from cli.tasks import TaskFileError, import_bigbench, load_task
from constants.cli_constants import CliVerbs
from config.settings import reset_settings
from core.errors import ConfigValidationError
from core.io import read_examples, read_json, write_examples
from core.types import DatasetRef, TransformedExample, provenance_for
from main import main
from tests.conftest import TOY_CONFIG, TOY_CORPUS, TOY_TASK, TOY_TRANSCRIPT


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("LLM_API_KEY", "PIPELINE_TARGET_EXAMPLE_COUNT", "PIPELINE_RETRIEVAL_K", "PIPELINE_CACHE_DIR"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


def run_args(out, cache, *extra) -> list[str]:
    return ["run", "--task", str(TOY_TASK), "--corpus", str(TOY_CORPUS), "--mock-transcript", str(TOY_TRANSCRIPT),
            "--config", str(TOY_CONFIG), "--out", str(out), "--cache-dir", str(cache), *extra]


@pytest.fixture
def toy_run(tmp_path):
    out = tmp_path / "run"
    assert main(run_args(out, tmp_path / "cache")) == 0
    return out


def example(text: str, index: int) -> TransformedExample:
    return TransformedExample(input=text, output="o",
                              provenance=provenance_for(DatasetRef(name="toy", config="default"), index))


# argument parsing

def test_parse_args_layers(tmp_path):
    command = parse_args(["run", "--task", str(TOY_TASK), "--corpus", str(TOY_CORPUS), "--out", str(tmp_path),
                          "--config", str(TOY_CONFIG), "--target-count", "50"],
                         environ={"PIPELINE_RETRIEVAL_K": "3", "PIPELINE_MAX_DATASETS": "2"})
    assert command.verb == CliVerbs.RUN
    assert command.config.target_example_count == 50
    assert command.config.retrieval_k == 3
    assert command.config.max_datasets == 2
    assert command.config.self_consistency_votes == 5
    assert not hasattr(command.args, "target_example_count")
    assert command.args.corpus == TOY_CORPUS


def test_flag_beats_environment(tmp_path):
    command = parse_args(["dedup", "--data", str(tmp_path / "d.jsonl"), "--retrieval-k", "9"],
                         environ={"PIPELINE_RETRIEVAL_K": "3"})
    assert command.config.retrieval_k == 9


def test_boolean_flags(tmp_path):
    command = parse_args(["dedup", "--data", str(tmp_path / "d.jsonl"), "--no-fallback-to-retrieval-order"],
                         environ={})
    assert command.config.fallback_to_retrieval_order is False


def test_invalid_config_names_the_field(tmp_path):
    with pytest.raises(ConfigValidationError) as info:
        parse_args(["dedup", "--data", str(tmp_path / "d.jsonl"), "--failure-rate-threshold", "0"], environ={})
    assert info.value.field == "failure_rate_threshold"


def test_threshold_out_of_range(tmp_path):
    with pytest.raises(ConfigValidationError):
        parse_args(["dedup", "--data", str(tmp_path / "d.jsonl"), "--threshold", "1.5"], environ={})


def test_zero_target_count_exits_1(tmp_path, capsys):
    assert main(run_args(tmp_path / "out", tmp_path / "cache", "--target-count", "0")) == 1
    assert "target_example_count" in capsys.readouterr().err


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    assert "run" in capsys.readouterr().out


def test_unknown_verb_exits_2():
    assert main(["frobnicate"]) == 2


def test_run_without_corpus_exits_1(tmp_path):
    args = ["run", "--task", str(TOY_TASK), "--mock-transcript", str(TOY_TRANSCRIPT), "--out", str(tmp_path)]
    assert main(args) == 1


def test_missing_api_key_exits_1(tmp_path, capsys):
    args = ["run", "--task", str(TOY_TASK), "--corpus", str(TOY_CORPUS), "--out", str(tmp_path)]
    assert main(args) == 1
    assert "LLM_API_KEY" in capsys.readouterr().err


# end to end over the toy corpus

def test_run_end_to_end(capsys, toy_run):
    examples = read_examples(toy_run / "data.jsonl")
    assert len(examples) == 100
    assert len({e.provenance.dataset for e in examples}) >= 2
    report = read_json(toy_run / "report.json")
    assert report["totals"]["produced"] == 100
    assert (toy_run / "checkpoint.json").is_file()
    assert "100 examples written" in capsys.readouterr().out


def test_run_is_byte_identical(tmp_path):
    assert main(run_args(tmp_path / "a", tmp_path / "cache_a")) == 0
    assert main(run_args(tmp_path / "b", tmp_path / "cache_b")) == 0
    assert (tmp_path / "a" / "data.jsonl").read_bytes() == (tmp_path / "b" / "data.jsonl").read_bytes()


def test_run_with_saved_index(tmp_path):
    index = tmp_path / "index.json"
    assert main(["index", "build", "--corpus", str(TOY_CORPUS), "--out", str(index)]) == 0
    assert len(read_json(index)["entries"]) == 6
    assert main(run_args(tmp_path / "out", tmp_path / "cache", "--index", str(index))) == 0
    assert len(read_examples(tmp_path / "out" / "data.jsonl")) == 100


def test_index_from_another_embedder_is_rejected(tmp_path):
    index = tmp_path / "index.json"
    assert main(["index", "build", "--corpus", str(TOY_CORPUS), "--out", str(index),
                 "--embedding-dimension", "64"]) == 0
    assert main(run_args(tmp_path / "out", tmp_path / "cache", "--index", str(index))) == 1


def test_rerank_none_without_fallback_exits_1(tmp_path):
    transcript = json.loads(TOY_TRANSCRIPT.read_text(encoding="utf-8"))
    transcript["entries"] = [{"pattern": "most relevant dataset for this task is:$", "response": "NONE"},
                             *transcript["entries"]]
    path = tmp_path / "none.json"
    path.write_text(json.dumps(transcript), encoding="utf-8")
    args = ["run", "--task", str(TOY_TASK), "--corpus", str(TOY_CORPUS), "--mock-transcript", str(path),
            "--config", str(TOY_CONFIG), "--out", str(tmp_path / "out"), "--cache-dir", str(tmp_path / "cache"),
            "--no-fallback-to-retrieval-order"]
    assert main(args) == 1


def test_retrieve_prints_ranking_and_winner(tmp_path, capsys):
    args = ["retrieve", "--task", str(TOY_TASK), "--corpus", str(TOY_CORPUS), "--mock-transcript",
            str(TOY_TRANSCRIPT), "--config", str(TOY_CONFIG), "--cache-dir", str(tmp_path)]
    assert main(args) == 0
    out = capsys.readouterr().out
    assert "code_snippets" in out
    assert "reranker winner: code_snippets:default" in out


def test_transform_single_dataset(tmp_path):
    args = ["transform", "--task", str(TOY_TASK), "--dataset", "python_functions:default", "--corpus",
            str(TOY_CORPUS), "--mock-transcript", str(TOY_TRANSCRIPT), "--config", str(TOY_CONFIG),
            "--out", str(tmp_path / "out"), "--cache-dir", str(tmp_path / "cache"), "--target-count", "30"]
    assert main(args) == 0
    examples = read_examples(tmp_path / "out" / "data.jsonl")
    assert len(examples) == 30
    assert {e.provenance.dataset for e in examples} == {"python_functions"}


def test_transform_bare_dataset_name_uses_default_config(tmp_path):
    args = ["transform", "--task", str(TOY_TASK), "--dataset", "python_functions", "--corpus", str(TOY_CORPUS),
            "--mock-transcript", str(TOY_TRANSCRIPT), "--config", str(TOY_CONFIG), "--out", str(tmp_path / "out"),
            "--cache-dir", str(tmp_path / "cache"), "--target-count", "30"]
    assert main(args) == 0
    assert len(read_examples(tmp_path / "out" / "data.jsonl")) == 30
    assert list(read_json(tmp_path / "out" / "report.json")["datasets"]) == ["python_functions:default"]


def test_retrieve_with_unembeddable_instruction_exits_1(tmp_path, capsys):
    task = tmp_path / "punct.json"
    task.write_text(json.dumps({"task_id": "punct", "instruction": "?!",
                                "examples": [{"input": "a", "output": "b"}]}), encoding="utf-8")
    args = ["retrieve", "--task", str(task), "--corpus", str(TOY_CORPUS), "--config", str(TOY_CONFIG),
            "--no-rerank"]
    assert main(args) == 1
    assert "no embeddable tokens" in capsys.readouterr().err


# analysis verbs

def test_analyze_writes_quality_next_to_data(toy_run, capsys):
    assert main(["analyze", "--data", str(toy_run / "data.jsonl"), "--task", str(TOY_TASK)]) == 0
    quality = read_json(toy_run / "quality.json")
    assert quality["uniqueness"]["threshold"] == 0.8
    assert quality["uniqueness"]["total"] == 100
    assert quality["difficulty"] is None
    assert "unique fraction" in capsys.readouterr().out


def test_analyze_with_judge_and_export(toy_run, tmp_path):
    out = tmp_path / "q.json"
    exported = tmp_path / "inputs.txt"
    args = ["analyze", "--data", str(toy_run / "data.jsonl"), "--threshold", "0.7", "--out", str(out), "--judge",
            "--mock-transcript", str(TOY_TRANSCRIPT), "--export-inputs", str(exported)]
    assert main(args) == 0
    difficulty = read_json(out)["difficulty"]
    assert sum(difficulty["scores"].values()) + difficulty["unparsed"] == 100
    assert len(exported.read_text(encoding="utf-8").splitlines()) == 100


def test_analyze_bad_record_exits_1(tmp_path):
    data = tmp_path / "bad.jsonl"
    data.write_text('{"input": "x"}\n', encoding="utf-8")
    assert main(["analyze", "--data", str(data)]) == 1


def test_dedup_verb(tmp_path, capsys):
    data = tmp_path / "data.jsonl"
    write_examples(data, [example("print ( x )", 0), example("print ( x )", 1), example("for y in range", 2)])
    out = tmp_path / "deduped.jsonl"
    assert main(["dedup", "--data", str(data), "--threshold", "0.7", "--out", str(out)]) == 0
    assert [e.provenance.source_index for e in read_examples(out)] == [0, 2]
    assert len(read_examples(data)) == 3
    assert "kept 2 of 3" in capsys.readouterr().out


def test_report_verb(toy_run, capsys):
    assert main(["report", "--report", str(toy_run / "report.json")]) == 0
    out = capsys.readouterr().out
    assert "code_snippets:default" in out
    assert '"produced": 100' in out


def test_report_with_broken_counters_exits_1(tmp_path):
    path = tmp_path / "report.json"
    path.write_text(json.dumps({"task_id": "t", "datasets": {"toy:default": {
        "rows_attempted": 5, "rows_succeeded": 1, "rows_null": 1, "rows_malformed": 1, "produced": 1}}}))
    assert main(["report", "--report", str(path)]) == 1


# task files

BIGBENCH = {
    "name": "code_line_description",
    "description": "Describe what a line of Python code does.",
    "keywords": ["code", "natural language generation"],
    "examples": [
        {"input": "x = 1", "target": "Assigns 1 to x."},
        {"input": "print(x)", "target": ["Prints x.", "Outputs x."]},
        {"input": "", "target": "skipped"},
        {"input": "pass", "target_scores": {"a": 1}},
    ],
}


def test_import_bigbench():
    task = import_bigbench(BIGBENCH, "code_line_description")
    assert task.instruction == "Describe what a line of Python code does."
    assert [(e.input, e.output) for e in task.examples] == [("x = 1", "Assigns 1 to x."), ("print(x)", "Prints x.")]
    assert task.tags == ["code", "natural language generation"]
    assert len(import_bigbench(BIGBENCH, "t", max_examples=1).examples) == 1


def test_import_bigbench_without_examples():
    with pytest.raises(TaskFileError):
        import_bigbench({"description": "d", "examples": []}, "t")


def test_task_import_verb(tmp_path):
    source = tmp_path / "bb.json"
    source.write_text(json.dumps(BIGBENCH), encoding="utf-8")
    out = tmp_path / "task.json"
    assert main(["task", "import-bigbench", "--input", str(source), "--out", str(out)]) == 0
    task = load_task(out)
    assert task.task_id == "bb"
    assert len(task.examples) == 2


def test_load_task_defaults_id_to_stem(tmp_path):
    path = tmp_path / "my_task.json"
    path.write_text(json.dumps({"instruction": "Do it.", "examples": [{"input": "a", "output": "b"}]}))
    assert load_task(path).task_id == "my_task"


def test_load_task_errors(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(TaskFileError):
        load_task(path)
    with pytest.raises(TaskFileError):
        load_task(tmp_path / "missing.json")
