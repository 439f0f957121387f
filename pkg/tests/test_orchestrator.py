import json
import random

import pytest

from constants.hub_constants import SourceKind
from constants.pipeline_constants import AttemptStatus, OutputFiles
from core.config import PipelineConfig
from core.errors import HubTransportError, NoSuitableDataset
from core.io import read_examples, read_json
from core.types import DataRow, DatasetRef, TransformedExample, provenance_for
from hub_client.client import HubClient
from hub_client.source import CorpusSource
from orchestrator.pipeline import Pipeline, probe_verdict, run_pipeline
from orchestrator.state import DatasetAttempt, RunState, next_candidate
from retrieval.embedders import HashingEmbedder
from cli.tasks import load_task
from transform.types import ExecutionOutcome
from tests.conftest import TOY_CONFIG, TOY_CORPUS, TOY_TASK, TOY_TRANSCRIPT, make_dataset, mock_gateway, run

RERANK_PATTERN = "The name of the most relevant dataset for this task is:$"
EXPAND_PATTERN = "Carefully analyse the  task description"


def toy_transcript() -> dict:
    return json.loads(TOY_TRANSCRIPT.read_text(encoding="utf-8"))


def toy_pipeline(transcript: dict = None, corpus=TOY_CORPUS, **overrides) -> Pipeline:
    config = PipelineConfig.model_validate({**read_json(TOY_CONFIG), **overrides})
    hub = HubClient(CorpusSource(kind=SourceKind.LOCAL_DIR, location=str(corpus)))
    gateway = mock_gateway(transcript if transcript is not None else toy_transcript())
    return Pipeline(config, hub, gateway, HashingEmbedder(config.embedding_dimension))


def write_dataset(root, name: str, rows: list[dict], description: str = "Pairs of texts and labels.") -> None:
    directory = root / name / "default"
    directory.mkdir(parents=True)
    (root / name / "card.json").write_text(json.dumps({"description": description, "tags": ["text"]}))
    (directory / "rows.jsonl").write_text("".join(json.dumps(r) + "\n" for r in rows))


def text_label_transcript(name: str, selection: str) -> dict:
    return {"entries": [
        {"pattern": RERANK_PATTERN, "response": name},
        {"pattern": EXPAND_PATTERN, "response": "Write a one-sentence description of the given code."},
        {"pattern": f"you will use the {name} dataset", "response": selection},
        {"pattern": "You are a Planning Agent", "response": "1. Use text as input.\n2. Use label as output."},
        {"pattern": r'Dataset Sample:\n\{"text": "(?P<t>[^"]*)", "label": "(?P<l>[^"]*)"\}',
         "response": '{"input": "{{t}}", "output": "{{l}}"}'},
    ]}


def outcomes(failures: int, total: int = 20) -> list[ExecutionOutcome]:
    ref = DatasetRef(name="toy", config="default")
    result = []
    for index in range(total):
        row = DataRow(values={"a": str(index)}, source_index=index)
        if index < failures:
            result.append(ExecutionOutcome.null(row, "null"))
        else:
            example = TransformedExample(input=f"in {index}", output=f"out {index}",
                                         provenance=provenance_for(ref, index))
            result.append(ExecutionOutcome.success(example, "{}"))
    return result


# probe verdicts

@pytest.mark.parametrize("failures,threshold,passed", [
    (0, 0.0, True),
    (1, 0.0, False),
    (10, 0.49, False),
    (10, 0.51, True),
    (10, 0.5, True),
    (20, 1.0, True),
    (20, 0.99, False),
])
def test_probe_threshold_is_strict(failures, threshold, passed):
    verdict = probe_verdict(outcomes(failures), threshold)
    assert verdict.passed is passed
    assert verdict.attempted == 20 and verdict.failures == failures


@pytest.mark.parametrize("failures,excluded", [(0, False), (49, False), (51, True), (100, True)])
def test_probe_failure_rates_at_half(failures, excluded):
    verdict = probe_verdict(outcomes(failures, total=100), 0.5)
    assert verdict.passed is not excluded
    assert verdict.failure_rate == failures / 100


def test_probe_of_nothing_passes():
    verdict = probe_verdict([], 0.5)
    assert verdict.passed and verdict.failure_rate == 0.0


# candidate order and the dataset budget

def test_next_candidate_puts_winner_first_and_skips_attempted():
    candidates = [make_dataset("a", rank=1), make_dataset("b", rank=2), make_dataset("c", rank=3)]
    state = RunState(task_id="t", candidates=candidates, winner=DatasetRef(name="b", config="default"),
                     max_datasets=2)
    assert next_candidate(state).card.name == "b"
    state.attempts.append(DatasetAttempt(dataset=candidates[1], status=AttemptStatus.EXHAUSTED))
    assert next_candidate(state).card.name == "a"


def test_unusable_schema_does_not_use_the_budget():
    candidates = [make_dataset("a", rank=1), make_dataset("b", rank=2)]
    state = RunState(task_id="t", candidates=candidates, max_datasets=1)
    state.attempts.append(DatasetAttempt(dataset=candidates[0], status=AttemptStatus.EXCLUDED_UNUSABLE_SCHEMA))
    assert next_candidate(state).card.name == "b"
    state.attempts.append(DatasetAttempt(dataset=candidates[1], status=AttemptStatus.EXCLUDED_FAILURE_RATE))
    assert next_candidate(state) is None


# full runs over the toy corpus

def test_toy_run_meets_target(tmp_path):
    pipeline = toy_pipeline()
    examples, report = run(pipeline.run(load_task(TOY_TASK), tmp_path))

    assert len(examples) == 100
    code = report.datasets["code_snippets:default"]
    assert code.status == AttemptStatus.EXHAUSTED
    assert (code.rows_attempted, code.rows_succeeded, code.rows_null, code.produced) == (50, 40, 10, 40)
    functions = report.datasets["python_functions:default"]
    assert functions.status == AttemptStatus.ACCEPTED and functions.produced == 60
    if "noisy_code:default" in report.datasets:
        assert report.datasets["noisy_code:default"].status == AttemptStatus.EXCLUDED_FAILURE_RATE
    for key in ("math_qa:default", "gsm8k:main", "squad:plain_text"):
        if key in report.datasets:
            assert report.datasets[key].status == AttemptStatus.EXCLUDED_UNUSABLE_SCHEMA

    assert report.identity_holds()
    assert report.totals.produced == 100
    assert "empty_description:gsm8k" in report.flags
    assert not any(flag.startswith("partial") for flag in report.flags)
    assert {e.provenance.dataset for e in examples} == {"code_snippets", "python_functions"}
    assert examples[0].provenance.dataset == "code_snippets"

    assert read_examples(tmp_path / OutputFiles.DATA) == examples
    assert read_json(tmp_path / OutputFiles.REPORT)["totals"]["produced"] == 100
    assert (tmp_path / OutputFiles.ATTEMPTS_DIR / "code_snippets" / OutputFiles.PLAN).is_file()
    assert pipeline.gateway.provider.call_count("rerank") == 5
    assert pipeline.gateway.provider.call_count("task_expand") == 1
    assert pipeline.gateway.provider.call_count("plan") == len(
        [c for c in report.datasets.values() if c.status != AttemptStatus.EXCLUDED_UNUSABLE_SCHEMA])


def test_toy_run_is_reproducible(tmp_path):
    run(toy_pipeline().run(load_task(TOY_TASK), tmp_path / "first"))
    run(toy_pipeline().run(load_task(TOY_TASK), tmp_path / "second"))
    first = (tmp_path / "first" / OutputFiles.DATA).read_bytes()
    assert first == (tmp_path / "second" / OutputFiles.DATA).read_bytes()


def test_quota_is_exact_within_the_first_dataset():
    examples, report = run(toy_pipeline(target_example_count=30).run(load_task(TOY_TASK)))
    assert len(examples) == 30
    assert list(report.datasets) == ["code_snippets:default"]
    counters = report.datasets["code_snippets:default"]
    assert counters.status == AttemptStatus.ACCEPTED
    assert counters.rows_discarded == 0


def test_probe_successes_beyond_quota_are_discarded():
    examples, report = run(toy_pipeline(target_example_count=10).run(load_task(TOY_TASK)))
    counters = report.datasets["code_snippets:default"]
    assert len(examples) == 10
    assert (counters.rows_attempted, counters.rows_succeeded, counters.rows_discarded) == (20, 16, 6)
    assert counters.identity_holds()


def test_dataset_budget_gives_partial_run():
    examples, report = run(toy_pipeline(max_datasets=1).run(load_task(TOY_TASK)))
    assert len(examples) == 40
    assert "partial:40/100" in report.flags


def test_noisy_dataset_is_excluded_by_the_probe():
    pipeline = toy_pipeline()
    examples, report = run(pipeline.transform_single(load_task(TOY_TASK), DatasetRef(name="noisy_code",
                                                                                      config="default")))
    counters = report.datasets["noisy_code:default"]
    assert examples == []
    assert counters.status == AttemptStatus.EXCLUDED_FAILURE_RATE
    assert (counters.rows_attempted, counters.rows_null) == (20, 20)
    assert counters.excluded


def test_rerank_none_without_fallback():
    transcript = toy_transcript()
    for entry in transcript["entries"]:
        if entry.get("pattern") == RERANK_PATTERN:
            entry.pop("responses", None)
            entry["response"] = "NONE"
    with pytest.raises(NoSuitableDataset):
        run(toy_pipeline(transcript, fallback_to_retrieval_order=False).run(load_task(TOY_TASK)))
    examples, report = run(toy_pipeline(transcript).run(load_task(TOY_TASK)))
    assert "rerank_none" in report.flags
    assert len(examples) > 0


def test_resume_continues_from_checkpoint(tmp_path):
    task = load_task(TOY_TASK)
    full, _ = run(toy_pipeline().run(task, tmp_path))

    checkpoint_path = tmp_path / OutputFiles.CHECKPOINT
    state = json.loads(checkpoint_path.read_text(encoding="utf-8"))
    first = state["attempts"][0]["dataset"]["card"]["name"]
    state["attempts"] = state["attempts"][:1]
    state["emitted"] = 40
    state["report"]["datasets"] = {key: value for key, value in state["report"]["datasets"].items()
                                   if key.startswith(f"{first}:")}
    checkpoint_path.write_text(json.dumps(state), encoding="utf-8")

    pipeline = toy_pipeline()
    resumed, report = run(pipeline.run(task, tmp_path, resume=True))
    assert resumed == full
    assert "resumed" in report.flags
    assert pipeline.gateway.provider.call_count("rerank") == 0
    assert pipeline.gateway.provider.call_count("task_expand") == 0


def test_resume_rejects_another_tasks_checkpoint(tmp_path, task):
    run(toy_pipeline(max_datasets=1).run(load_task(TOY_TASK), tmp_path))
    with pytest.raises(NoSuitableDataset):
        run(toy_pipeline().run(task, tmp_path, resume=True))


# synthetic corpora

def test_plan_is_made_once_for_many_rows(tmp_path, task):
    write_dataset(tmp_path, "big", [{"text": f"text {i}", "label": f"label {i}"} for i in range(500)])
    transcript = text_label_transcript("big", '{"input": ["text"], "output": ["label"]}')
    pipeline = toy_pipeline(transcript, corpus=tmp_path, target_example_count=500, retrieval_k=1)
    examples, report = run(pipeline.run(task))
    assert len(examples) == 500
    assert report.datasets["big:default"].status == AttemptStatus.ACCEPTED
    assert pipeline.gateway.provider.call_count("plan") == 1
    assert pipeline.gateway.provider.call_count("execute") == 500
    assert [e.provenance.source_index for e in examples] == list(range(500))


def test_every_dataset_excluded(tmp_path, task):
    write_dataset(tmp_path, "useless", [{"text": f"text {i}", "label": f"label {i}"} for i in range(5)])
    transcript = text_label_transcript("useless", '{"input": [], "output": [], "irrelevant": ["text", "label"]}')
    with pytest.raises(NoSuitableDataset):
        run(toy_pipeline(transcript, corpus=tmp_path, retrieval_k=1).run(task))


def test_accounting_holds_across_random_scenarios(tmp_path, task):
    rng = random.Random(2024)
    transcript = {"entries": [
        {"pattern": RERANK_PATTERN, "response": "NONE"},
        {"pattern": EXPAND_PATTERN, "response": "Write a one-sentence description of the given code."},
        {"pattern": "you will use the", "response": '{"input": ["text"], "output": ["label"]}'},
        {"pattern": "You are a Planning Agent", "response": "1. Use text as input.\n2. Use label as output."},
        {"pattern": r'Dataset Sample:\n\{"text": "(?P<t>ok [^"]*)", "label": "(?P<l>[^"]*)"\}',
         "response": '{"input": "{{t}}", "output": "{{l}}"}'},
        {"pattern": r'Dataset Sample:\n\{"text": "null ', "response": "null"},
        {"pattern": r'Dataset Sample:\n\{"text": "bad ', "response": "I could not do it."},
    ]}
    for scenario in range(50):
        corpus = tmp_path / f"scenario_{scenario}"
        threshold = rng.choice([0.1, 0.25, 0.5, 0.75, 1.0])
        probe_size = rng.randint(1, 20)
        achievable = 0
        excluded = []
        for d in range(rng.randint(1, 3)):
            kinds = rng.choices(["ok", "null", "bad"], weights=[6, 2, 1], k=rng.randint(5, 60))
            probed = kinds[:probe_size]
            failed_probe = (len(probed) - probed.count("ok")) / len(probed) > threshold
            # An excluded dataset still emits the successes of its probe
            achievable += probed.count("ok") if failed_probe else kinds.count("ok")
            excluded.append(failed_probe)
            write_dataset(corpus, f"d{d}", [{"text": f"{kind} d{d} {i}", "label": f"label {i}"}
                                            for i, kind in enumerate(kinds)])
        target = rng.randint(1, 120)
        pipeline = toy_pipeline(transcript, corpus=corpus, target_example_count=target, max_datasets=3,
                                failure_rate_threshold=threshold, probe_batch_size=probe_size,
                                row_batch_size=rng.randint(1, 30))
        if achievable == 0 and all(excluded):
            with pytest.raises(NoSuitableDataset):
                run(pipeline.run(task))
            continue
        examples, report = run(pipeline.run(task))

        assert len(examples) == min(target, achievable), scenario
        for counters in report.datasets.values():
            if counters.status == AttemptStatus.EXCLUDED_FAILURE_RATE:
                assert counters.excluded and counters.rows_attempted <= probe_size
        assert report.identity_holds()
        assert report.totals.produced == len(examples)
        for counters in report.datasets.values():
            assert counters.rows_succeeded == counters.produced + counters.rows_discarded
        keys = [(e.provenance.dataset, e.provenance.source_index) for e in examples]
        assert len(keys) == len(set(keys))


def test_run_pipeline_function_matches_pipeline_run(tmp_path):
    pipeline = toy_pipeline()
    examples, report = run(run_pipeline(load_task(TOY_TASK), pipeline.config, pipeline.hub, pipeline.gateway,
                                        pipeline.embedder, out_dir=tmp_path))
    assert len(examples) == 100
    assert read_examples(tmp_path / OutputFiles.DATA) == examples
    assert report.totals.produced == 100


def test_hub_failure_mid_dataset_keeps_executed_rows(tmp_path, task, monkeypatch):
    write_dataset(tmp_path, "flaky", [{"text": f"text {i}", "label": f"label {i}"} for i in range(40)])
    transcript = text_label_transcript("flaky", '{"input": ["text"], "output": ["label"]}')
    pipeline = toy_pipeline(transcript, corpus=tmp_path, target_example_count=40, retrieval_k=1,
                            probe_batch_size=10, row_batch_size=10)
    read_rows = pipeline.hub.read_rows

    async def read_rows_failing_after_20(name, config, start=0, limit=None):
        if start >= 20:
            raise HubTransportError("rows endpoint unavailable", cursor=str(start))
        return await read_rows(name, config, start, limit)

    monkeypatch.setattr(pipeline.hub, "read_rows", read_rows_failing_after_20)
    examples, report = run(pipeline.run(task))

    counters = report.datasets["flaky:default"]
    assert [e.provenance.source_index for e in examples] == list(range(20))
    assert counters.status == AttemptStatus.EXCLUDED_ERROR
    assert (counters.rows_attempted, counters.rows_succeeded, counters.produced) == (20, 20, 20)
    assert counters.identity_holds()
    assert report.totals.produced == 20
    assert "partial:20/40" in report.flags
