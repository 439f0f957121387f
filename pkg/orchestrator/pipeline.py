"""End-to-end run: retrieve, rerank, then transform ranked datasets until the quota is met"""
import asyncio
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

from constants.orchestrator_constants import OrchestratorMessages, RunFlags
from constants.pipeline_constants import AttemptStatus, OutputFiles
from constants.transform_constants import OutcomeKind
from core.config import PipelineConfig, validate_config
from core.errors import (
    EmptyPlan,
    HubError,
    NoSuitableDataset,
    SchemaViolation,
    TransportError,
    UnusableDataset,
)
from core.io import write_examples, write_json, write_text_atomic
from core.report import DatasetCounters, RunReport, StageUsage, merge_report
from core.types import DataRow, DatasetRef, SelectedDataset, TaskSpec, TransformedExample, TransformPlan
from hub_client.client import HubClient
from llm_gateway.gateway import LlmGateway
from orchestrator.state import DatasetAttempt, RunState, load_checkpoint, next_candidate, save_checkpoint
from retrieval.embedders import Embedder
from retrieval.index import EmbeddingIndex, build_index, retrieve_top_k
from retrieval.rerank import rerank_with_self_consistency
from transform.execution import execute_rows
from transform.expansion import expand_task
from transform.planning import generate_plan
from transform.schema_selection import select_schema
from transform.types import ColumnSelection, ExecutionOutcome, ExpandedTask

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProbeVerdict:
    passed: bool
    attempted: int
    failures: int
    outcomes: list[ExecutionOutcome] = field(default_factory=list)

    @property
    def failure_rate(self) -> float:
        return self.failures / self.attempted if self.attempted else 0.0


@dataclass
class _Tally:
    """Per-dataset counters while rows are being processed"""
    attempted: int = 0
    succeeded: int = 0
    null: int = 0
    malformed: int = 0
    discarded: int = 0
    produced: int = 0

    def add(self, outcomes: Sequence[ExecutionOutcome]) -> None:
        for outcome in outcomes:
            self.attempted += 1
            if outcome.succeeded:
                self.succeeded += 1
            elif outcome.kind == OutcomeKind.NULL:
                self.null += 1
            else:
                self.malformed += 1

    def counters(self, status: AttemptStatus, reason: Optional[str] = None) -> DatasetCounters:
        excluded = status not in (AttemptStatus.ACCEPTED, AttemptStatus.EXHAUSTED)
        return DatasetCounters(
            rows_attempted=self.attempted,
            rows_succeeded=self.succeeded,
            rows_null=self.null,
            rows_malformed=self.malformed,
            rows_discarded=self.discarded,
            produced=self.produced,
            excluded=excluded,
            exclusion_reason=reason if excluded else None,
            status=status,
        )


async def run_rows(task: ExpandedTask, plan: TransformPlan, rows: Sequence[DataRow], selection: ColumnSelection,
                   gateway: LlmGateway, config: PipelineConfig) -> list[ExecutionOutcome]:
    """execute_rows, re-running rows that failed at transport level up to transport_row_retries times"""
    outcomes = {outcome.source_index: outcome
                for outcome in await execute_rows(task, plan, rows, selection, gateway, config)}
    by_index = {row.source_index: row for row in rows}
    for _ in range(config.transport_row_retries):
        retry = [by_index[index] for index, outcome in outcomes.items() if outcome.is_transport_failure]
        if not retry:
            break
        logger.info(f"dataset={plan.source_dataset.key} retrying {len(retry)} rows after transport failures")
        for outcome in await execute_rows(task, plan, retry, selection, gateway, config):
            outcomes[outcome.source_index] = outcome
    return [outcomes[index] for index in sorted(outcomes)]


def probe_verdict(outcomes: Sequence[ExecutionOutcome], threshold: float) -> ProbeVerdict:
    failures = sum(1 for outcome in outcomes if not outcome.succeeded)
    attempted = len(outcomes)
    rate = failures / attempted if attempted else 0.0
    return ProbeVerdict(passed=rate <= threshold, attempted=attempted, failures=failures, outcomes=list(outcomes))


async def probe_dataset(task: ExpandedTask, dataset: SelectedDataset, plan: TransformPlan, probe_n: int,
                        selection: ColumnSelection, hub: HubClient, gateway: LlmGateway,
                        config: PipelineConfig) -> ProbeVerdict:
    """Execute the first probe_n rows (fewer if the dataset is smaller); fail iff the failure rate
    strictly exceeds failure_rate_threshold"""
    rows = await hub.read_rows(dataset.card.name, dataset.config, 0, probe_n)
    outcomes = await run_rows(task, plan, rows, selection, gateway, config)
    verdict = probe_verdict(outcomes, config.failure_rate_threshold)
    logger.info(OrchestratorMessages.PROBE_RESULT.format(
        key=dataset.ref.key, failures=verdict.failures, attempted=verdict.attempted,
        rate=verdict.failure_rate, threshold=config.failure_rate_threshold,
    ))
    return verdict


def _write_attempt_files(out_dir: Optional[Path], dataset: SelectedDataset, selection: Optional[ColumnSelection],
                         plan: Optional[TransformPlan]) -> None:
    if out_dir is None:
        return
    attempt_dir = out_dir / OutputFiles.ATTEMPTS_DIR / dataset.card.name.replace("/", "__")
    if selection is not None:
        write_json(attempt_dir / OutputFiles.SELECTION, selection.model_dump())
    if plan is not None:
        write_text_atomic(attempt_dir / OutputFiles.PLAN, plan.render() + "\n")


class DatasetTransformer:
    """Runs one dataset through selection, planning, probing and bulk execution"""

    def __init__(self, task: ExpandedTask, hub: HubClient, gateway: LlmGateway, config: PipelineConfig,
                 out_dir: Optional[Path] = None):
        self.task = task
        self.hub = hub
        self.gateway = gateway
        self.config = config
        self.out_dir = out_dir
        self.flags: list[str] = []

    def _emit(self, outcomes: Sequence[ExecutionOutcome], tally: _Tally, quota: int) -> list[TransformedExample]:
        examples = []
        for outcome in outcomes:
            if not outcome.succeeded:
                continue
            if tally.produced < quota:
                examples.append(outcome.example)
                tally.produced += 1
            else:
                tally.discarded += 1
        return examples

    async def transform(self, dataset: SelectedDataset,
                        quota: int) -> tuple[DatasetAttempt, DatasetCounters, list[TransformedExample]]:
        key = dataset.ref.key
        tally = _Tally()

        def finish(status: AttemptStatus, reason: Optional[str] = None, verdict: Optional[ProbeVerdict] = None):
            if reason:
                logger.warning(OrchestratorMessages.EXCLUDED.format(key=key, reason=reason))
            if tally.discarded:
                logger.info(OrchestratorMessages.DISCARDED.format(key=key, count=tally.discarded))
            attempt = DatasetAttempt(
                dataset=dataset, status=status, produced=tally.produced, reason=reason,
                probe_attempted=verdict.attempted if verdict else 0,
                probe_succeeded=verdict.attempted - verdict.failures if verdict else 0,
            )
            return attempt, tally.counters(status, reason)

        try:
            selection = await select_schema(self.task, dataset, self.gateway, self.config)
        except (UnusableDataset, SchemaViolation) as e:
            return *finish(AttemptStatus.EXCLUDED_UNUSABLE_SCHEMA, str(e)), []
        except TransportError as e:
            return *finish(AttemptStatus.EXCLUDED_ERROR, str(e)), []

        try:
            plan = await generate_plan(self.task, dataset, selection, self.gateway, self.config)
        except (EmptyPlan, TransportError) as e:
            _write_attempt_files(self.out_dir, dataset, selection, None)
            return *finish(AttemptStatus.EXCLUDED_ERROR, str(e)), []
        _write_attempt_files(self.out_dir, dataset, selection, plan)
        if plan.fallback:
            self.flags.append(RunFlags.PLAN_FALLBACK.format(key=key))

        verdict: Optional[ProbeVerdict] = None
        examples: list[TransformedExample] = []
        try:
            verdict = await probe_dataset(self.task, dataset, plan, self.config.probe_batch_size, selection,
                                          self.hub, self.gateway, self.config)
            tally.add(verdict.outcomes)
            examples.extend(self._emit(verdict.outcomes, tally, quota))
            if not verdict.passed:
                reason = f"probe failure rate {verdict.failure_rate:.2f} > {self.config.failure_rate_threshold}"
                return *finish(AttemptStatus.EXCLUDED_FAILURE_RATE, reason, verdict), examples

            offset = verdict.attempted
            exhausted = verdict.attempted < self.config.probe_batch_size
            while tally.produced < quota and not exhausted:
                batch = min(self.config.row_batch_size, quota - tally.produced)
                rows = await self.hub.read_rows(dataset.card.name, dataset.config, offset, batch)
                exhausted = len(rows) < batch
                offset += len(rows)
                outcomes = await run_rows(self.task, plan, rows, selection, self.gateway, self.config)
                tally.add(outcomes)
                examples.extend(self._emit(outcomes, tally, quota))
        except HubError as e:
            # Rows already executed stay counted and emitted
            return *finish(AttemptStatus.EXCLUDED_ERROR, str(e), verdict), examples

        status = AttemptStatus.ACCEPTED if tally.produced >= quota else AttemptStatus.EXHAUSTED
        return *finish(status, None, verdict), examples


async def load_candidates(names: Sequence[str], hub: HubClient, config: PipelineConfig) -> list[SelectedDataset]:
    """SelectedDataset per retrieved name, in retrieval order; datasets that fail to load are skipped"""

    async def load(rank: int, name: str) -> SelectedDataset:
        card = await hub.fetch_card(name)
        schema, samples = await hub.fetch_schema_and_samples(name, card.default_config, config.sample_rows)
        return SelectedDataset(card=card, config=card.default_config, schema=schema, sample_rows=samples,
                               retrieval_rank=rank)

    results = await asyncio.gather(*(load(rank, name) for rank, name in enumerate(names, start=1)),
                                   return_exceptions=True)
    candidates = []
    for name, result in zip(names, results):
        if isinstance(result, HubError):
            logger.warning(OrchestratorMessages.CANDIDATE_SKIPPED.format(name=name, error=result))
        elif isinstance(result, BaseException):
            raise result
        else:
            candidates.append(result)
    return candidates


async def _with_config(candidate: SelectedDataset, ref: DatasetRef, hub: HubClient,
                       config: PipelineConfig) -> SelectedDataset:
    if ref.config == candidate.config:
        return candidate
    schema, samples = await hub.fetch_schema_and_samples(ref.name, ref.config, config.sample_rows)
    return candidate.model_copy(update={"config": ref.config, "schema_": schema, "sample_rows": samples})


def _merged_usage(previous: dict[str, StageUsage], current: dict[str, StageUsage]) -> dict[str, StageUsage]:
    merged = dict(previous)
    for stage, usage in current.items():
        merged[stage] = merged.get(stage, StageUsage()) + usage
    return dict(sorted(merged.items()))


class Pipeline:
    """Holds the collaborators of a run; one instance can serve several tasks"""

    def __init__(self, config: PipelineConfig, hub: HubClient, gateway: LlmGateway, embedder: Embedder,
                 index: Optional[EmbeddingIndex] = None):
        self.config = validate_config(config)
        self.hub = hub
        self.gateway = gateway
        self.embedder = embedder
        self.index = index

    async def _index(self) -> EmbeddingIndex:
        if self.index is None:
            self.index = await build_index(await self.hub.list_cards(), self.embedder)
        return self.index

    async def _fresh_state(self, task: TaskSpec) -> RunState:
        names = await retrieve_top_k(await self._index(), task, self.config.retrieval_k, self.embedder)
        logger.info(f"Retrieved {len(names)} candidates for {task.task_id}: {names}")
        candidates = await load_candidates(names, self.hub, self.config)
        if not candidates:
            raise NoSuitableDataset(OrchestratorMessages.NO_CANDIDATES.format(task_id=task.task_id))

        rerank = await rerank_with_self_consistency(task, candidates, self.config.self_consistency_votes,
                                                    self.gateway, self.config)
        flags = [RunFlags.EMPTY_DESCRIPTION.format(name=c.card.name) for c in candidates if c.card.description_missing]
        if rerank.winner is None:
            if not self.config.fallback_to_retrieval_order:
                raise NoSuitableDataset(OrchestratorMessages.RERANK_NONE)
            flags.append(RunFlags.RERANK_NONE)
        else:
            candidates = [
                await _with_config(c, rerank.winner, self.hub, self.config) if c.card.name == rerank.winner.name else c
                for c in candidates
            ]

        expanded = await expand_task(task, self.gateway, self.config)
        return RunState(
            task_id=task.task_id,
            candidates=candidates,
            winner=rerank.winner,
            max_datasets=self.config.max_datasets,
            expanded_text=expanded.expanded_text,
            report=RunReport(task_id=task.task_id, flags=flags),
        )

    async def run(self, task: TaskSpec, out_dir: Optional[Path] = None,
                  resume: bool = False) -> tuple[list[TransformedExample], RunReport]:
        """Produce up to target_example_count examples for the task

        Raises:
            NoSuitableDataset: No candidate loads, the reranker says NONE without fallback, or every
                attempted dataset was excluded without producing anything
        """
        started = time.monotonic()
        target = self.config.target_example_count
        restored = load_checkpoint(out_dir) if (resume and out_dir is not None) else None
        if restored is not None:
            state, examples = restored
            if state.task_id != task.task_id:
                raise NoSuitableDataset(OrchestratorMessages.CHECKPOINT_MISMATCH.format(
                    path=out_dir, found=state.task_id, expected=task.task_id))
            logger.info(OrchestratorMessages.RESUMING.format(task_id=task.task_id, emitted=state.emitted,
                                                             attempts=len(state.attempts)))
            state.report = state.report.model_copy(update={"flags": [*state.report.flags, RunFlags.RESUMED]})
        else:
            state, examples = await self._fresh_state(task), []
        base_usage = state.report.llm_usage
        base_duration = state.report.duration_seconds

        expanded = ExpandedTask(original=task, expanded_text=state.expanded_text)
        transformer = DatasetTransformer(expanded, self.hub, self.gateway, self.config, out_dir)

        def progress(extra_flags: Sequence[str] = ()) -> RunReport:
            return state.report.model_copy(update={
                "duration_seconds": base_duration + (time.monotonic() - started),
                "llm_usage": _merged_usage(base_usage, self.gateway.usage),
                "flags": list(dict.fromkeys([*state.report.flags, *transformer.flags, *extra_flags])),
            })

        while state.emitted < target:
            candidate = next_candidate(state)
            if candidate is None:
                break
            attempt, counters, produced = await transformer.transform(candidate, target - state.emitted)
            state.attempts.append(attempt)
            examples.extend(produced)
            state.emitted += len(produced)
            state.report = state.report.with_dataset(candidate.ref.key, counters)
            if out_dir is not None:
                state.report = progress()
                save_checkpoint(out_dir, state, examples)

        if not examples and state.attempts and not any(attempt.contributed for attempt in state.attempts):
            raise NoSuitableDataset(OrchestratorMessages.ALL_EXCLUDED)

        partial = []
        if len(examples) < target:
            logger.warning(OrchestratorMessages.PARTIAL.format(produced=len(examples), target=target))
            partial.append(RunFlags.PARTIAL.format(produced=len(examples), target=target))
        # Merging with an empty report re-checks the counter identity of every dataset
        report = merge_report(progress(partial), RunReport(task_id=task.task_id))

        if out_dir is not None:
            write_examples(out_dir / OutputFiles.DATA, examples)
            write_json(out_dir / OutputFiles.REPORT, json.loads(report.model_dump_json()))
        return examples, report

    async def transform_single(self, task: TaskSpec, dataset: Union[DatasetRef, str],
                               out_dir: Optional[Path] = None) -> tuple[list[TransformedExample], RunReport]:
        """Transform one named dataset, skipping retrieval and reranking

        A bare dataset name uses the dataset's default config.
        """
        started = time.monotonic()
        name, config = (dataset.name, dataset.config) if isinstance(dataset, DatasetRef) else \
            DatasetRef.split_key(dataset)
        card = await self.hub.fetch_card(name)
        ref = DatasetRef(name=name, config=config or card.default_config)
        schema, samples = await self.hub.fetch_schema_and_samples(ref.name, ref.config, self.config.sample_rows)
        selected = SelectedDataset(card=card, config=ref.config, schema=schema, sample_rows=samples, retrieval_rank=1)
        expanded = await expand_task(task, self.gateway, self.config)
        transformer = DatasetTransformer(expanded, self.hub, self.gateway, self.config, out_dir)
        attempt, counters, examples = await transformer.transform(selected, self.config.target_example_count)
        report = RunReport(
            task_id=task.task_id,
            datasets={ref.key: counters},
            duration_seconds=time.monotonic() - started,
            llm_usage=_merged_usage({}, self.gateway.usage),
            flags=transformer.flags,
        )
        if out_dir is not None:
            write_examples(out_dir / OutputFiles.DATA, examples)
            write_json(out_dir / OutputFiles.REPORT, json.loads(report.model_dump_json()))
        logger.info(f"dataset={ref.key} finished with status {attempt.status}: {len(examples)} examples")
        return examples, report


async def run_pipeline(task: TaskSpec, config: PipelineConfig, hub: HubClient, gateway: LlmGateway,
                       embedder: Embedder, index: Optional[EmbeddingIndex] = None, out_dir: Optional[Path] = None,
                       resume: bool = False) -> tuple[list[TransformedExample], RunReport]:
    return await Pipeline(config, hub, gateway, embedder, index).run(task, out_dir, resume)
