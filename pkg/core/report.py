"""Run report records and their merge"""
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, computed_field

from constants.core_constants import CoreMessages
from core.errors import ReportMergeError


class DatasetCounters(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    rows_attempted: int = Field(0, ge=0)
    rows_succeeded: int = Field(0, ge=0)
    rows_null: int = Field(0, ge=0)
    rows_malformed: int = Field(0, ge=0)
    # Successes dropped because the quota was already met (subset of rows_succeeded)
    rows_discarded: int = Field(0, ge=0)
    produced: int = Field(0, ge=0)
    excluded: bool = False
    exclusion_reason: Optional[str] = None
    status: Optional[str] = None

    def identity_holds(self) -> bool:
        return self.rows_attempted == self.rows_succeeded + self.rows_null + self.rows_malformed

    def check(self, key: str) -> None:
        if not self.identity_holds():
            raise ReportMergeError(
                CoreMessages.COUNTER_IDENTITY.format(
                    key=key,
                    attempted=self.rows_attempted,
                    total=self.rows_succeeded + self.rows_null + self.rows_malformed,
                ),
                dataset=key,
            )

    def __add__(self, other: "DatasetCounters") -> "DatasetCounters":
        return DatasetCounters(
            rows_attempted=self.rows_attempted + other.rows_attempted,
            rows_succeeded=self.rows_succeeded + other.rows_succeeded,
            rows_null=self.rows_null + other.rows_null,
            rows_malformed=self.rows_malformed + other.rows_malformed,
            rows_discarded=self.rows_discarded + other.rows_discarded,
            produced=self.produced + other.produced,
            excluded=self.excluded or other.excluded,
            exclusion_reason=other.exclusion_reason or self.exclusion_reason,
            status=other.status or self.status,
        )


class StageUsage(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    calls: int = 0
    cache_hits: int = 0
    prompt_tokens: int = 0
    completion_tokens: int = 0

    def __add__(self, other: "StageUsage") -> "StageUsage":
        return StageUsage(
            calls=self.calls + other.calls,
            cache_hits=self.cache_hits + other.cache_hits,
            prompt_tokens=self.prompt_tokens + other.prompt_tokens,
            completion_tokens=self.completion_tokens + other.completion_tokens,
        )


class RunTotals(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows_attempted: int
    rows_succeeded: int
    rows_null: int
    rows_malformed: int
    rows_discarded: int
    produced: int
    datasets_attempted: int
    datasets_excluded: int


class RunReport(BaseModel):
    model_config = ConfigDict(frozen=True, extra="ignore")

    task_id: Optional[str] = None
    datasets: dict[str, DatasetCounters] = Field(default_factory=dict)
    duration_seconds: float = 0.0
    llm_usage: dict[str, StageUsage] = Field(default_factory=dict)
    flags: list[str] = Field(default_factory=list)

    @computed_field
    @property
    def totals(self) -> RunTotals:
        counters = list(self.datasets.values())
        return RunTotals(
            rows_attempted=sum(c.rows_attempted for c in counters),
            rows_succeeded=sum(c.rows_succeeded for c in counters),
            rows_null=sum(c.rows_null for c in counters),
            rows_malformed=sum(c.rows_malformed for c in counters),
            rows_discarded=sum(c.rows_discarded for c in counters),
            produced=sum(c.produced for c in counters),
            datasets_attempted=len(counters),
            datasets_excluded=sum(1 for c in counters if c.excluded),
        )

    def identity_holds(self) -> bool:
        return all(counters.identity_holds() for counters in self.datasets.values())

    def with_dataset(self, key: str, counters: DatasetCounters) -> "RunReport":
        datasets = dict(self.datasets)
        datasets[key] = counters
        return self.model_copy(update={"datasets": datasets})


def merge_report(a: RunReport, b: RunReport) -> RunReport:
    """Sum two reports

    Args:
        a: First report
        b: Second report (dataset keys disjoint from a, or identical with matching exclusion flags)

    Returns:
        Report with counters, usage and durations summed

    Raises:
        ReportMergeError: If either input breaks the counter identity or exclusion flags conflict
    """
    for report in (a, b):
        for key, counters in report.datasets.items():
            counters.check(key)

    datasets = dict(a.datasets)
    for key, counters in b.datasets.items():
        if key in datasets:
            if datasets[key].excluded != counters.excluded:
                raise ReportMergeError(CoreMessages.CONFLICTING_EXCLUSION.format(key=key), dataset=key)
            datasets[key] = datasets[key] + counters
        else:
            datasets[key] = counters

    usage = dict(a.llm_usage)
    for stage, stage_usage in b.llm_usage.items():
        usage[stage] = usage.get(stage, StageUsage()) + stage_usage

    flags = list(dict.fromkeys([*a.flags, *b.flags]))
    return RunReport(
        task_id=a.task_id or b.task_id,
        datasets=datasets,
        duration_seconds=a.duration_seconds + b.duration_seconds,
        llm_usage=usage,
        flags=flags,
    )
