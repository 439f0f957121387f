import asyncio
from pathlib import Path

import pytest

from core.config import PipelineConfig
from core.types import Column, DataRow, DatasetCard, DatasetSchema, DemoExample, SelectedDataset, TaskSpec
from llm_gateway.gateway import LlmGateway
from llm_gateway.providers import MockProvider

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
TOY_CORPUS = FIXTURES / "toy_corpus"
TOY_TRANSCRIPT = FIXTURES / "toy_transcript.json"
TOY_CONFIG = FIXTURES / "toy_config.json"
TOY_TASK = FIXTURES / "task_code_description.json"


async def _no_sleep(_seconds: float) -> None:
    return None


def mock_gateway(transcript: dict, max_concurrent: int = 8, max_retries: int = 3) -> LlmGateway:
    """Gateway over a MockProvider; retries never sleep"""
    return LlmGateway(MockProvider(transcript), max_concurrent=max_concurrent, max_retries=max_retries,
                      retry_base_delay=0.0, sleep=_no_sleep)


def make_dataset(name: str = "toy", columns=("question", "answer"), rows=None, rank: int = 1,
                 description: str = "A toy dataset.", config: str = "default") -> SelectedDataset:
    rows = rows if rows is not None else [
        {column: f"{column} {i}" for column in columns} for i in range(3)
    ]
    return SelectedDataset(
        card=DatasetCard(name=name, configs=[config], description=description, tags=["toy"]),
        config=config,
        schema=DatasetSchema(columns=[Column(name=c) for c in columns]),
        sample_rows=[DataRow(values=values, source_index=i) for i, values in enumerate(rows)],
        retrieval_rank=rank,
    )


def run(coroutine):
    return asyncio.run(coroutine)


@pytest.fixture
def task() -> TaskSpec:
    return TaskSpec(
        task_id="describe_code",
        instruction="Describe what a line of code does.",
        examples=[DemoExample(input="x = 1", output="Assigns 1 to x.")],
        tags=["code"],
    )


@pytest.fixture
def config() -> PipelineConfig:
    return PipelineConfig(llm_requests_per_second=0, llm_retry_base_delay=0)
