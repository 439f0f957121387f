import asyncio
import time

import pytest

from utils.command_registry import CommandRegistry, command_handler
from utils.pattern_registry import PatternRegistry
from utils.rate_limiter import AsyncTokenBucket
from utils.response_builder import ResponseBuilder


class Verbs:
    @command_handler("run", description="Run it")
    async def cmd_run(self, command) -> int:
        return 0

    @command_handler("report")
    async def cmd_report(self, command) -> int:
        return 3

    async def helper(self) -> None:
        return None


def test_registry_collects_decorated_methods():
    registry = CommandRegistry()
    assert registry.auto_register_from_instance(Verbs()) == 2
    assert asyncio.run(registry.get_handler("report")(None)) == 3
    assert registry.get_handler("helper") is None
    help_text = registry.generate_help_text()
    assert help_text.splitlines()[1].split() == ["report", "Handle", "report"]
    assert "Run it" in help_text


def test_registry_rejects_duplicate_verbs():
    registry = CommandRegistry()
    registry.auto_register_from_instance(Verbs())
    with pytest.raises(ValueError):
        registry.auto_register_from_instance(Verbs())


def test_pattern_registry_exact_key_beats_pattern():
    registry = PatternRegistry()
    registry.register_pattern("abc", "pattern")
    registry.register("abc", "exact")
    assert registry.resolve("abc")[0] == "exact"
    handler, match = registry.resolve("zzz", "xx abc yy")
    assert handler == "pattern" and match.group(0) == "abc"
    assert registry.resolve("nothing") == (None, None)
    assert len(registry) == 2


def test_response_builder_table():
    table = ResponseBuilder.table(("name", "score"), [("a", 0.5), ("long name", None)], title="scores")
    lines = table.splitlines()
    assert lines[0] == "scores"
    assert lines[1].startswith("name")
    assert "0.5000" in lines[3]
    assert lines[4].endswith("-")


def test_token_bucket_zero_rate_never_waits():
    async def burst():
        bucket = AsyncTokenBucket(0)
        started = time.monotonic()
        for _ in range(100):
            await bucket.acquire()
        return time.monotonic() - started

    assert asyncio.run(burst()) < 0.5


def test_token_bucket_pause_holds_callers():
    async def paused():
        bucket = AsyncTokenBucket(0)
        bucket.pause(0.05)
        started = time.monotonic()
        await bucket.acquire()
        return time.monotonic() - started

    assert asyncio.run(paused()) >= 0.04
