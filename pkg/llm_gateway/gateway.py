"""Completion gateway: retries, rate limiting, caching and per-stage usage accounting"""
import asyncio
import logging
import random
from pathlib import Path
from typing import Any, Awaitable, Callable, Optional, Union

import httpx

from constants.gateway_constants import GatewayMessages
from core.config import PipelineConfig
from core.errors import TransportError
from core.report import StageUsage
from llm_gateway.cache import ResponseCache
from llm_gateway.json_extract import extract_json
from llm_gateway.providers import CompletionProvider, HttpProvider, MockProvider, ProviderHttpError
from llm_gateway.types import LlmRequest, LlmResponse, NullSampleType, ProviderReply
from utils.rate_limiter import AsyncTokenBucket

logger = logging.getLogger(__name__)

_TOO_MANY_REQUESTS = 429
_JITTER = 0.25


def _is_retryable(status_code: int) -> bool:
    return status_code == _TOO_MANY_REQUESTS or status_code >= 500


class LlmGateway:
    """Safe for concurrent use from many coroutines of one event loop.

    Zero-temperature requests are cached by cache_key; identical requests already in flight share
    one provider call instead of racing to fill the cache.
    """

    def __init__(self,
                 provider: CompletionProvider,
                 cache: Optional[ResponseCache] = None,
                 max_concurrent: int = 8,
                 requests_per_second: float = 0.0,
                 max_retries: int = 3,
                 retry_base_delay: float = 1.0,
                 sleep: Callable[[float], Awaitable[Any]] = asyncio.sleep):
        self.provider = provider
        self.cache = cache if cache is not None else ResponseCache()
        self.max_retries = max_retries
        self.retry_base_delay = retry_base_delay
        self._semaphore = asyncio.Semaphore(max_concurrent)
        self._bucket = AsyncTokenBucket(requests_per_second)
        self._sleep = sleep
        self._inflight: dict[str, asyncio.Task] = {}
        self._usage: dict[str, StageUsage] = {}

    @property
    def usage(self) -> dict[str, StageUsage]:
        return dict(self._usage)

    def _record(self, stage: str, reply: Optional[ProviderReply], cache_hit: bool) -> None:
        delta = StageUsage(
            calls=1,
            cache_hits=int(cache_hit),
            prompt_tokens=0 if cache_hit or reply is None else reply.usage.prompt_tokens,
            completion_tokens=0 if cache_hit or reply is None else reply.usage.completion_tokens,
        )
        self._usage[stage] = self._usage.get(stage, StageUsage()) + delta

    def _backoff(self, attempt: int) -> float:
        return self.retry_base_delay * (2 ** attempt) * (1 + random.uniform(0, _JITTER))

    async def _send_with_retries(self, request: LlmRequest) -> tuple[ProviderReply, int]:
        attempt = 0
        while True:
            await self._bucket.acquire()
            async with self._semaphore:
                try:
                    return await self.provider.send(request), attempt
                except ProviderHttpError as e:
                    if not _is_retryable(e.status_code):
                        raise TransportError(str(e), status_code=e.status_code, body=e.body, retries=attempt) from e
                    if attempt >= self.max_retries:
                        raise TransportError(
                            GatewayMessages.RETRIES_EXHAUSTED.format(retries=attempt, reason=e),
                            status_code=e.status_code, body=e.body, retries=attempt,
                        ) from e
                    delay = self._backoff(attempt)
                    if e.retry_after is not None:
                        delay = e.retry_after
                        self._bucket.pause(e.retry_after)
                    reason = f"HTTP {e.status_code}"
                except httpx.TransportError as e:
                    if attempt >= self.max_retries:
                        raise TransportError(
                            GatewayMessages.RETRIES_EXHAUSTED.format(retries=attempt, reason=e), retries=attempt,
                        ) from e
                    delay = self._backoff(attempt)
                    reason = type(e).__name__
            attempt += 1
            logger.warning(f"Provider call ({request.stage}) failed with {reason}; retry {attempt} in {delay:.2f}s")
            await self._sleep(delay)

    async def complete(self, request: LlmRequest) -> LlmResponse:
        """Send one request

        Raises:
            TransportError: Non-retryable status, or retries exhausted (carries the provider body)
        """
        if request.temperature != 0:
            reply, retries = await self._send_with_retries(request)
            self._record(request.stage, reply, cache_hit=False)
            return LlmResponse(text=reply.text, usage=reply.usage, retries=retries)

        key = request.cache_key
        cached = self.cache.get(key)
        if cached is not None:
            self._record(request.stage, cached, cache_hit=True)
            return LlmResponse(text=cached.text, usage=cached.usage, from_cache=True)

        pending = self._inflight.get(key)
        if pending is not None:
            reply, _ = await asyncio.shield(pending)
            self._record(request.stage, reply, cache_hit=True)
            return LlmResponse(text=reply.text, usage=reply.usage, from_cache=True)

        task = asyncio.ensure_future(self._send_with_retries(request))
        self._inflight[key] = task
        try:
            reply, retries = await asyncio.shield(task)
        finally:
            self._inflight.pop(key, None)
        self.cache.put(key, reply)
        self._record(request.stage, reply, cache_hit=False)
        return LlmResponse(text=reply.text, usage=reply.usage, retries=retries)

    async def complete_json(self, request: LlmRequest,
                            required_keys: list[str]) -> Union[dict[str, Any], NullSampleType]:
        """complete() then extract the last JSON object; MalformedJson/MissingKeys carry the raw text"""
        response = await self.complete(request)
        return extract_json(response.text, required_keys)

    async def aclose(self) -> None:
        await self.provider.aclose()


def build_gateway(config: PipelineConfig,
                  api_key: Optional[str] = None,
                  base_url: Optional[str] = None,
                  mock_transcript: Optional[Union[str, Path, dict]] = None,
                  transport: Optional[httpx.AsyncBaseTransport] = None) -> LlmGateway:
    """Gateway for a run: the mock provider when a transcript is given, the HTTP provider otherwise"""
    if mock_transcript is not None:
        provider: CompletionProvider = MockProvider(mock_transcript)
        logger.info("Using mock transcript provider")
    else:
        provider = HttpProvider(api_key or "", base_url or "", transport=transport)
    cache_dir = Path(config.cache_dir) / "llm" if config.cache_dir is not None else None
    return LlmGateway(
        provider,
        cache=ResponseCache(cache_dir),
        max_concurrent=config.max_concurrent_llm_calls,
        requests_per_second=config.llm_requests_per_second,
        max_retries=config.llm_max_retries,
        retry_base_delay=config.llm_retry_base_delay,
    )
