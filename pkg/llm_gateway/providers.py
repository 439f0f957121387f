"""Completion providers: an OpenAI-compatible HTTPS backend and a deterministic transcript mock"""
import json
import logging
from pathlib import Path
from typing import Any, Optional, Protocol, Union

import httpx

from constants.gateway_constants import GatewayMessages, ProviderFields, TranscriptFields
from core.errors import MockTranscriptMiss, TransportError
from llm_gateway.types import LlmRequest, ProviderReply, TokenUsage, prompt_digest
from utils.pattern_registry import PatternRegistry

logger = logging.getLogger(__name__)

_GROUP_SLOT = "{{%s}}"


class ProviderHttpError(Exception):
    """Non-2xx reply; the gateway decides whether it is retryable"""

    def __init__(self, status_code: int, body: str, retry_after: Optional[float] = None):
        self.status_code = status_code
        self.body = body
        self.retry_after = retry_after
        super().__init__(GatewayMessages.PROVIDER_ERROR.format(status=status_code, body=body[:300]))


class CompletionProvider(Protocol):
    name: str

    async def send(self, request: LlmRequest) -> ProviderReply: ...

    async def aclose(self) -> None: ...


def _parse_retry_after(value: Optional[str]) -> Optional[float]:
    if not value:
        return None
    try:
        return max(0.0, float(value))
    except ValueError:
        return None


class HttpProvider:
    """Chat-completions endpoint with bearer-token auth"""
    name = "http"

    def __init__(self, api_key: str, base_url: str, timeout: float = 120.0,
                 transport: Optional[httpx.AsyncBaseTransport] = None):
        if not api_key:
            raise TransportError(GatewayMessages.MISSING_API_KEY)
        self._client = httpx.AsyncClient(
            base_url=base_url.rstrip("/"),
            headers={"Authorization": f"Bearer {api_key}"},
            timeout=httpx.Timeout(timeout, connect=10.0),
            transport=transport,
        )

    async def send(self, request: LlmRequest) -> ProviderReply:
        body = {
            "model": request.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }
        response = await self._client.post(ProviderFields.COMPLETIONS_PATH, json=body)
        if response.status_code >= 400:
            raise ProviderHttpError(
                response.status_code,
                response.text,
                _parse_retry_after(response.headers.get(ProviderFields.RETRY_AFTER)),
            )
        data = response.json()
        try:
            content = data[ProviderFields.CHOICES][0][ProviderFields.MESSAGE][ProviderFields.CONTENT]
        except (KeyError, IndexError, TypeError) as exc:
            raise TransportError(GatewayMessages.NO_CONTENT, body=json.dumps(data)[:300]) from exc
        usage = data.get(ProviderFields.USAGE) or {}
        return ProviderReply(
            text=content or "",
            usage=TokenUsage(
                prompt_tokens=usage.get(ProviderFields.PROMPT_TOKENS, 0),
                completion_tokens=usage.get(ProviderFields.COMPLETION_TOKENS, 0),
            ),
        )

    async def aclose(self) -> None:
        await self._client.aclose()


class _TranscriptEntry:
    """One canned answer; a `responses` list is served in call order, the last one repeating"""

    def __init__(self, spec: dict[str, Any]):
        responses = spec.get(TranscriptFields.RESPONSES)
        if responses is None:
            responses = [spec[TranscriptFields.RESPONSE]]
        self.responses: list[str] = [self._as_text(r) for r in responses]
        self.served = 0

    @staticmethod
    def _as_text(value: Any) -> str:
        return value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)

    def next_text(self, match=None) -> str:
        text = self.responses[min(self.served, len(self.responses) - 1)]
        self.served += 1
        if match is not None:
            for group, value in match.groupdict().items():
                text = text.replace(_GROUP_SLOT % group, value or "")
        return text


class MockProvider:
    """Answers from a transcript: {"entries": [{"digest"|"pattern": ..., "response"|"responses": ...}], "default": ...}

    Digest entries match sha256(prompt) exactly; pattern entries are regex searches (DOTALL) tried in
    file order, and `{{group}}` slots in the response are filled from the match's named groups verbatim.
    """
    name = "mock"

    def __init__(self, transcript: Union[dict[str, Any], str, Path]):
        if not isinstance(transcript, dict):
            transcript = json.loads(Path(transcript).read_text(encoding="utf-8"))
        self.registry = PatternRegistry()
        for spec in transcript.get(TranscriptFields.ENTRIES, []):
            entry = _TranscriptEntry(spec)
            if TranscriptFields.DIGEST in spec:
                self.registry.register(spec[TranscriptFields.DIGEST], entry)
            else:
                self.registry.register_pattern(spec[TranscriptFields.PATTERN], entry)
        default = transcript.get(TranscriptFields.DEFAULT)
        self.default = _TranscriptEntry({TranscriptFields.RESPONSE: default}) if default is not None else None
        self.calls: list[LlmRequest] = []
        logger.debug(f"Mock provider loaded {len(self.registry)} transcript entries")

    async def send(self, request: LlmRequest) -> ProviderReply:
        self.calls.append(request)
        digest = prompt_digest(request.prompt)
        entry, match = self.registry.resolve(digest, request.prompt)
        if entry is None:
            if self.default is None:
                raise MockTranscriptMiss(GatewayMessages.TRANSCRIPT_MISS.format(digest=digest))
            entry = self.default
        text = entry.next_text(match)
        return ProviderReply(
            text=text,
            usage=TokenUsage(prompt_tokens=len(request.prompt.split()), completion_tokens=len(text.split())),
        )

    def call_count(self, stage: Optional[str] = None) -> int:
        if stage is None:
            return len(self.calls)
        return sum(1 for call in self.calls if call.stage == stage)

    async def aclose(self) -> None:
        return None
