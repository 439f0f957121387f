"""Remote dataset-hub backend: card metadata from the hub API, rows from the datasets-server API"""
import asyncio
import hashlib
import json
import logging
import random
import time
from pathlib import Path
from typing import Any, Awaitable, Callable, Optional

import httpx

from constants.core_constants import ValueKind
from constants.hub_constants import CardFields, HubApi, HubMessages
from core.errors import EmptyDataset, HubAuthError, HubTransportError, NotFound
from core.io import read_json, write_json
from core.types import Column, DataRow, DatasetCard, DatasetSchema
from hub_client.local import normalize_row
from utils.rate_limiter import AsyncTokenBucket

logger = logging.getLogger(__name__)

_NUMERIC_DTYPES = ("int", "uint", "float", "double", "decimal")


def kind_from_feature(feature_type: Any) -> ValueKind:
    """Map a datasets-server feature type description to a ValueKind"""
    if isinstance(feature_type, list):
        return ValueKind.LIST
    if not isinstance(feature_type, dict):
        return ValueKind.OTHER
    tag = feature_type.get(HubApi.TYPE_TAG)
    if tag == "Value":
        dtype = str(feature_type.get(HubApi.DTYPE, ""))
        if dtype in ("string", "large_string"):
            return ValueKind.TEXT
        if dtype == "bool":
            return ValueKind.BOOLEAN
        if dtype.startswith(_NUMERIC_DTYPES):
            return ValueKind.NUMBER
        return ValueKind.OTHER
    if tag == "ClassLabel":
        return ValueKind.NUMBER
    if tag in ("Sequence", "LargeList", "List"):
        return ValueKind.LIST
    if tag is None:
        return ValueKind.NESTED
    return ValueKind.OTHER


class RemoteHub:
    def __init__(self,
                 base_url: str,
                 rows_url: str,
                 token: Optional[str] = None,
                 split: str = "train",
                 cache_dir: Optional[Path] = None,
                 cache_ttl_seconds: int = 86400,
                 requests_per_second: float = 5.0,
                 max_retries: int = 3,
                 retry_base_delay: float = 1.0,
                 transport: Optional[httpx.AsyncBaseTransport] = None,
                 sleep: Callable[[float], Awaitable[Any]] = asyncio.sleep):
        headers = {"Authorization": f"Bearer {token}"} if token else {}
        self._client = httpx.AsyncClient(headers=headers, timeout=httpx.Timeout(60.0, connect=10.0),
                                         transport=transport)
        self.base_url = base_url.rstrip("/")
        self.rows_url = rows_url.rstrip("/")
        self.split = split
        self.cache_dir = Path(cache_dir) / HubApi.CACHE_SUBDIR if cache_dir is not None else None
        self.cache_ttl_seconds = cache_ttl_seconds
        self.max_retries = max_retries
        self.retry_base_delay = retry_base_delay
        self._bucket = AsyncTokenBucket(requests_per_second)
        self._sleep = sleep

    def _cache_path(self, url: str, params: dict[str, Any]) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        digest = hashlib.sha256(json.dumps([url, params], sort_keys=True).encode("utf-8")).hexdigest()
        return self.cache_dir / f"{digest}.json"

    def _cached(self, path: Optional[Path]) -> Optional[Any]:
        if path is None or not path.is_file():
            return None
        try:
            entry = read_json(path)
        except (OSError, ValueError):
            return None
        if time.time() - entry.get("fetched_at", 0) > self.cache_ttl_seconds:
            return None
        return entry.get("data")

    async def _get_json(self, url: str, params: Optional[dict[str, Any]] = None,
                        cursor: Optional[str] = None, dataset: Optional[str] = None) -> Any:
        params = params or {}
        cache_path = self._cache_path(url, params)
        cached = self._cached(cache_path)
        if cached is not None:
            return cached

        attempt = 0
        while True:
            await self._bucket.acquire()
            try:
                response = await self._client.get(url, params=params)
                reason = f"HTTP {response.status_code}"
                if response.status_code == 404:
                    raise NotFound(HubMessages.NOT_FOUND.format(name=dataset or url), dataset=dataset)
                if response.status_code in (401, 403):
                    raise HubAuthError(HubMessages.AUTH.format(status=response.status_code, url=url), dataset=dataset)
                if response.status_code < 400:
                    data = response.json()
                    break
                if response.status_code != 429 and response.status_code < 500:
                    raise HubTransportError(f"{reason}: {response.text[:300]}", cursor=cursor)
            except httpx.TransportError as e:
                reason = type(e).__name__
            if attempt >= self.max_retries:
                raise HubTransportError(HubMessages.TRANSPORT.format(retries=attempt, reason=reason), cursor=cursor)
            delay = self.retry_base_delay * (2 ** attempt) * (1 + random.uniform(0, 0.25))
            attempt += 1
            logger.warning(f"Hub request {url} failed with {reason}; retry {attempt} in {delay:.2f}s")
            await self._sleep(delay)

        if cache_path is not None:
            write_json(cache_path, {"fetched_at": time.time(), "data": data})
        return data

    async def configs(self, name: str) -> list[str]:
        try:
            data = await self._get_json(f"{self.rows_url}{HubApi.SPLITS}", {"dataset": name}, dataset=name)
        except NotFound:
            return []
        configs: list[str] = []
        for entry in data.get(HubApi.SPLITS_KEY, []):
            config = entry.get(HubApi.CONFIG_KEY)
            if config and config not in configs:
                configs.append(config)
        return configs

    async def card(self, name: str) -> DatasetCard:
        info = await self._get_json(f"{self.base_url}{HubApi.DATASET_INFO.format(name=name)}", dataset=name)
        card_data = info.get(CardFields.CARD_DATA) or {}
        description = info.get(CardFields.DESCRIPTION) or card_data.get(CardFields.PRETTY_NAME) or ""
        return DatasetCard(
            name=name,
            configs=await self.configs(name),
            description=description,
            tags=[str(tag) for tag in info.get(CardFields.TAGS) or []],
        )

    async def list_cards(self, limit: int) -> list[DatasetCard]:
        """Cards from the hub listing; configs are left empty and resolved on fetch_card"""
        data = await self._get_json(f"{self.base_url}{HubApi.DATASET_LIST}", {"limit": limit, "full": "true"})
        cards = []
        for info in data[:limit]:
            cards.append(DatasetCard(
                name=info[CardFields.ID],
                description=info.get(CardFields.DESCRIPTION) or "",
                tags=[str(tag) for tag in info.get(CardFields.TAGS) or []],
            ))
        return cards

    async def rows_page(self, name: str, config: str, offset: int,
                        length: int) -> tuple[DatasetSchema, list[DataRow], Optional[int]]:
        """One page from the rows endpoint: (schema, rows, total row count if reported)"""
        params = {"dataset": name, "config": config, "split": self.split, "offset": offset, "length": length}
        data = await self._get_json(f"{self.rows_url}{HubApi.ROWS}", params, cursor=str(offset), dataset=name)
        features = data.get(HubApi.FEATURES_KEY) or []
        schema = DatasetSchema(columns=[
            Column(name=f[HubApi.FEATURE_NAME], value_kind=kind_from_feature(f.get(HubApi.FEATURE_TYPE)))
            for f in features
        ]) if features else None
        rows = [
            normalize_row(item[HubApi.ROW_KEY], item.get(HubApi.ROW_IDX_KEY, offset + position))
            for position, item in enumerate(data.get(HubApi.ROWS_KEY) or [])
        ]
        return schema, rows, data.get(HubApi.TOTAL_KEY)

    async def schema_and_samples(self, name: str, config: str, sample_n: int) -> tuple[DatasetSchema, list[DataRow]]:
        schema, rows, _ = await self.rows_page(name, config, 0, sample_n)
        if not rows:
            raise EmptyDataset(HubMessages.EMPTY.format(name=name, config=config), dataset=name)
        if schema is None:
            schema = DatasetSchema(columns=[Column(name=column) for column in rows[0].values])
        return schema, rows[:sample_n]

    async def aclose(self) -> None:
        await self._client.aclose()
