"""Uniform async access to a corpus, whichever backend holds it"""
import logging
from pathlib import Path
from typing import AsyncIterator, Optional

import httpx

from constants.hub_constants import HubMessages, SourceKind
from constants.pipeline_constants import PipelineDefaults
from core.types import DataRow, DatasetCard, DatasetSchema
from hub_client.local import LocalCorpus
from hub_client.remote import RemoteHub
from hub_client.source import CorpusSource, RowPage

logger = logging.getLogger(__name__)


class HubClient:
    """Cards, schemas and row pages from a CorpusSource

    Remote sources take their rows endpoint from `rows_url`; local sources ignore every
    remote-only argument.
    """

    def __init__(self,
                 source: CorpusSource,
                 rows_url: Optional[str] = None,
                 split: str = "train",
                 cache_dir: Optional[Path] = None,
                 cache_ttl_seconds: int = PipelineDefaults.HUB_CACHE_TTL_SECONDS,
                 requests_per_second: float = PipelineDefaults.HUB_REQUESTS_PER_SECOND,
                 page_size: int = PipelineDefaults.HUB_PAGE_SIZE,
                 transport: Optional[httpx.AsyncBaseTransport] = None):
        self.source = source
        self.page_size = page_size
        self._local: Optional[LocalCorpus] = None
        self._remote: Optional[RemoteHub] = None
        if source.kind == SourceKind.LOCAL_DIR:
            self._local = LocalCorpus(Path(source.location))
        else:
            self._remote = RemoteHub(
                base_url=source.location,
                rows_url=rows_url or source.location,
                token=source.token,
                split=split,
                cache_dir=cache_dir,
                cache_ttl_seconds=cache_ttl_seconds,
                requests_per_second=requests_per_second,
                transport=transport,
            )

    async def fetch_card(self, name: str) -> DatasetCard:
        """Card for one dataset; an empty description is logged, not rejected

        Raises:
            NotFound: Unknown dataset
            HubAuthError: Credentials rejected
            HubTransportError: Remote failure after retries
        """
        card = self._local.card(name) if self._local is not None else await self._remote.card(name)
        if card.description_missing:
            logger.warning(HubMessages.EMPTY_DESCRIPTION.format(name=name))
        return card

    async def list_cards(self, limit: Optional[int] = None) -> list[DatasetCard]:
        if self._local is not None:
            names = self._local.list_names()
            if limit is not None:
                names = names[:limit]
            return [await self.fetch_card(name) for name in names]
        return await self._remote.list_cards(limit or PipelineDefaults.HUB_PAGE_SIZE)

    async def fetch_schema_and_samples(self, name: str, config: str,
                                       sample_n: int) -> tuple[DatasetSchema, list[DataRow]]:
        """Schema plus the first min(sample_n, available) rows of the split

        Raises:
            NotFound: Unknown dataset or config
            EmptyDataset: The config has no rows
        """
        if self._local is not None:
            return self._local.schema_and_samples(name, config, sample_n)
        return await self._remote.schema_and_samples(name, config, sample_n)

    async def _page(self, name: str, config: str, offset: int, length: int) -> tuple[list[DataRow], Optional[int]]:
        if self._local is not None:
            return self._local.rows(name, config, offset, length), None
        _, rows, total = await self._remote.rows_page(name, config, offset, length)
        return rows, total

    async def stream_rows(self, name: str, config: str, start: int = 0,
                          limit: Optional[int] = None) -> AsyncIterator[RowPage]:
        """Yield pages of rows from `start` until `limit` rows are delivered or the data runs out

        next_cursor is the offset to resume from, as a string; the final page has none.

        Raises:
            HubTransportError: After page-level retries, carrying the cursor of the failed page
        """
        offset = start
        remaining = limit
        while remaining is None or remaining > 0:
            length = self.page_size if remaining is None else min(self.page_size, remaining)
            rows, total = await self._page(name, config, offset, length)
            offset += len(rows)
            if remaining is not None:
                remaining -= len(rows)
            exhausted = len(rows) < length or (total is not None and offset >= total)
            done = exhausted or remaining == 0
            next_cursor = None if done else str(offset)
            if rows or next_cursor is None:
                yield RowPage(rows=rows, next_cursor=next_cursor, total_estimate=total)
            if done:
                return

    async def read_rows(self, name: str, config: str, start: int = 0, limit: Optional[int] = None) -> list[DataRow]:
        """All rows of stream_rows concatenated"""
        rows: list[DataRow] = []
        async for page in self.stream_rows(name, config, start, limit):
            rows.extend(page.rows)
        return rows

    async def aclose(self) -> None:
        if self._remote is not None:
            await self._remote.aclose()
