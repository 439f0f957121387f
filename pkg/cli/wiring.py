"""Builds the collaborators a verb needs from parsed arguments and Settings"""
import argparse
import logging
from pathlib import Path
from typing import Optional

from config.settings import Settings
from constants.cli_constants import CliMessages
from constants.hub_constants import SourceKind
from constants.pipeline_constants import EmbedderKind
from core.config import PipelineConfig
from core.errors import ConfigValidationError, TransportError
from hub_client.client import HubClient
from hub_client.source import CorpusSource
from llm_gateway.gateway import LlmGateway, build_gateway
from retrieval.embedders import Embedder, HashingEmbedder, RemoteEmbedder
from retrieval.index import EmbeddingIndex, build_index, load_index

logger = logging.getLogger(__name__)


def build_hub(args: argparse.Namespace, settings: Settings, config: PipelineConfig) -> HubClient:
    if getattr(args, "corpus", None) is not None:
        source = CorpusSource(kind=SourceKind.LOCAL_DIR, location=str(args.corpus))
        return HubClient(source)
    if getattr(args, "hub", False):
        source = CorpusSource(kind=SourceKind.REMOTE_HUB, location=settings.hub_base_url, auth=settings.hub_token)
        return HubClient(
            source,
            rows_url=settings.hub_rows_url,
            split=config.hub_split,
            cache_dir=config.cache_dir,
            cache_ttl_seconds=config.hub_cache_ttl_seconds,
            requests_per_second=config.hub_requests_per_second,
        )
    raise ConfigValidationError("corpus", CliMessages.CORPUS_REQUIRED)


def build_embedder(config: PipelineConfig, settings: Settings) -> Embedder:
    if config.embedder == EmbedderKind.REMOTE:
        if settings.embedding_api_key is None:
            raise TransportError(CliMessages.MISSING_API_KEY)
        return RemoteEmbedder(settings.embedding_api_key.get_secret_value(), settings.embedding_base_url,
                              config.embedding_model, config.embedding_dimension)
    return HashingEmbedder(config.embedding_dimension)


def build_llm_gateway(args: argparse.Namespace, settings: Settings, config: PipelineConfig) -> LlmGateway:
    """Mock provider for --mock-transcript, otherwise the HTTP provider (needs LLM_API_KEY)"""
    transcript: Optional[Path] = getattr(args, "mock_transcript", None)
    if transcript is not None:
        return build_gateway(config, mock_transcript=transcript)
    if settings.llm_api_key is None:
        raise TransportError(CliMessages.MISSING_API_KEY)
    return build_gateway(config, api_key=settings.llm_api_key.get_secret_value(), base_url=settings.llm_base_url)


async def resolve_index(args: argparse.Namespace, hub: HubClient, embedder: Embedder) -> EmbeddingIndex:
    index_path: Optional[Path] = getattr(args, "index", None)
    if index_path is not None:
        index = load_index(index_path)
        if index.embedder_id != embedder.embedder_id:
            raise ConfigValidationError(
                "embedder", f"index {index_path} was built with {index.embedder_id}, not {embedder.embedder_id}")
        logger.info(f"Loaded index of {len(index)} datasets from {index_path}")
        return index
    return await build_index(await hub.list_cards(), embedder)


async def close_embedder(embedder: Embedder) -> None:
    closer = getattr(embedder, "aclose", None)
    if closer is not None:
        await closer()
