"""Text embedders: a deterministic feature-hashing embedder and a remote embeddings API"""
import hashlib
import re
from typing import Optional, Protocol

import httpx
import numpy as np

from constants.gateway_constants import ProviderFields
from core.errors import TransportError

_TOKEN_RE = re.compile(r"\w+")


class Embedder(Protocol):
    embedder_id: str
    dimension: int

    async def embed(self, text: str) -> np.ndarray: ...


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class HashingEmbedder:
    """Signed feature hashing of unigrams and bigrams; no model, fully reproducible"""

    def __init__(self, dimension: int = 256):
        self.dimension = dimension
        self.embedder_id = f"hashing-{dimension}"

    def _bucket(self, feature: str) -> tuple[int, float]:
        digest = hashlib.blake2b(feature.encode("utf-8"), digest_size=8).digest()
        value = int.from_bytes(digest, "little")
        return value % self.dimension, 1.0 if (value >> 63) & 1 else -1.0

    def embed_sync(self, text: str) -> np.ndarray:
        tokens = tokenize(text)
        features = tokens + [f"{a} {b}" for a, b in zip(tokens, tokens[1:])]
        vector = np.zeros(self.dimension, dtype=np.float64)
        for feature in features:
            index, sign = self._bucket(feature)
            vector[index] += sign
        return vector

    async def embed(self, text: str) -> np.ndarray:
        return self.embed_sync(text)


class RemoteEmbedder:
    """OpenAI-compatible /embeddings endpoint"""

    def __init__(self, api_key: str, base_url: str, model: str, dimension: Optional[int] = None,
                 transport: Optional[httpx.AsyncBaseTransport] = None):
        self.model = model
        self.dimension = dimension or 0
        self.embedder_id = f"remote-{model}"
        self._client = httpx.AsyncClient(
            base_url=base_url.rstrip("/"),
            headers={"Authorization": f"Bearer {api_key}"},
            timeout=httpx.Timeout(60.0, connect=10.0),
            transport=transport,
        )

    async def embed(self, text: str) -> np.ndarray:
        response = await self._client.post(ProviderFields.EMBEDDINGS_PATH, json={"model": self.model, "input": text})
        if response.status_code >= 400:
            raise TransportError(f"embedding request failed: HTTP {response.status_code}",
                                 status_code=response.status_code, body=response.text[:300])
        vector = np.asarray(response.json()["data"][0]["embedding"], dtype=np.float64)
        if not self.dimension:
            self.dimension = int(vector.shape[0])
        return vector

    async def aclose(self) -> None:
        await self._client.aclose()
