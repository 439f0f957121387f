"""Content-addressed response cache (memory, optionally mirrored to disk)"""
import logging
from pathlib import Path
from typing import Optional

from core.io import write_text_atomic
from llm_gateway.types import ProviderReply

logger = logging.getLogger(__name__)


class ResponseCache:
    """Maps a request cache_key to the provider reply

    Disk entries live at <directory>/<key[:2]>/<key>.json so an interrupted run can resume
    without paying again. Concurrent writers of one key write identical content; last one wins.
    """

    def __init__(self, directory: Optional[Path] = None):
        self.directory = Path(directory) if directory is not None else None
        self._memory: dict[str, ProviderReply] = {}

    def _path(self, key: str) -> Path:
        return self.directory / key[:2] / f"{key}.json"

    def get(self, key: str) -> Optional[ProviderReply]:
        if key in self._memory:
            return self._memory[key]
        if self.directory is None:
            return None
        path = self._path(key)
        if not path.is_file():
            return None
        try:
            reply = ProviderReply.model_validate_json(path.read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            logger.warning(f"Ignoring unreadable cache entry {path}: {e}")
            return None
        self._memory[key] = reply
        return reply

    def put(self, key: str, reply: ProviderReply) -> None:
        self._memory[key] = reply
        if self.directory is not None:
            write_text_atomic(self._path(key), reply.model_dump_json())

    def __len__(self) -> int:
        return len(self._memory)

    def __contains__(self, key: str) -> bool:
        return self.get(key) is not None


