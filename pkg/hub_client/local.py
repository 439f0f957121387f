"""Local corpus backend

Layout::

    <dir>/<dataset>/card.json               {"description": ..., "tags": [...], "configs": [...]}
    <dir>/<dataset>/<config>/schema.json    {"columns": [{"name": ..., "value_kind": ...}]}   (optional)
    <dir>/<dataset>/<config>/rows.jsonl     one JSON object per row
"""
import json
import logging
from itertools import islice
from pathlib import Path
from typing import Any, Iterator, Optional

from constants.core_constants import ValueKind
from constants.hub_constants import CardFields, HubMessages, LocalLayout
from core.errors import EmptyDataset, HubError, NotFound
from core.normalize import infer_value_kind, normalize_value
from core.types import Column, DataRow, DatasetCard, DatasetSchema

logger = logging.getLogger(__name__)

# Rows scanned when a config has no schema.json
_INFERENCE_ROWS = 20


def normalize_row(raw: dict[str, Any], source_index: int) -> DataRow:
    return DataRow(values={name: normalize_value(value) for name, value in raw.items()}, source_index=source_index)


def infer_schema(raw_rows: list[dict[str, Any]]) -> DatasetSchema:
    """Columns in first-seen order; a column's kind comes from its first non-null value"""
    kinds: dict[str, ValueKind] = {}
    for raw in raw_rows:
        for name, value in raw.items():
            if name not in kinds or (kinds[name] == ValueKind.OTHER and value is not None):
                kinds[name] = infer_value_kind(value) if value is not None else ValueKind.OTHER
    return DatasetSchema(columns=[Column(name=name, value_kind=kind) for name, kind in kinds.items()])


class LocalCorpus:
    def __init__(self, root: Path):
        self.root = Path(root)
        if not self.root.is_dir():
            raise NotFound(HubMessages.MISSING_DIR.format(path=self.root))
        self._offsets: dict[Path, tuple[tuple[int, int], list[int]]] = {}

    def _dataset_dir(self, name: str) -> Path:
        path = self.root / name
        if not (path / LocalLayout.CARD_FILE).is_file():
            raise NotFound(HubMessages.NOT_FOUND.format(name=name), dataset=name)
        return path

    def _config_dir(self, name: str, config: str) -> Path:
        path = self._dataset_dir(name) / config
        if not (path / LocalLayout.ROWS_FILE).is_file():
            raise NotFound(HubMessages.CONFIG_NOT_FOUND.format(name=name, config=config), dataset=name)
        return path

    def list_names(self) -> list[str]:
        return sorted(p.name for p in self.root.iterdir() if (p / LocalLayout.CARD_FILE).is_file())

    def card(self, name: str) -> DatasetCard:
        path = self._dataset_dir(name)
        try:
            data = json.loads((path / LocalLayout.CARD_FILE).read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise HubError(HubMessages.BAD_CARD.format(name=name, error=e), dataset=name) from e
        configs = data.get(CardFields.CONFIGS) or sorted(
            p.name for p in path.iterdir() if (p / LocalLayout.ROWS_FILE).is_file()
        )
        return DatasetCard(
            name=name,
            configs=configs,
            description=data.get(CardFields.DESCRIPTION) or "",
            tags=data.get(CardFields.TAGS) or [],
        )

    def _raw_rows(self, name: str, config: str) -> Iterator[dict[str, Any]]:
        rows_path = self._config_dir(name, config) / LocalLayout.ROWS_FILE
        with rows_path.open("r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if line:
                    yield json.loads(line)

    def schema(self, name: str, config: str) -> Optional[DatasetSchema]:
        """Declared schema, or None when the config has no schema.json"""
        schema_path = self._config_dir(name, config) / LocalLayout.SCHEMA_FILE
        if not schema_path.is_file():
            return None
        return DatasetSchema.model_validate_json(schema_path.read_text(encoding="utf-8"))

    def schema_and_samples(self, name: str, config: str, sample_n: int) -> tuple[DatasetSchema, list[DataRow]]:
        head = list(islice(self._raw_rows(name, config), max(sample_n, _INFERENCE_ROWS)))
        if not head:
            raise EmptyDataset(HubMessages.EMPTY.format(name=name, config=config), dataset=name)
        schema = self.schema(name, config) or infer_schema(head)
        samples = [normalize_row(raw, index) for index, raw in enumerate(head[:sample_n])]
        return schema, samples

    def _line_offsets(self, rows_path: Path) -> list[int]:
        """Byte offsets of the non-empty lines, rebuilt when the file changes"""
        stat = rows_path.stat()
        stamp = (stat.st_mtime_ns, stat.st_size)
        cached = self._offsets.get(rows_path)
        if cached is not None and cached[0] == stamp:
            return cached[1]
        offsets: list[int] = []
        with rows_path.open("rb") as f:
            position = 0
            for line in f:
                if line.strip():
                    offsets.append(position)
                position += len(line)
        self._offsets[rows_path] = (stamp, offsets)
        return offsets

    def rows(self, name: str, config: str, start: int, limit: int) -> list[DataRow]:
        rows_path = self._config_dir(name, config) / LocalLayout.ROWS_FILE
        selected = self._line_offsets(rows_path)[start:start + limit]
        if not selected:
            return []
        rows: list[DataRow] = []
        with rows_path.open("rb") as f:
            for index, offset in enumerate(selected, start=start):
                f.seek(offset)
                rows.append(normalize_row(json.loads(f.readline()), index))
        return rows
