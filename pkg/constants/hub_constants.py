from enum import StrEnum


class SourceKind(StrEnum):
    REMOTE_HUB = 'remote_hub'
    LOCAL_DIR = 'local_dir'


class LocalLayout(StrEnum):
    CARD_FILE = 'card.json'
    SCHEMA_FILE = 'schema.json'
    ROWS_FILE = 'rows.jsonl'


class CardFields(StrEnum):
    NAME = 'name'
    ID = 'id'
    DESCRIPTION = 'description'
    TAGS = 'tags'
    CONFIGS = 'configs'
    CARD_DATA = 'cardData'
    PRETTY_NAME = 'pretty_name'
    COLUMNS = 'columns'
    VALUE_KIND = 'value_kind'


class HubApi(StrEnum):
    DATASET_INFO = '/api/datasets/{name}'
    DATASET_LIST = '/api/datasets'
    SPLITS = '/splits'
    ROWS = '/rows'
    SPLITS_KEY = 'splits'
    CONFIG_KEY = 'config'
    SPLIT_KEY = 'split'
    ROWS_KEY = 'rows'
    ROW_KEY = 'row'
    ROW_IDX_KEY = 'row_idx'
    FEATURES_KEY = 'features'
    FEATURE_NAME = 'name'
    FEATURE_TYPE = 'type'
    DTYPE = 'dtype'
    TYPE_TAG = '_type'
    TOTAL_KEY = 'num_rows_total'
    CACHE_SUBDIR = 'hub'


class HubMessages(StrEnum):
    NOT_FOUND = "dataset not found: {name}"
    CONFIG_NOT_FOUND = "dataset {name} has no config {config}"
    EMPTY = "dataset {name}:{config} has no rows"
    AUTH = "hub rejected credentials (HTTP {status}) for {url}"
    TRANSPORT = "hub request failed after {retries} retries: {reason}"
    BAD_LOCATION = "corpus location must be non-empty"
    MISSING_DIR = "local corpus directory does not exist: {path}"
    EMPTY_DESCRIPTION = "dataset {name} has an empty description"
    BAD_CARD = "unreadable card for {name}: {error}"
