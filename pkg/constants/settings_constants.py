from enum import StrEnum

class SettingsConstants(StrEnum):
    LLM_API_KEY_VAR = 'LLM_API_KEY'
    LLM_BASE_URL_VAR = 'LLM_BASE_URL'
    LLM_BASE_URL_DEFAULT = 'https://api.openai.com/v1'
    EMBEDDING_API_KEY_VAR = 'EMBEDDING_API_KEY'
    EMBEDDING_BASE_URL_VAR = 'EMBEDDING_BASE_URL'
    HUB_TOKEN_VAR = 'HUB_TOKEN'
    HUB_BASE_URL_VAR = 'HUB_BASE_URL'
    HUB_BASE_URL_DEFAULT = 'https://huggingface.co'
    HUB_ROWS_URL_VAR = 'HUB_ROWS_URL'
    HUB_ROWS_URL_DEFAULT = 'https://datasets-server.huggingface.co'
    CACHE_DIR_VAR = 'CACHE_DIR'
    LOG_LVL_VAR = 'LOG_LEVEL'
    LOG_LVL = 'INFO'
    LOG_FILE_VAR = 'LOG_FILE'
    PIPELINE_ENV_PREFIX = 'PIPELINE_'

class LogConfigConstants(StrEnum):
    LOGGER_HTTPX = 'httpx'
    LOGGER_HTTPCORE = 'httpcore'
    LVL_DEBUG = 'DEBUG'
    LVL_INFO = 'INFO'
    LVL_WARNING = 'WARNING'
    LVL_ERROR = 'ERROR'
    LVL_CRITICAL = 'CRITICAL'
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    @classmethod
    def get_all_from_type(cls, type: str):
        if type.lower() in ['logger', 'loggers']:
            return [e for e in cls if e.name.startswith('LOGGER_')]

        elif type.lower() in ['log levels', 'log lvls', 'lvls', 'levels', 'log_levels', 'log_lvls']:
            return [e for e in cls if e.name.startswith('LVL_')]
        return []
