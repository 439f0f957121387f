# Configuration package
from .pipeline_config import load_pipeline_config
from .settings import Settings, get_settings, reset_settings

__all__ = ['Settings', 'get_settings', 'reset_settings', 'load_pipeline_config']
