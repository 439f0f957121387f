# Core domain package
from .config import PipelineConfig, validate_config
from .report import DatasetCounters, RunReport, StageUsage, merge_report
from .types import (
    Column,
    DataRow,
    DatasetCard,
    DatasetRef,
    DatasetSchema,
    DemoExample,
    Provenance,
    SelectedDataset,
    TaskSpec,
    TransformedExample,
    TransformPlan,
)

__all__ = [
    'PipelineConfig', 'validate_config',
    'DatasetCounters', 'RunReport', 'StageUsage', 'merge_report',
    'Column', 'DataRow', 'DatasetCard', 'DatasetRef', 'DatasetSchema', 'DemoExample',
    'Provenance', 'SelectedDataset', 'TaskSpec', 'TransformedExample', 'TransformPlan',
]
