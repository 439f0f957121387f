# End-to-end run orchestration
from .pipeline import Pipeline, ProbeVerdict, probe_dataset, run_pipeline
from .state import DatasetAttempt, RunState, next_candidate

__all__ = ['Pipeline', 'ProbeVerdict', 'probe_dataset', 'run_pipeline', 'DatasetAttempt', 'RunState', 'next_candidate']
