from .dedup import dedup_filter
from .difficulty import DifficultyReport, estimate_difficulty, parse_difficulty
from .diversity import DiversityReport, diversity_report
from .reports import QualityReport, analyze_examples, export_inputs, render_quality_table, write_quality
from .rouge import UniquenessReport, rouge_l, uniqueness_report
from .thresholds import threshold_for

__all__ = ['dedup_filter', 'DifficultyReport', 'estimate_difficulty', 'parse_difficulty', 'DiversityReport',
           'diversity_report', 'QualityReport', 'analyze_examples', 'export_inputs', 'render_quality_table',
           'write_quality', 'UniquenessReport', 'rouge_l', 'uniqueness_report', 'threshold_for']
