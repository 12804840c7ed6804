# Experiment module
from .metrics import auc, accuracy
from .eval_harness import (
    ExperimentConfig, ExperimentResult, RepetitionResult, run_experiment, sweep,
    run_benchmark, summarize
)
from .report_writer import emit_report, load_json_report

__all__ = [
    'auc', 'accuracy',
    'ExperimentConfig', 'ExperimentResult', 'RepetitionResult', 'run_experiment', 'sweep',
    'run_benchmark', 'summarize',
    'emit_report', 'load_json_report'
]
