# Copyright (c) The UniGAP Authors. All rights reserved.
from .analysis import InsertionStats, analyze_insertions
from .optimizers import *  # noqa
from .report import ExperimentReport
from .sweep import (METHODS, method_variant, run_many, run_seeds,
                    summarize_runs, sweep_layers)
from .train_config import TrainConfig
from .trainer import UniGAPTrainer, accuracy, evaluate, train_unigap
from .variants import (AdaEdgeVariant, BaselineVariant, BaseVariant,
                       HalfHopVariant, UniGAPVariant, configure_variant)

__all__ = [
    'Adam', 'OptimizerConstructor', 'TrainConfig', 'ExperimentReport',
    'InsertionStats', 'analyze_insertions', 'BaseVariant', 'BaselineVariant',
    'UniGAPVariant', 'HalfHopVariant', 'AdaEdgeVariant', 'configure_variant',
    'UniGAPTrainer', 'train_unigap', 'evaluate', 'accuracy', 'run_many',
    'run_seeds', 'summarize_runs', 'sweep_layers', 'method_variant', 'METHODS'
]
