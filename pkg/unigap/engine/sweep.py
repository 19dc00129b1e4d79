# Copyright (c) The UniGAP Authors. All rights reserved.
"""Multi-run drivers: seeds of one config and layer-depth sweeps."""
import copy
import os.path as osp
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from mmengine.logging import print_log
from mmengine.utils import track_parallel_progress

from unigap.datasets import GraphBundle
from unigap.utils.fileio import write_csv
from unigap.utils.plotting import plot_lines
from .report import ExperimentReport
from .train_config import TrainConfig
from .trainer import train_unigap

METHODS = ('baseline', 'halfhop', 'adaedge', 'unigap')
SUMMARY_METRICS = ('train_accuracy', 'val_accuracy', 'test_accuracy', 'mad',
                   'dirichlet')


def _run_task(task) -> ExperimentReport:
    g, cfg = task
    return train_unigap(g, cfg)


def run_many(g: GraphBundle,
             cfgs: Sequence[TrainConfig],
             jobs: int = 1) -> List[ExperimentReport]:
    """Train every config on ``g``; ``jobs > 1`` runs them in worker
    processes that share nothing but the read-only graph."""
    tasks = [(g, cfg) for cfg in cfgs]
    if jobs > 1 and len(tasks) > 1:
        return track_parallel_progress(_run_task, tasks, nproc=jobs)
    return [_run_task(task) for task in tasks]


def run_seeds(g: GraphBundle,
              cfg: TrainConfig,
              seeds: Sequence[int],
              jobs: int = 1,
              out_dir: Optional[str] = None) -> List[ExperimentReport]:
    """One session per seed; per-seed reports go to
    ``<out_dir>/seed_<s>/report.csv`` when ``out_dir`` is set."""
    cfgs = []
    for seed in seeds:
        work_dir = osp.join(out_dir, f'seed_{seed}') if out_dir else None
        cfgs.append(cfg.replace(seed=int(seed), work_dir=work_dir))
    reports = run_many(g, cfgs, jobs)
    if out_dir:
        for run_cfg, report in zip(cfgs, reports):
            report.to_csv(osp.join(run_cfg.work_dir, 'report.csv'))
    return reports


def summarize_runs(reports: Sequence[ExperimentReport],
                   metrics: Sequence[str] = SUMMARY_METRICS) -> pd.DataFrame:
    """Mean and standard deviation of the best-epoch metrics across runs.

    Accuracies are summarized in percent, as ``"84.20 ± 0.50"``.
    """
    rows = []
    for metric in metrics:
        values = np.array(
            [r.best[metric] for r in reports if metric in r.best])
        if values.size == 0:
            continue
        factor = 100.0 if metric.endswith('accuracy') else 1.0
        mean = float(values.mean() * factor)
        std = float(values.std() * factor)
        rows.append(
            dict(
                metric=metric,
                runs=int(values.size),
                mean=mean,
                std=std,
                summary=f'{mean:.2f} ± {std:.2f}'))
    return pd.DataFrame(rows, columns=['metric', 'runs', 'mean', 'std',
                                       'summary'])


def method_variant(method: str, cfg: TrainConfig) -> Dict:
    """Variant config for ``method``, reusing the session's own variant
    settings when it already is that method."""
    if cfg.variant_name == method:
        return copy.deepcopy(cfg.variant)
    return dict(type=method)


def sweep_layers(g: GraphBundle,
                 cfg: TrainConfig,
                 layers: Sequence[int],
                 methods: Sequence[str] = METHODS,
                 variants: Optional[Dict[str, Dict]] = None,
                 jobs: int = 1,
                 out_dir: Optional[str] = None) -> pd.DataFrame:
    """Best-epoch accuracy and MAD for each (method, depth) pair.

    Args:
        layers (Sequence[int]): Depths to train, each in ``1..8``.
        methods (Sequence[str]): Variant names.
        variants (dict, optional): Per-method variant configs overriding
            :func:`method_variant`.
        out_dir (str, optional): Where ``layers.csv``,
            ``accuracy_vs_layers.svg`` and ``mad_vs_layers.svg`` go.

    Returns:
        pd.DataFrame: Columns ``method, num_layers, seed, accuracy, mad``.
    """
    bad = [num for num in layers if not 1 <= int(num) <= 8]
    if bad:
        raise ValueError(f'layer counts must be in 1..8, got {bad}')
    variants = variants or {}
    keys, cfgs = [], []
    for method in methods:
        variant = variants.get(method) or method_variant(method, cfg)
        for num in layers:
            keys.append((method, int(num)))
            cfgs.append(
                cfg.with_layers(int(num)).with_variant(variant).replace(
                    work_dir=None))
    print_log(
        f'sweeping {len(methods)} method(s) over layers {list(layers)}',
        logger='current')
    reports = run_many(g, cfgs, jobs)
    frame = pd.DataFrame([
        dict(
            method=method,
            num_layers=num,
            seed=cfg.seed,
            accuracy=report.best.get('test_accuracy', np.nan),
            mad=report.best.get('mad', np.nan))
        for (method, num), report in zip(keys, reports)
    ])
    if out_dir:
        write_csv(frame, osp.join(out_dir, 'layers.csv'))
        plot_lines(
            frame,
            'num_layers',
            'accuracy',
            'method',
            osp.join(out_dir, 'accuracy_vs_layers.svg'),
            xlabel='layers',
            ylabel='test accuracy')
        plot_lines(
            frame,
            'num_layers',
            'mad',
            'method',
            osp.join(out_dir, 'mad_vs_layers.svg'),
            xlabel='layers',
            ylabel='MAD')
    return frame
