# Copyright (c) The UniGAP Authors. All rights reserved.
"""Schema checks for run configs.

Every violation is collected before anything runs, so a config with
several mistakes fails once with the full list.
"""
import inspect
import os
import os.path as osp
from dataclasses import fields
from typing import Dict, List, Optional

from mmengine.config import Config

from unigap.registry import MODELS, OPTIMIZERS, TRAJECTORIES, VARIANTS
from .exceptions import ConfigError

OUT_ENV = 'UNIGAP_OUT'

RUN_KEYS = ('dataset', 'model', 'variant', 'optim', 'train_cfg', 'seeds',
            'work_dir', 'layers', 'methods', 'method_variants')
# filled in from the graph or the enclosing component
IMPLICIT_KWARGS = ('in_channels', 'num_classes', 'num_layers')

GRID = dict(
    lr=(5e-2, 1e-2, 5e-3, 1e-3, 5e-4),
    hidden_channels=(16, 32, 64, 128, 256),
    dropout=(0, 0.1, 0.2, 0.3, 0.5, 0.8),
    weight_decay=(1e-2, 5e-3, 1e-3, 5e-4, 1e-4),
    activation=('elu', 'relu', 'prelu'),
    num_layers=tuple(range(1, 9)),
    norm_period=(1, 2, 3, 4, None),
    mvc_channels=(32, 64, 128, 256, 512),
    p=(0, 0.5, 0.75, 1))


def _check_component(registry, cfg, where: str, errors: List[str]) -> None:
    if not isinstance(cfg, dict) or 'type' not in cfg:
        errors.append(f'{where}: expected dict(type=...), got {cfg!r}')
        return
    cls = registry.get(cfg['type'])
    if cls is None:
        errors.append(f'{where}: unknown {registry.name} type '
                      f'{cfg["type"]!r}')
        return
    params = inspect.signature(cls.__init__).parameters
    if any(p.kind is p.VAR_KEYWORD for p in params.values()):
        return
    for key in cfg:
        if key != 'type' and key not in params:
            errors.append(f'{where}: {cfg["type"]} got unknown argument '
                          f'{key!r}')


def _check_variant(variant: Dict, errors: List[str]) -> None:
    _check_component(VARIANTS, variant, 'variant', errors)
    if not isinstance(variant, dict):
        return
    if variant.get('type') == 'unigap':
        nested = dict(
            trajectory=TRAJECTORIES, encoder=MODELS, upsampler=MODELS)
        for key, registry in nested.items():
            if key in variant:
                _check_component(registry, variant[key], f'variant.{key}',
                                 errors)
    if variant.get('type') == 'halfhop' and 'p' in variant:
        if not 0 <= variant['p'] <= 1:
            errors.append(f'variant.p must be in [0, 1], got {variant["p"]}')


def _check_train_cfg(train_cfg: Dict, errors: List[str]) -> None:
    from unigap.engine.train_config import TrainConfig
    allowed = {f.name for f in fields(TrainConfig)} - {
        'model', 'variant', 'optim', 'paramwise_cfg', 'work_dir', 'seed'
    }
    for key in train_cfg:
        if key not in allowed:
            errors.append(f'train_cfg: unknown key {key!r}')
    checks = dict(
        beta=lambda v: v >= 0,
        temperature=lambda v: v > 0,
        temperature_end=lambda v: v is None or v > 0,
        warmup_epochs=lambda v: v >= 0,
        max_epochs=lambda v: v >= 1,
        patience=lambda v: v >= 1,
        log_interval=lambda v: v >= 0)
    for key, ok in checks.items():
        if key in train_cfg and not ok(train_cfg[key]):
            errors.append(f'train_cfg.{key} has invalid value '
                          f'{train_cfg[key]!r}')


def _grid_values(cfg) -> Dict[str, object]:
    model = cfg.get('model', {})
    optim = cfg.get('optim', {})
    variant = cfg.get('variant', {})
    values = dict(
        lr=optim.get('lr'),
        weight_decay=optim.get('weight_decay'),
        hidden_channels=model.get('hidden_channels'),
        dropout=model.get('dropout'),
        activation=model.get('activation'),
        num_layers=model.get('num_layers'))
    if variant.get('type') == 'unigap':
        trajectory = variant.get('trajectory', {})
        if 'norm_period' in trajectory:
            values['norm_period'] = trajectory['norm_period']
        values['mvc_channels'] = variant.get('encoder', {}).get('out_channels')
    if variant.get('type') == 'halfhop':
        values['p'] = variant.get('p')
    return {k: v for k, v in values.items() if k in GRID and v is not None}


def validate_run_config(cfg) -> None:
    """Raise :class:`ConfigError` listing every problem in ``cfg``.

    Keys starting with ``_`` are config helpers and are ignored.
    """
    errors: List[str] = []
    cfg = cfg.to_dict() if isinstance(cfg, Config) else dict(cfg)
    for key in cfg:
        if not key.startswith('_') and key not in RUN_KEYS:
            errors.append(f'unknown top-level key {key!r}')

    dataset = cfg.get('dataset')
    if dataset is None:
        errors.append('dataset is required')
    elif isinstance(dataset, dict) and 'path' not in dataset:
        errors.append('dataset.path is required')

    if 'model' in cfg:
        _check_component(MODELS, cfg['model'], 'model', errors)
        model = cfg['model'] if isinstance(cfg['model'], dict) else {}
        dropout = model.get('dropout', 0.0)
        if not 0 <= dropout < 1:
            errors.append(f'model.dropout must be in [0, 1), got {dropout}')
        num_layers = model.get('num_layers', 2)
        if not isinstance(num_layers, int) or num_layers < 1:
            errors.append(f'model.num_layers must be a positive integer, '
                          f'got {num_layers!r}')
    if 'variant' in cfg:
        _check_variant(cfg['variant'], errors)
    if 'optim' in cfg:
        optim = dict(cfg['optim'])
        optim.pop('paramwise_cfg', None)
        _check_component(OPTIMIZERS, optim, 'optim', errors)
        if optim.get('lr', 0.01) <= 0:
            errors.append(f'optim.lr must be positive, got {optim["lr"]}')
    train_cfg = cfg.get('train_cfg') or {}
    _check_train_cfg(train_cfg, errors)

    seeds = cfg.get('seeds', [0])
    if not seeds or not all(isinstance(s, int) for s in seeds):
        errors.append(f'seeds must be a nonempty list of integers, '
                      f'got {seeds!r}')
    for num in cfg.get('layers', []) or []:
        if num not in GRID['num_layers']:
            errors.append(f'layers: {num!r} is outside 1..8')

    if train_cfg.get('grid_mode', False):
        for key, value in _grid_values(cfg).items():
            if value not in GRID[key]:
                errors.append(f'grid_mode: {key}={value!r} is not in '
                              f'{list(GRID[key])}')
    if errors:
        raise ConfigError(errors)


def resolve_out_dir(cfg,
                    config_path: Optional[str] = None,
                    out: Optional[str] = None) -> str:
    """``--out`` > ``$UNIGAP_OUT/<config stem>`` > ``work_dir`` >
    ``./work_dirs/<config stem>``."""
    stem = osp.splitext(osp.basename(config_path))[0] if config_path \
        else 'run'
    if out:
        return out
    if os.environ.get(OUT_ENV):
        return osp.join(os.environ[OUT_ENV], stem)
    if cfg.get('work_dir', None):
        return cfg['work_dir']
    return osp.join('./work_dirs', stem)
