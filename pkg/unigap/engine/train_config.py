# Copyright (c) The UniGAP Authors. All rights reserved.
import copy
from dataclasses import dataclass, field, replace
from typing import Dict, Optional

DEFAULT_MODEL = dict(
    type='GCN',
    hidden_channels=64,
    num_layers=2,
    activation='relu',
    dropout=0.5)
DEFAULT_VARIANT = dict(type='unigap')
DEFAULT_OPTIM = dict(type='Adam', lr=0.01, weight_decay=5e-4)


@dataclass
class TrainConfig:
    """Everything one training session needs besides the graph.

    ``model``, ``variant`` and ``optim`` are registry configs
    (``dict(type=..., ...)``); the remaining fields drive the epoch loop.
    """

    model: Dict = field(default_factory=lambda: copy.deepcopy(DEFAULT_MODEL))
    variant: Dict = field(
        default_factory=lambda: copy.deepcopy(DEFAULT_VARIANT))
    optim: Dict = field(default_factory=lambda: copy.deepcopy(DEFAULT_OPTIM))
    paramwise_cfg: Optional[Dict] = None
    beta: float = 1.0
    temperature: float = 1.0
    temperature_end: Optional[float] = None
    warmup_epochs: int = 10
    max_epochs: int = 1000
    patience: int = 100
    seed: int = 0
    log_interval: int = 10
    grid_mode: bool = False
    work_dir: Optional[str] = None
    dump_insertions: bool = False
    dump_trajectories: bool = False
    save_checkpoint: bool = False

    @property
    def num_layers(self) -> int:
        return int(self.model.get('num_layers', 2))

    @property
    def hidden_channels(self) -> int:
        return int(self.model.get('hidden_channels', 64))

    @property
    def variant_name(self) -> str:
        return self.variant['type']

    @property
    def lr(self) -> float:
        return float(self.optim.get('lr', 0.01))

    @classmethod
    def from_config(cls, cfg, seed: Optional[int] = None) -> 'TrainConfig':
        """Collect fields from an mmengine ``Config`` (or dict) with
        top-level ``model``, ``variant``, ``optim`` and ``train_cfg``."""
        get = cfg.get
        train_cfg = dict(get('train_cfg', None) or {})
        optim = copy.deepcopy(dict(get('optim', DEFAULT_OPTIM)))
        paramwise_cfg = optim.pop('paramwise_cfg', None)
        kwargs = dict(
            model=copy.deepcopy(dict(get('model', DEFAULT_MODEL))),
            variant=copy.deepcopy(dict(get('variant', DEFAULT_VARIANT))),
            optim=optim,
            paramwise_cfg=paramwise_cfg,
            work_dir=get('work_dir', None))
        kwargs.update(train_cfg)
        if seed is not None:
            kwargs['seed'] = seed
        return cls(**kwargs)

    def replace(self, **changes) -> 'TrainConfig':
        return replace(copy.deepcopy(self), **changes)

    def with_layers(self, num_layers: int) -> 'TrainConfig':
        model = copy.deepcopy(self.model)
        model['num_layers'] = num_layers
        return self.replace(model=model)

    def with_variant(self, variant: Dict) -> 'TrainConfig':
        return self.replace(variant=copy.deepcopy(variant))
