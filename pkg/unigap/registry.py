# Copyright (c) The UniGAP Authors. All rights reserved.
"""Registries for the components that configs refer to by ``type``.

``MODELS`` holds downstream GNNs, MVC encoders and upsamplers,
``TRAJECTORIES`` the trajectory precomputation strategies, ``VARIANTS`` the
training pipelines (``baseline``, ``unigap``, ``halfhop``, ``adaedge``) and
``OPTIMIZERS`` the parameter update rules.
"""
from mmengine.registry import Registry

MODELS = Registry('model', locations=['unigap.models'])
TRAJECTORIES = Registry('trajectory', locations=['unigap.models.trajectory'])
VARIANTS = Registry('variant', locations=['unigap.engine'])
OPTIMIZERS = Registry('optimizer', locations=['unigap.engine.optimizers'])

__all__ = ['MODELS', 'TRAJECTORIES', 'VARIANTS', 'OPTIMIZERS']
