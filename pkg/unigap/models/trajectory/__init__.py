# Copyright (c) The UniGAP Authors. All rights reserved.
from .precompute import OPERATORS, precompute_mp, precompute_zero
from .pretrain import PretextResult, pretrain_encoder
from .strategies import (BaseTrajectory, MessagePassingTrajectory,
                         PretrainedTrajectory, ZeroTrajectory)
from .trajectory import (Trajectory, collect_from_model, periodic_normalize,
                         project_trajectory)

__all__ = [
    'Trajectory', 'periodic_normalize', 'collect_from_model',
    'project_trajectory', 'precompute_zero', 'precompute_mp', 'OPERATORS',
    'pretrain_encoder', 'PretextResult', 'BaseTrajectory', 'ZeroTrajectory',
    'MessagePassingTrajectory', 'PretrainedTrajectory'
]
