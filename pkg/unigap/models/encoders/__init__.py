# Copyright (c) The UniGAP Authors. All rights reserved.
from .mvc import (BaseMVC, TrajectoryMLPMixer, TrajectoryTransformer, mvc_tmm,
                  mvc_tt)

__all__ = [
    'BaseMVC', 'TrajectoryMLPMixer', 'TrajectoryTransformer', 'mvc_tmm',
    'mvc_tt'
]
