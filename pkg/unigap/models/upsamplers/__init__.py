# Copyright (c) The UniGAP Authors. All rights reserved.
from .adaedge import AdaEdgeEditor
from .adaptive import AdaptiveUpsampler, reverse_edge_index
from .augment import INIT_MODES, build_augmented
from .decision import (INSERT, KEEP, InsertionDecision, edge_logits,
                       halfhop_mask, sample_mask)

__all__ = [
    'InsertionDecision', 'edge_logits', 'sample_mask', 'halfhop_mask',
    'build_augmented', 'INIT_MODES', 'KEEP', 'INSERT', 'AdaptiveUpsampler',
    'reverse_edge_index', 'AdaEdgeEditor'
]
