# Copyright (c) The UniGAP Authors. All rights reserved.
import logging
from typing import NamedTuple, Union

import numpy as np
from mmengine.logging import print_log

from unigap.datasets import AugmentedGraph


class InsertionStats(NamedTuple):
    """Share of insertions on intra-/inter-class edges.

    ``intra + inter == 1`` over insertions whose endpoints are both
    labeled; ``unlabeled`` counts the rest. ``empty`` flags a graph with
    no (labeled) insertions, for which both ratios are 0.
    """

    intra: float
    inter: float
    unlabeled: int
    empty: bool


def analyze_insertions(insertions: Union[AugmentedGraph, np.ndarray],
                       labels: np.ndarray) -> InsertionStats:
    """Classify inserted nodes by the labels of the edge they split.

    Args:
        insertions: An augmented graph or a ``K x 3`` array of
            ``(new_node, src, dst)`` records.
        labels (np.ndarray): Labels of the original nodes, ``-1`` for
            unlabeled.
    """
    if isinstance(insertions, AugmentedGraph):
        insertions = insertions.insertions
    insertions = np.asarray(insertions, dtype=np.int64).reshape(-1, 3)
    labels = np.asarray(labels)
    src_label = labels[insertions[:, 1]]
    dst_label = labels[insertions[:, 2]]
    labeled = (src_label >= 0) & (dst_label >= 0)
    unlabeled = int((~labeled).sum())
    if not labeled.any():
        print_log(
            'no insertions between labeled nodes to analyze',
            logger='current',
            level=logging.WARNING)
        return InsertionStats(0.0, 0.0, unlabeled, True)
    intra = float(np.mean(src_label[labeled] == dst_label[labeled]))
    return InsertionStats(intra, 1.0 - intra, unlabeled, False)
