# Copyright (c) The UniGAP Authors. All rights reserved.
from collections import OrderedDict
from typing import Tuple

import numpy as np

from .bundle import GraphBundle


def _labeled_undirected_edges(g: GraphBundle) -> Tuple[np.ndarray, ...]:
    if g.n_directed_edges == 0:
        raise ValueError(f'graph {g.name!r} has no edges')
    src, dst = g.edges()
    upper = src < dst
    src, dst = src[upper], dst[upper]
    labeled = (g.labels[src] >= 0) & (g.labels[dst] >= 0)
    if not labeled.any():
        raise ValueError(f'graph {g.name!r} has no edges between labeled '
                         'nodes')
    return src[labeled], dst[labeled]


def edge_homophily(g: GraphBundle) -> float:
    """Fraction of undirected edges whose endpoints share a label.

    Edges touching unlabeled nodes are ignored.
    """
    src, dst = _labeled_undirected_edges(g)
    return float(np.mean(g.labels[src] == g.labels[dst]))


def adjusted_homophily(g: GraphBundle) -> float:
    """Edge homophily corrected for the class-degree distribution.

    ``(h_edge - sum_k p_k^2) / (1 - sum_k p_k^2)`` where ``p_k`` is the
    share of edge endpoints in class ``k``. Reported only.
    """
    src, dst = _labeled_undirected_edges(g)
    h_edge = float(np.mean(g.labels[src] == g.labels[dst]))
    endpoints = np.concatenate([g.labels[src], g.labels[dst]])
    share = np.bincount(endpoints) / endpoints.size
    expected = float(np.sum(share**2))
    if expected >= 1.0:
        return 1.0
    return (h_edge - expected) / (1.0 - expected)


def dataset_statistics(g: GraphBundle) -> 'OrderedDict[str, object]':
    """Dataset-details columns: sizes, split percentages and homophily."""
    stats = OrderedDict(
        name=g.name,
        nodes=g.n_nodes,
        edges=g.n_undirected_edges,
        features=g.num_features,
        classes=g.num_classes)
    for split, mask in g.masks.as_dict().items():
        stats[f'{split}_pct'] = round(100.0 * mask.sum() / g.n_nodes, 2)
    try:
        stats['homophily'] = round(edge_homophily(g), 4)
        stats['adjusted_homophily'] = round(adjusted_homophily(g), 4)
    except ValueError:
        stats['homophily'] = float('nan')
        stats['adjusted_homophily'] = float('nan')
    return stats


def format_statistics(stats) -> str:
    return (f"nodes={stats['nodes']} edges={stats['edges']} "
            f"classes={stats['classes']} homophily={stats['homophily']}")
