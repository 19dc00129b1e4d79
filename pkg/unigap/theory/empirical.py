# Copyright (c) The UniGAP Authors. All rights reserved.
import numpy as np

from unigap.datasets import GraphBundle, row_normalize_adjacency
from unigap.diffcore import Variable
from unigap.models import build_augmented, halfhop_mask
from .curve import RiskCurve
from .ridge import ridge_fit, test_risk


def _risk_curve(operator, features: np.ndarray, n: int, targets: np.ndarray,
                train: np.ndarray, test: np.ndarray, k_max: int,
                lam: float) -> np.ndarray:
    risks = []
    h = features
    for k in range(k_max + 1):
        if k:
            h = operator @ h
        theta = ridge_fit(h[:n][train], targets[train], lam)
        risks.append(test_risk(h[:n][test], theta, targets[test]))
    return np.array(risks)


def empirical_smoothing(g: GraphBundle,
                        k_max: int,
                        p: float = 0.5,
                        seed: int = 0,
                        lam: float = 1e-3,
                        alpha: float = 0.5) -> RiskCurve:
    """Test risk of ridge regression on mean-aggregated features for
    ``k = 0..k_max`` rounds, on the graph as given (``plain``) and after
    random node insertion at rate ``p`` (``unigap``).

    Inserted nodes start from ``alpha * x_src + (1 - alpha) * x_dst`` and
    only original-node rows are regressed on. ``g`` must carry regression
    targets, as graphs from :func:`~unigap.datasets.synth_latent_graph` do.
    """
    if g.targets is None:
        raise ValueError(f'graph {g.name!r} carries no regression targets')
    if k_max < 1:
        raise ValueError(f'k_max must be at least 1, got {k_max}')
    n = g.n_nodes
    targets = np.asarray(g.targets, dtype=np.float64)
    train, test = g.masks.train, g.masks.test
    plain = _risk_curve(
        row_normalize_adjacency(g, self_loops=True), g.features, n, targets,
        train, test, k_max, lam)

    src, dst = g.edges()
    decision = halfhop_mask(src, dst, p, rng=np.random.default_rng(seed))
    aug = build_augmented(
        g, Variable(g.features), decision, 'mean', alpha=alpha, gate=False)
    inserted = _risk_curve(
        row_normalize_adjacency(aug.adjacency, self_loops=True),
        aug.features.data, n, targets, train, test, k_max, lam)
    return RiskCurve(
        np.arange(k_max + 1), dict(plain=plain, unigap=inserted), 'risk')
