# Copyright (c) The UniGAP Authors. All rights reserved.
"""Training pipelines: how each epoch's graph is produced from the
original one."""
import copy
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from unigap.datasets import AugmentedGraph, GraphBundle, edge_homophily
from unigap.diffcore import Variable, csr_from_edges, scale
from unigap.models import (AdaEdgeEditor, BaseGNN, InsertionDecision,
                           Trajectory, build_augmented, collect_from_model,
                           halfhop_mask, project_trajectory)
from unigap.registry import MODELS, TRAJECTORIES, VARIANTS
from unigap.utils.random import RngStreams


class BaseVariant:
    """A pipeline configuration shared by all variants.

    Subclasses decide how the epoch's graph is built (:meth:`augment`),
    which extra parameters train alongside the downstream model
    (:meth:`named_parameters`) and what state is refreshed between
    epochs (:meth:`after_step`, :meth:`after_epoch`).
    """

    #: whether the anti-smoothing term enters the loss
    uses_smoothing_loss = True

    def setup(self, g: GraphBundle, model: BaseGNN, streams: RngStreams,
              warmup_epochs: int = 0) -> None:
        self.graph = g
        self.warmup_epochs = warmup_epochs

    def named_parameters(self) -> Iterator[Tuple[str, Variable]]:
        return iter(())

    def augment(self,
                g: GraphBundle,
                features: Variable,
                epoch: int,
                training: bool = True,
                temperature: float = 1.0
                ) -> Tuple[AugmentedGraph, Optional[InsertionDecision]]:
        return AugmentedGraph.identity(g, features), None

    def auxiliary_loss(self) -> Optional[Variable]:
        return None

    def after_step(self, hidden_states: List[Variable],
                   aug: AugmentedGraph) -> None:
        """Called after the optimizer step with the training pass
        outputs."""

    def after_epoch(self, epoch: int, logits: np.ndarray,
                    hidden_states: List[Variable]) -> Dict[str, float]:
        """Called after evaluation; returns extra per-epoch metrics."""
        return {}

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self.named_parameters()}

    def load_state_dict(self, state: Dict[str, np.ndarray]) -> None:
        own = dict(self.named_parameters())
        for name, value in state.items():
            own[name].data = value.copy()

    def current_trajectory(self) -> Optional[Trajectory]:
        return None


@VARIANTS.register_module(name='baseline')
class BaselineVariant(BaseVariant):
    """Plain supervised training on the original graph."""

    uses_smoothing_loss = False


@VARIANTS.register_module(name='unigap')
class UniGAPVariant(BaseVariant):
    """Trajectory, MVC encoder and learned upsampler.

    Args:
        trajectory (dict): ``TRAJECTORIES`` config for the initial
            trajectory.
        encoder (dict): ``MODELS`` config of the MVC encoder; ``in_channels``
            and ``num_layers`` are filled in from the downstream model.
        upsampler (dict): ``MODELS`` config of the upsampler;
            ``in_channels`` is filled in from the encoder.
    """

    def __init__(self,
                 trajectory: Dict = dict(type='MessagePassingTrajectory'),
                 encoder: Dict = dict(type='TrajectoryMLPMixer'),
                 upsampler: Dict = dict(type='AdaptiveUpsampler')) -> None:
        self.trajectory_cfg = copy.deepcopy(dict(trajectory))
        self.encoder_cfg = copy.deepcopy(dict(encoder))
        self.upsampler_cfg = copy.deepcopy(dict(upsampler))
        self.trajectory: Optional[Trajectory] = None

    def setup(self, g, model, streams, warmup_epochs=0):
        super().setup(g, model, streams, warmup_epochs)
        self.streams = streams
        width = model.hidden_channels
        num_layers = model.num_layers
        strategy = TRAJECTORIES.build(self.trajectory_cfg)
        self.norm_period = strategy.norm_period
        initial = strategy.compute(g, num_layers, width, streams['pretext'])
        self.trajectory = project_trajectory(initial, width,
                                             streams.fresh('projection'))
        warm = strategy.warm_start_state()
        if warm:
            own = dict(model.named_parameters())
            model.load_state_dict(
                {
                    k: v
                    for k, v in warm.items()
                    if k in own and own[k].shape == v.shape
                },
                strict=False)

        encoder_cfg = dict(self.encoder_cfg)
        encoder_cfg.setdefault('in_channels', width)
        encoder_cfg.setdefault('num_layers', num_layers)
        self.encoder = MODELS.build(encoder_cfg)
        self.encoder.init_weights(streams['encoder'])
        upsampler_cfg = dict(self.upsampler_cfg)
        upsampler_cfg.setdefault('in_channels', self.encoder.out_channels)
        self.upsampler = MODELS.build(upsampler_cfg)
        self.upsampler.init_weights(streams['upsampler'])

    def named_parameters(self):
        yield from self.encoder.named_parameters('encoder')
        yield from self.upsampler.named_parameters('upsampler')

    def bypassed(self, epoch: int) -> bool:
        return epoch < self.warmup_epochs or self.trajectory.is_zero

    def augment(self, g, features, epoch, training=True, temperature=1.0):
        if self.bypassed(epoch):
            return AugmentedGraph.identity(g, features), None
        condensed = self.encoder(self.trajectory)
        rng = self.streams['gumbel'] if training else None
        return self.upsampler.forward(
            condensed,
            g,
            features,
            temperature=temperature,
            noise=training,
            rng=rng)

    def after_step(self, hidden_states, aug):
        self.trajectory = collect_from_model(hidden_states, aug.n_original,
                                             self.norm_period,
                                             len(hidden_states))

    def current_trajectory(self):
        return self.trajectory


@VARIANTS.register_module(name='halfhop')
class HalfHopVariant(BaseVariant):
    """Random insertion with probability ``p`` and source-weighted mean
    features; no trajectory or encoder.

    Evaluation graphs come from a fixed generator so that every
    evaluation sees the same insertions.
    """

    def __init__(self, p: float = 0.5, alpha: float = 0.5) -> None:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f'p must be in [0, 1], got {p}')
        self.p = p
        self.alpha = alpha

    def setup(self, g, model, streams, warmup_epochs=0):
        super().setup(g, model, streams, warmup_epochs)
        self.streams = streams

    def augment(self, g, features, epoch, training=True, temperature=1.0):
        src, dst = g.edges()
        rng = self.streams['halfhop'] if training \
            else self.streams.fresh('eval')
        decision = halfhop_mask(src, dst, self.p, rng=rng)
        aug = build_augmented(
            g, features, decision, 'mean', alpha=self.alpha, gate=False)
        return aug, decision


@VARIANTS.register_module(name='adaedge')
class AdaEdgeVariant(BaseVariant):
    """Prediction-driven edge editing.

    The trajectory is reduced to the last downstream layer and feeds the
    edge head directly.
    """

    def __init__(self,
                 budget_ratio: float = 0.01,
                 aux_weight: float = 1.0) -> None:
        self.budget_ratio = budget_ratio
        self.aux_weight = aux_weight
        self.condensed: Optional[np.ndarray] = None
        self.predictions: Optional[np.ndarray] = None
        self._aux: Optional[Variable] = None
        self.evaluated = None

    def setup(self, g, model, streams, warmup_epochs=0):
        super().setup(g, model, streams, warmup_epochs)
        self.editor = AdaEdgeEditor(model.hidden_channels, self.budget_ratio)
        self.editor.init_weights(streams['upsampler'])
        self.editor.reset(g)
        self.evaluated = self.editor.adjacency

    def named_parameters(self):
        yield from self.editor.named_parameters('upsampler')

    def state_dict(self):
        state = super().state_dict()
        # the graph the model was last scored on, before this epoch's edit
        coo = self.evaluated.tocoo()
        state['graph.src'] = coo.row.astype(np.int64)
        state['graph.dst'] = coo.col.astype(np.int64)
        return state

    def load_state_dict(self, state):
        state = dict(state)
        src = np.asarray(state.pop('graph.src'), dtype=np.int64).ravel()
        dst = np.asarray(state.pop('graph.dst'), dtype=np.int64).ravel()
        super().load_state_dict(state)
        self.editor.adjacency = csr_from_edges(src, dst, self.graph.n_nodes)
        self.evaluated = self.editor.adjacency

    def current_graph(self) -> GraphBundle:
        return self.graph.with_adjacency(self.editor.adjacency)

    def augment(self, g, features, epoch, training=True, temperature=1.0):
        self._aux = None
        if training and self.condensed is not None:
            loss = self.editor.auxiliary_loss(
                Variable(self.condensed), self.predictions)
            if loss is not None and self.aux_weight:
                self._aux = scale(loss, self.aux_weight)
        if not training:
            self.evaluated = self.editor.adjacency
        return AugmentedGraph(g, self.editor.adjacency, features), None

    def auxiliary_loss(self):
        return self._aux

    def after_step(self, hidden_states, aug):
        self.condensed = collect_from_model(hidden_states[-1:],
                                            aug.n_original,
                                            None).tensor[0]

    def after_epoch(self, epoch, logits, hidden_states):
        z = logits - logits.max(axis=1, keepdims=True)
        probs = np.exp(z) / np.exp(z).sum(axis=1, keepdims=True)
        self.predictions = probs.argmax(axis=1)
        if epoch < self.warmup_epochs or self.condensed is None:
            return {}
        removed, added = self.editor.edit(self.condensed, probs)
        return dict(
            edges_removed=removed,
            edges_added=added,
            homophily=edge_homophily(self.current_graph()))


def configure_variant(name: str, **kwargs) -> BaseVariant:
    """Build a registered variant by name."""
    if VARIANTS.get(name) is None:
        raise ValueError(f'unknown variant {name!r}, expected one of '
                         f'{sorted(VARIANTS.module_dict)}')
    return VARIANTS.build(dict(type=name, **kwargs))
