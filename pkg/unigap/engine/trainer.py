# Copyright (c) The UniGAP Authors. All rights reserved.
import copy
import os.path as osp
from typing import Dict, Iterator, Optional, Tuple

import numpy as np
from mmengine.logging import print_log
from mmengine.utils import mkdir_or_exist

from unigap.datasets import AugmentedGraph, GraphBundle, normalized_laplacian
from unigap.diffcore import (Tape, Variable, add, annealed_temperature,
                             backward)
from unigap.models import (BaseGNN, InsertionDecision, dirichlet_energy, mad,
                           save_checkpoint, total_loss)
from unigap.registry import MODELS, VARIANTS
from unigap.utils.exceptions import DivergenceError, NonFiniteError
from unigap.utils.fileio import write_csv
from unigap.utils.random import RngStreams
from .analysis import analyze_insertions
from .optimizers import OptimizerConstructor
from .report import ExperimentReport
from .train_config import TrainConfig
from .variants import BaseVariant

SPLITS = ('train', 'val', 'test')


def accuracy(logits: np.ndarray, labels: np.ndarray,
             mask: np.ndarray) -> float:
    """Argmax accuracy over ``mask``; ties go to the lowest class index."""
    mask = np.asarray(mask, dtype=bool)
    if not mask.any():
        raise ValueError('cannot compute accuracy over an empty mask')
    logits = np.asarray(logits)
    pred = logits[:mask.shape[0]][mask].argmax(axis=1)
    return float(np.mean(pred == np.asarray(labels)[mask]))


def evaluate(model: BaseGNN,
             g: GraphBundle,
             mask: np.ndarray,
             aug: Optional[AugmentedGraph] = None) -> float:
    """Accuracy of ``model`` on the original nodes selected by ``mask``.

    Dropout is off. When ``aug`` is given the model runs on the augmented
    graph and only its original-node rows are scored.
    """
    if aug is None:
        aug = AugmentedGraph.identity(g)
    logits, _ = model(aug.adjacency, aug.features, training=False)
    return accuracy(logits.data[:g.n_nodes], g.labels, mask)


class UniGAPTrainer:
    """Joint training of the downstream model and the variant's modules.

    Args:
        g (GraphBundle): The original graph.
        cfg (TrainConfig): Session configuration.
    """

    def __init__(self, g: GraphBundle, cfg: TrainConfig) -> None:
        self.g = g
        self.cfg = cfg
        self.streams = RngStreams(cfg.seed)
        model_cfg = copy.deepcopy(cfg.model)
        model_cfg.setdefault('in_channels', g.num_features)
        model_cfg.setdefault('num_classes', g.num_classes)
        self.model: BaseGNN = MODELS.build(model_cfg)
        self.model.init_weights(self.streams['model'])
        self.variant: BaseVariant = VARIANTS.build(copy.deepcopy(cfg.variant))
        self.variant.setup(g, self.model, self.streams, cfg.warmup_epochs)
        self.optimizer = OptimizerConstructor(
            cfg.optim, cfg.paramwise_cfg)(self.named_parameters())
        self.features = Variable(g.features)
        self.laplacian = normalized_laplacian(g)
        self.src, self.dst = g.edges()
        self.report = ExperimentReport(
            meta=dict(
                graph=g.name,
                variant=cfg.variant_name,
                model=cfg.model['type'],
                num_layers=cfg.num_layers,
                seed=cfg.seed))
        self.best_decision: Optional[InsertionDecision] = None

    def named_parameters(self) -> Iterator[Tuple[str, Variable]]:
        yield from self.model.named_parameters('downstream')
        yield from self.variant.named_parameters()

    @property
    def beta(self) -> float:
        return self.cfg.beta if self.variant.uses_smoothing_loss else 0.0

    def temperature(self, epoch: int) -> float:
        return annealed_temperature(self.cfg.temperature,
                                    self.cfg.temperature_end, epoch,
                                    self.cfg.max_epochs)

    def _diverged(self, epoch: int, temperature: float,
                  reason: str) -> DivergenceError:
        return DivergenceError(
            f'training diverged at epoch {epoch} ({reason}): '
            f'lr={self.cfg.lr}, beta={self.beta}, '
            f'temperature={temperature:.4g}')

    def train_step(self, epoch: int,
                   temperature: float) -> Tuple[float, int]:
        """One optimizer step over all parameters; returns the loss and
        the number of nodes inserted into the training graph."""
        g = self.g
        self.optimizer.zero_grad()
        try:
            with Tape() as tape:
                aug, _ = self.variant.augment(
                    g, self.features, epoch, training=True,
                    temperature=temperature)
                logits, hidden = self.model(
                    aug.adjacency,
                    aug.features,
                    training=True,
                    rng=self.streams['dropout'])
                src, dst = aug.edges()
                loss = total_loss(logits, aug.padded_labels(),
                                  g.masks.padded(aug.n_nodes).train,
                                  hidden[-1], src, dst, self.beta)
                aux = self.variant.auxiliary_loss()
                if aux is not None:
                    loss = add(loss, aux)
            backward(tape, loss)
        except NonFiniteError as e:
            raise self._diverged(epoch, temperature, str(e)) from e
        value = loss.item()
        if not np.isfinite(value):
            raise self._diverged(epoch, temperature, f'loss={value}')
        self.optimizer.step()
        self.variant.after_step(hidden, aug)
        return value, aug.n_inserted

    def eval_step(self, epoch: int, temperature: float
                  ) -> Tuple[Dict[str, Dict[str, float]],
                             Optional[InsertionDecision]]:
        """Metrics of the current parameters, dropout and noise off."""
        g = self.g
        n = g.n_nodes
        aug, decision = self.variant.augment(
            g, self.features, epoch, training=False, temperature=temperature)
        logits, hidden = self.model(
            aug.adjacency, aug.features, training=False)
        logits = logits.data[:n]
        last = hidden[-1].data
        metrics = {
            split: dict(accuracy=accuracy(logits, g.labels, mask))
            for split, mask in g.masks.as_dict().items()
        }
        aug_src, aug_dst = aug.edges()
        graph = dict(
            mad=mad(last[:n], self.src, self.dst, 'literal').item(),
            mad_per_edge=mad(last, aug_src, aug_dst, 'per_edge').item(),
            dirichlet=dirichlet_energy(last[:n], self.laplacian).item(),
            insertions=aug.n_inserted,
            temperature=temperature)
        if aug.n_inserted:
            stats = analyze_insertions(aug, g.labels)
            graph.update(intra_ratio=stats.intra, inter_ratio=stats.inter)
        graph.update(self.variant.after_epoch(epoch, logits, hidden))
        metrics['graph'] = graph
        return metrics, decision

    def _snapshot(self) -> Dict:
        return dict(
            model=self.model.state_dict(),
            variant=self.variant.state_dict(),
            trajectory=self.variant.current_trajectory())

    def run(self) -> ExperimentReport:
        cfg = self.cfg
        best_val = -np.inf
        best_epoch = -1
        best_metrics: Dict[str, float] = {}
        best_state = None
        for epoch in range(cfg.max_epochs):
            temperature = self.temperature(epoch)
            loss, inserted = self.train_step(epoch, temperature)
            try:
                metrics, decision = self.eval_step(epoch, temperature)
            except NonFiniteError as e:
                raise self._diverged(epoch, temperature, str(e)) from e
            self.report.add(epoch, 'train', 'loss', loss)
            self.report.add(epoch, 'train', 'insertions', inserted)
            for split, values in metrics.items():
                self.report.add_many(epoch, split, values)

            if cfg.log_interval and (epoch + 1) % cfg.log_interval == 0:
                print_log(
                    f'Epoch(train) [{epoch + 1}/{cfg.max_epochs}]  '
                    f'loss: {loss:.4f}  '
                    f'acc(train/val/test): '
                    f'{metrics["train"]["accuracy"]:.4f}/'
                    f'{metrics["val"]["accuracy"]:.4f}/'
                    f'{metrics["test"]["accuracy"]:.4f}  '
                    f'mad: {metrics["graph"]["mad"]:.4f}  '
                    f'insertions: {metrics["graph"]["insertions"]}',
                    logger='current')

            val = metrics['val']['accuracy']
            if val > best_val:
                best_val, best_epoch = val, epoch
                best_metrics = {
                    f'{split}_accuracy': metrics[split]['accuracy']
                    for split in SPLITS
                }
                best_metrics.update(
                    (k, v) for k, v in metrics['graph'].items()
                    if k != 'temperature')
                best_state = self._snapshot()
                self.best_decision = decision
            elif epoch - best_epoch >= cfg.patience:
                print_log(
                    f'early stopping at epoch {epoch + 1}, best val '
                    f'accuracy {best_val:.4f} at epoch {best_epoch + 1}',
                    logger='current')
                break

        self.report.set_best(best_epoch, best_metrics)
        if best_state is not None:
            self.model.load_state_dict(best_state['model'])
            self.variant.load_state_dict(best_state['variant'])
        self.best_state = best_state
        if cfg.work_dir:
            self.dump(cfg.work_dir)
        return self.report

    def dump(self, work_dir: str) -> None:
        """Write the optional best-epoch artifacts requested by the
        config."""
        cfg = self.cfg
        mkdir_or_exist(work_dir)
        if cfg.dump_insertions and self.best_decision is not None:
            write_csv(self.best_decision.to_frame(),
                      osp.join(work_dir, 'insertions.csv'))
        trajectory = (self.best_state or {}).get('trajectory')
        if cfg.dump_trajectories and trajectory is not None:
            trajectory.dump(osp.join(work_dir, 'trajectory.bin'))
        if cfg.save_checkpoint:
            state = dict(self.model.state_dict())
            state = {f'downstream.{k}': v for k, v in state.items()}
            state.update(self.variant.state_dict())
            save_checkpoint(state, osp.join(work_dir, 'checkpoint'))


def train_unigap(g: GraphBundle, cfg: TrainConfig) -> ExperimentReport:
    """Train one session and return its per-epoch report."""
    return UniGAPTrainer(g, cfg).run()
