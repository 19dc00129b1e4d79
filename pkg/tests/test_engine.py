# Copyright (c) The UniGAP Authors. All rights reserved.
import functools
import os
import os.path as osp

import numpy as np
import pytest
from mmengine.config import Config

from unigap.datasets import (AugmentedGraph, edge_homophily, load_bundle,
                             synth_sbm)
from unigap.diffcore import Variable
from unigap.engine import (Adam, ExperimentReport, OptimizerConstructor,
                           TrainConfig, UniGAPTrainer, accuracy,
                           analyze_insertions, configure_variant, evaluate,
                           method_variant, run_seeds, summarize_runs,
                           sweep_layers, train_unigap)
from unigap.models import load_checkpoint
from unigap.utils.config import resolve_out_dir, validate_run_config
from unigap.utils.exceptions import ConfigError, DivergenceError

CONFIGS = osp.join(
    osp.dirname(osp.dirname(osp.abspath(__file__))), 'configs')

SMALL_MODEL = dict(
    type='GCN',
    hidden_channels=8,
    num_layers=2,
    activation='relu',
    dropout=0.0)


def _cfg(variant='baseline', **kwargs):
    variant = dict(type=variant) if isinstance(variant, str) else variant
    kwargs.setdefault('max_epochs', 4)
    kwargs.setdefault('warmup_epochs', 0)
    kwargs.setdefault('log_interval', 0)
    kwargs.setdefault('model', dict(SMALL_MODEL))
    return TrainConfig(variant=variant, **kwargs)


class TestAccuracy:

    def test_perfect_logits(self):
        labels = np.array([0, 1, 2, 1])
        logits = np.eye(3)[labels] * 5.0
        assert accuracy(logits, labels, np.ones(4, dtype=bool)) == 1.0

    def test_ties_go_to_lowest_class(self):
        labels = np.array([0, 1, 0, 1])
        logits = np.zeros((4, 2))
        assert accuracy(logits, labels, np.ones(4, dtype=bool)) == 0.5

    def test_hand_computed_toy(self):
        labels = np.array([0, 1, 1, 2, 0])
        logits = np.array([[2., 1., 0.], [0., 3., 1.], [1., 0., 0.],
                           [0., 0., 4.], [0., 1., 0.]])
        mask = np.array([True, True, True, True, False])
        # predictions 0,1,0,2 against 0,1,1,2
        assert accuracy(logits, labels, mask) == 0.75

    def test_scores_only_original_rows(self):
        labels = np.array([1, 0])
        logits = np.array([[0., 1.], [1., 0.], [9., 0.]])
        assert accuracy(logits, labels, np.ones(2, dtype=bool)) == 1.0

    def test_empty_mask(self):
        with pytest.raises(ValueError, match='empty mask'):
            accuracy(np.zeros((3, 2)), np.zeros(3), np.zeros(3, dtype=bool))


class TestAnalyzeInsertions:

    def test_all_intra(self):
        labels = np.array([0, 0, 1, 1])
        records = np.array([[4, 0, 1], [5, 2, 3], [6, 1, 0]])
        stats = analyze_insertions(records, labels)
        assert (stats.intra, stats.inter) == (1.0, 0.0)
        assert not stats.empty

    def test_half_and_half(self):
        labels = np.array([0, 0, 1, 1])
        records = np.array([[4, 0, 1], [5, 2, 3], [6, 1, 2], [7, 3, 0]])
        stats = analyze_insertions(records, labels)
        assert (stats.intra, stats.inter) == (0.5, 0.5)

    def test_unlabeled_endpoints_are_counted_separately(self):
        labels = np.array([0, 0, -1])
        records = np.array([[3, 0, 1], [4, 1, 2]])
        stats = analyze_insertions(records, labels)
        assert stats.unlabeled == 1
        assert stats.intra + stats.inter == pytest.approx(1.0)

    def test_no_insertions(self, two_node_graph):
        stats = analyze_insertions(
            AugmentedGraph.identity(two_node_graph), two_node_graph.labels)
        assert (stats.intra, stats.inter, stats.empty) == (0.0, 0.0, True)


class TestReport:

    def _report(self):
        report = ExperimentReport()
        for epoch in range(3):
            report.add(epoch, 'train', 'loss', 1.0 / (epoch + 1))
            report.add_many(epoch, 'val', dict(accuracy=0.1 * epoch))
            report.add(epoch, 'graph', 'mad', 0.3333333333333333)
        report.set_best(2, dict(val_accuracy=0.2, mad=0.3333333333333333))
        return report

    def test_csv_round_trip(self, tmp_path):
        report = self._report()
        path = str(tmp_path / 'report.csv')
        report.to_csv(path)
        assert ExperimentReport.from_csv(path) == report

    def test_summary_accessors(self):
        report = self._report()
        assert report.num_epochs == 3
        assert report.best_epoch == 2
        assert report.best['val_accuracy'] == 0.2
        np.testing.assert_allclose(
            report.series('train', 'loss'), [1.0, 0.5, 1 / 3])

    def test_set_best_replaces_summary(self):
        report = self._report()
        report.set_best(0, dict(val_accuracy=0.0))
        assert report.best == dict(val_accuracy=0.0)
        assert report.best_epoch == 0

    def test_frame_schema(self):
        frame = self._report().to_frame()
        assert list(frame.columns) == ['epoch', 'split', 'metric', 'value']
        assert frame['epoch'].dtype == np.int64


class TestOptimizerConstructor:

    def _named(self):
        return [('downstream.layers.0.weight', Variable(np.ones((2, 2)))),
                ('downstream.layers.0.bias', Variable(np.ones(2))),
                ('upsampler.weight', Variable(np.ones((1, 4))))]

    def test_global_settings(self):
        optim = OptimizerConstructor(dict(type='Adam', lr=0.05))(
            self._named())
        assert isinstance(optim, Adam)
        assert len(optim.param_groups) == 1
        assert optim.param_groups[0]['lr'] == 0.05

    def test_paramwise_options(self):
        constructor = OptimizerConstructor(
            dict(type='Adam', lr=0.1, weight_decay=1e-3),
            dict(
                custom_keys={'upsampler.': dict(lr_mult=0.1, decay_mult=0)},
                bias_decay_mult=0.0))
        groups = constructor(self._named()).param_groups
        assert len(groups) == 3
        weight, bias, upsampler = groups
        assert weight['lr'] == 0.1 and weight['weight_decay'] == 1e-3
        assert bias['weight_decay'] == 0.0
        assert upsampler['lr'] == pytest.approx(0.01)
        assert upsampler['weight_decay'] == 0.0

    def test_step_skips_parameters_without_gradient(self):
        named = self._named()
        optim = OptimizerConstructor(dict(type='Adam', lr=0.1))(named)
        named[0][1].grad = np.ones((2, 2))
        optim.step()
        np.testing.assert_allclose(named[0][1].data, 0.9 * np.ones((2, 2)))
        np.testing.assert_array_equal(named[1][1].data, np.ones(2))


class TestVariants:

    def test_unknown_variant(self):
        with pytest.raises(ValueError, match='unknown variant'):
            configure_variant('nodedrop')

    def test_halfhop_rejects_probability(self):
        with pytest.raises(ValueError, match='p must be in'):
            configure_variant('halfhop', p=1.5)

    def test_baseline_has_no_smoothing_term(self, toy_graph):
        trainer = UniGAPTrainer(toy_graph, _cfg('baseline', beta=1.0))
        assert trainer.beta == 0.0
        assert list(trainer.variant.named_parameters()) == []

    def test_unigap_parameter_groups(self, toy_graph):
        trainer = UniGAPTrainer(toy_graph, _cfg('unigap'))
        names = [name for name, _ in trainer.named_parameters()]
        assert any(n.startswith('downstream.') for n in names)
        assert any(n.startswith('encoder.') for n in names)
        assert any(n.startswith('upsampler.') for n in names)
        assert trainer.beta == 1.0

    def test_unigap_warmup_bypasses_insertion(self, toy_graph):
        trainer = UniGAPTrainer(toy_graph, _cfg('unigap', warmup_epochs=3))
        assert trainer.variant.bypassed(2)
        assert not trainer.variant.bypassed(3)
        aug, decision = trainer.variant.augment(
            toy_graph, trainer.features, 0, training=True)
        assert decision is None
        assert aug.n_inserted == 0

    def test_zero_trajectory_starts_without_insertions(self, toy_graph):
        cfg = _cfg(
            dict(type='unigap', trajectory=dict(type='ZeroTrajectory')),
            max_epochs=3)
        trainer = UniGAPTrainer(toy_graph, cfg)
        assert trainer.variant.current_trajectory().is_zero
        report = trainer.run()
        assert report.series('train', 'insertions')[0] == 0
        # the snapshot is refreshed from the trained model
        assert not trainer.variant.current_trajectory().is_zero

    def test_halfhop_eval_graph_is_fixed(self, toy_graph):
        trainer = UniGAPTrainer(toy_graph, _cfg(dict(type='halfhop', p=0.5)))
        first, _ = trainer.variant.augment(
            toy_graph, trainer.features, 0, training=False)
        second, _ = trainer.variant.augment(
            toy_graph, trainer.features, 1, training=False)
        np.testing.assert_array_equal(first.insertions, second.insertions)
        assert first.n_inserted > 0

    def test_halfhop_without_insertions_matches_baseline(self, toy_graph):
        model = dict(SMALL_MODEL, dropout=0.5)
        baseline = train_unigap(
            toy_graph, _cfg('baseline', model=model, max_epochs=6, beta=0.0))
        halfhop = train_unigap(
            toy_graph,
            _cfg(
                dict(type='halfhop', p=0.0),
                model=model,
                max_epochs=6,
                beta=0.0))
        np.testing.assert_allclose(
            halfhop.series('train', 'loss'),
            baseline.series('train', 'loss'),
            rtol=0,
            atol=1e-9)
        assert halfhop.best['test_accuracy'] == pytest.approx(
            baseline.best['test_accuracy'])

    def test_adaedge_raises_homophily(self):
        g = synth_sbm((20, 20),
                      p_in=0.3,
                      p_out=0.1,
                      feature_dim=8,
                      signal=4.0,
                      seed=1)
        before = edge_homophily(g)
        cfg = _cfg(
            dict(type='adaedge', budget_ratio=0.1),
            max_epochs=12,
            warmup_epochs=2,
            optim=dict(type='Adam', lr=0.05, weight_decay=0.0))
        trainer = UniGAPTrainer(g, cfg)
        report = trainer.run()
        assert report.series('graph', 'edges_removed').sum() > 0
        assert edge_homophily(trainer.variant.current_graph()) > before

    def test_adaedge_restores_best_epoch_graph(self):
        g = synth_sbm((20, 20),
                      p_in=0.3,
                      p_out=0.1,
                      feature_dim=8,
                      signal=4.0,
                      seed=1)
        cfg = _cfg(
            dict(type='adaedge', budget_ratio=0.1),
            max_epochs=12,
            warmup_epochs=2,
            patience=100,
            optim=dict(type='Adam', lr=0.05, weight_decay=0.0))
        trainer = UniGAPTrainer(g, cfg)
        scored = []
        augment = trainer.variant.augment

        def recording(*args, **kwargs):
            out = augment(*args, **kwargs)
            if not kwargs.get('training', True):
                scored.append(out[0].adjacency)
            return out

        trainer.variant.augment = recording
        report = trainer.run()
        restored = trainer.variant.editor.adjacency
        expected = scored[report.best_epoch]
        assert (restored != expected).nnz == 0
        aug = AugmentedGraph(g, restored, trainer.features)
        assert evaluate(trainer.model, g, g.masks.val,
                        aug) == pytest.approx(report.best['val_accuracy'])

    def test_state_dict_round_trip(self, toy_graph):
        trainer = UniGAPTrainer(toy_graph, _cfg('unigap'))
        state = trainer.variant.state_dict()
        assert state
        other = UniGAPTrainer(toy_graph, _cfg('unigap', seed=7))
        other.variant.load_state_dict(state)
        for name, value in other.variant.state_dict().items():
            np.testing.assert_array_equal(value, state[name])


class TestTrainer:

    def test_report_contents(self, toy_graph):
        report = train_unigap(toy_graph, _cfg('unigap', max_epochs=5))
        assert report.num_epochs == 5
        for split in ('train', 'val', 'test'):
            acc = report.series(split, 'accuracy')
            assert acc.shape == (5, )
            assert np.all((acc >= 0) & (acc <= 1))
        for metric in ('mad', 'dirichlet', 'insertions', 'temperature'):
            assert report.series('graph', metric).shape == (5, )
        intra = report.series('graph', 'intra_ratio')
        inter = report.series('graph', 'inter_ratio')
        np.testing.assert_allclose(intra + inter, 1.0)
        assert {'train_accuracy', 'val_accuracy', 'test_accuracy',
                'mad'} <= set(report.best)

    def test_best_epoch_has_best_validation(self, toy_graph):
        report = train_unigap(
            toy_graph,
            _cfg(
                'baseline',
                max_epochs=15,
                optim=dict(type='Adam', lr=0.05, weight_decay=0.0)))
        val = report.series('val', 'accuracy')
        assert report.best['val_accuracy'] == val.max()
        assert val[report.best_epoch] == val.max()
        assert np.all(val[:report.best_epoch] < val.max())

    def test_early_stopping(self, toy_graph):
        report = train_unigap(
            toy_graph,
            _cfg(
                'baseline',
                max_epochs=50,
                patience=3,
                optim=dict(type='Adam', lr=1e-9, weight_decay=0.0)))
        assert report.best_epoch == 0
        assert report.num_epochs == 4

    def test_same_seed_is_deterministic(self, toy_graph):
        first = train_unigap(toy_graph, _cfg('unigap', seed=3))
        second = train_unigap(toy_graph, _cfg('unigap', seed=3))
        assert first == second

    def test_divergence_reports_diagnostics(self, toy_graph):
        cfg = _cfg(
            'baseline',
            max_epochs=5,
            optim=dict(type='Adam', lr=1e200, weight_decay=0.0))
        with pytest.raises(DivergenceError, match=r'lr=1e\+200'):
            train_unigap(toy_graph, cfg)

    def test_best_parameters_are_restored(self, toy_graph):
        trainer = UniGAPTrainer(
            toy_graph,
            _cfg(
                'baseline',
                max_epochs=10,
                optim=dict(type='Adam', lr=0.05, weight_decay=0.0)))
        report = trainer.run()
        assert evaluate(trainer.model, toy_graph,
                        toy_graph.masks.val) == report.best['val_accuracy']

    def test_dump_artifacts(self, tmp_path, toy_graph):
        work_dir = str(tmp_path / 'run')
        cfg = _cfg(
            'unigap',
            max_epochs=3,
            work_dir=work_dir,
            dump_insertions=True,
            dump_trajectories=True,
            save_checkpoint=True)
        UniGAPTrainer(toy_graph, cfg).run()
        assert osp.isfile(osp.join(work_dir, 'insertions.csv'))
        assert osp.isfile(osp.join(work_dir, 'trajectory.bin'))
        state = load_checkpoint(osp.join(work_dir, 'checkpoint'))
        assert any(k.startswith('downstream.') for k in state)
        assert any(k.startswith('upsampler.') for k in state)

    def test_temperature_annealing(self, toy_graph):
        report = train_unigap(
            toy_graph,
            _cfg('unigap', temperature=2.0, temperature_end=0.5,
                 max_epochs=4))
        temps = report.series('graph', 'temperature')
        assert temps[0] == pytest.approx(2.0)
        assert np.all(np.diff(temps) < 0)


class TestTrainConfig:

    def test_from_config(self):
        cfg = TrainConfig.from_config(
            dict(
                model=dict(SMALL_MODEL, num_layers=3),
                optim=dict(
                    type='Adam', lr=5e-3, paramwise_cfg=dict(
                        bias_decay_mult=0)),
                train_cfg=dict(beta=0.5, max_epochs=20)),
            seed=4)
        assert cfg.num_layers == 3
        assert cfg.lr == 5e-3
        assert cfg.paramwise_cfg == dict(bias_decay_mult=0)
        assert 'paramwise_cfg' not in cfg.optim
        assert (cfg.beta, cfg.max_epochs, cfg.seed) == (0.5, 20, 4)

    def test_with_layers_copies(self):
        cfg = _cfg()
        deeper = cfg.with_layers(6)
        assert deeper.num_layers == 6
        assert cfg.num_layers == 2


class TestRunConfig:

    def test_valid_config(self):
        validate_run_config(
            dict(
                dataset=dict(path='data/cora'),
                model=dict(SMALL_MODEL),
                variant=dict(type='halfhop', p=0.5),
                train_cfg=dict(max_epochs=10),
                seeds=[0, 1]))

    def test_collects_every_error(self):
        with pytest.raises(ConfigError) as exc:
            validate_run_config(
                dict(
                    model=dict(type='GAT'),
                    variant=dict(type='unigap', encoder=dict(type='Nope')),
                    train_cfg=dict(beta=-1, epochs=3),
                    seeds=[],
                    layers=[0, 9],
                    extra=1))
        errors = exc.value.errors
        assert len(errors) == 9
        assert "unknown top-level key 'extra'" in errors
        assert 'dataset is required' in errors

    def test_grid_mode(self):
        cfg = dict(
            dataset='data/cora',
            model=dict(SMALL_MODEL, hidden_channels=24),
            optim=dict(type='Adam', lr=0.02),
            train_cfg=dict(grid_mode=True))
        with pytest.raises(ConfigError, match='grid_mode') as exc:
            validate_run_config(cfg)
        assert len(exc.value.errors) == 2
        cfg['train_cfg'] = dict(grid_mode=False)
        validate_run_config(cfg)

    def test_unknown_component_argument(self):
        with pytest.raises(ConfigError, match="unknown argument 'depth'"):
            validate_run_config(
                dict(dataset='x', model=dict(SMALL_MODEL, depth=3)))

    def test_out_dir_precedence(self, monkeypatch):
        monkeypatch.delenv('UNIGAP_OUT', raising=False)
        cfg = dict(work_dir='runs/fixed')
        path = 'configs/cora_gcn.py'
        assert resolve_out_dir(cfg, path, out='elsewhere') == 'elsewhere'
        assert resolve_out_dir(cfg, path) == 'runs/fixed'
        assert resolve_out_dir({}, path) == osp.join('./work_dirs',
                                                     'cora_gcn')
        monkeypatch.setenv('UNIGAP_OUT', '/tmp/out')
        assert resolve_out_dir(cfg, path) == osp.join('/tmp/out', 'cora_gcn')


class TestSweep:

    def _report(self, test_acc):
        report = ExperimentReport()
        report.set_best(0, dict(test_accuracy=test_acc, mad=0.5))
        return report

    def test_summarize_runs(self):
        frame = summarize_runs([self._report(0.8), self._report(0.9)])
        row = frame.set_index('metric').loc['test_accuracy']
        assert row['runs'] == 2
        assert row['mean'] == pytest.approx(85.0)
        assert row['std'] == pytest.approx(5.0)
        assert row['summary'] == '85.00 ± 5.00'
        assert frame.set_index('metric').loc['mad', 'mean'] == 0.5

    def test_method_variant(self):
        cfg = _cfg(dict(type='halfhop', p=0.75))
        assert method_variant('halfhop', cfg) == dict(type='halfhop', p=0.75)
        assert method_variant('unigap', cfg) == dict(type='unigap')

    def test_layers_outside_grid(self, toy_graph):
        with pytest.raises(ValueError, match='1..8'):
            sweep_layers(toy_graph, _cfg(), [2, 9])

    def test_sweep_layers(self, tmp_path, toy_graph):
        out_dir = str(tmp_path / 'sweep')
        frame = sweep_layers(
            toy_graph,
            _cfg(max_epochs=2),
            [1, 2],
            methods=('baseline', 'halfhop'),
            out_dir=out_dir)
        assert len(frame) == 4
        assert set(frame['method']) == {'baseline', 'halfhop'}
        assert sorted(frame['num_layers'].unique()) == [1, 2]
        assert frame['accuracy'].between(0, 1).all()
        for name in ('layers.csv', 'accuracy_vs_layers.svg',
                     'mad_vs_layers.svg'):
            assert osp.isfile(osp.join(out_dir, name))

    def test_run_seeds_writes_reports(self, tmp_path, toy_graph):
        out_dir = str(tmp_path / 'seeds')
        reports = run_seeds(toy_graph, _cfg(max_epochs=2), [0, 1],
                            out_dir=out_dir)
        assert len(reports) == 2
        for seed, report in zip((0, 1), reports):
            path = osp.join(out_dir, f'seed_{seed}', 'report.csv')
            assert ExperimentReport.from_csv(path) == report


def _jobs():
    return min(4, os.cpu_count() or 1)


@functools.lru_cache(maxsize=None)
def _benchmark(config):
    """Train every seed of a shipped run config on its bundle."""
    cfg = Config.fromfile(osp.join(CONFIGS, config))
    g = load_bundle(cfg.dataset['path'], cfg.dataset.get('name'))
    train_cfg = TrainConfig.from_config(cfg).replace(log_interval=0)
    reports = run_seeds(g, train_cfg, cfg.seeds, jobs=_jobs())
    return reports


def _mean_test_accuracy(config):
    return float(
        np.mean([r.best['test_accuracy'] for r in _benchmark(config)]))


@pytest.mark.slow
class TestPublicBenchmarks:

    def test_gcn_cora(self, data_root):
        acc = _mean_test_accuracy('baselines/gcn_2l_cora.py')
        assert 0.79 <= acc <= 0.84

    def test_unigap_cora_uplift(self, data_root):
        baseline = _mean_test_accuracy('baselines/gcn_2l_cora.py')
        unigap = _mean_test_accuracy('unigap/unigap_gcn_2l_cora.py')
        assert unigap - baseline >= 0.01

    def test_unigap_texas_uplift(self, data_root):
        baseline = _mean_test_accuracy('baselines/gcn_2l_texas.py')
        unigap = _mean_test_accuracy('unigap/unigap_gcn_2l_texas.py')
        assert unigap - baseline >= 0.05

    def test_cora_insertions_favor_inter_class_pairs(self, data_root):
        reports = _benchmark('unigap/unigap_gcn_2l_cora.py')
        best = max(reports, key=lambda r: r.best['val_accuracy'])
        assert best.best['insertions'] > 0
        assert best.best['inter_ratio'] > best.best['intra_ratio']

    def test_cora_depth_trend(self, data_root):
        cfg = Config.fromfile(
            osp.join(CONFIGS, 'unigap', 'unigap_gcn_2l_cora.py'))
        g = load_bundle(cfg.dataset['path'], cfg.dataset.get('name'))
        frame = sweep_layers(
            g,
            TrainConfig.from_config(cfg, seed=0).replace(log_interval=0),
            [2, 8], ['baseline', 'unigap'],
            jobs=_jobs())
        rows = frame.set_index(['method', 'num_layers'])
        shallow, deep = rows.loc[('baseline', 2)], rows.loc[('baseline', 8)]
        ours = rows.loc[('unigap', 8)]
        assert deep['mad'] < shallow['mad']
        assert deep['accuracy'] < shallow['accuracy']
        assert ours['mad'] > deep['mad']
        assert ours['accuracy'] > deep['accuracy']
