# Copyright (c) The UniGAP Authors. All rights reserved.
import argparse
import os.path as osp

import pandas as pd
import pytest
from mmengine.fileio import load

from unigap.cli import EXIT_OK, EXIT_USAGE, _start_run, main
from unigap.engine import ExperimentReport

RUN_CONFIG = """\
dataset = dict(path={path!r})
model = dict(
    type='GCN', hidden_channels=8, num_layers=2, activation='relu',
    dropout=0.0)
variant = dict(type='unigap')
train_cfg = dict(
    max_epochs=3, warmup_epochs=0, log_interval=0, dump_insertions=True)
seeds = [0, 1]
"""


@pytest.fixture
def run_config(tmp_path, toy_bundle):
    path = tmp_path / 'toy_unigap.py'
    path.write_text(RUN_CONFIG.format(path=toy_bundle))
    return str(path)


class TestIngest:

    def test_bundle_to_bundle(self, tmp_path, toy_bundle, capsys):
        dst = str(tmp_path / 'copy')
        assert main(['ingest', toy_bundle, dst]) == EXIT_OK
        stats = load(osp.join(dst, 'statistics.json'))
        assert stats['nodes'] == 24
        assert 'nodes' in capsys.readouterr().out

    def test_missing_source(self, tmp_path, capsys):
        code = main(
            ['ingest', str(tmp_path / 'nowhere'), str(tmp_path / 'o')])
        assert code == EXIT_USAGE
        assert 'unigap ingest' in capsys.readouterr().err


class TestTrain:

    def test_train_and_analyze(self, tmp_path, run_config, capsys):
        out = str(tmp_path / 'out')
        assert main(['train', '--config', run_config, '--out', out]) \
            == EXIT_OK
        printed = capsys.readouterr().out
        assert 'test_accuracy' in printed and '±' in printed

        summary = pd.read_csv(osp.join(out, 'summary.csv'))
        assert set(summary['runs']) == {2}
        for seed in (0, 1):
            report = ExperimentReport.from_csv(
                osp.join(out, f'seed_{seed}', 'report.csv'))
            assert report.num_epochs == 3
            assert osp.isfile(osp.join(out, f'seed_{seed}',
                                       'insertions.csv'))
        meta = load(osp.join(out, 'meta.json'))
        assert meta['seeds'] == [0, 1]
        assert meta['variant'] == 'unigap'
        assert osp.isfile(osp.join(out, 'run.log'))

        assert main(['analyze', out]) == EXIT_OK
        analysis = osp.join(out, 'analysis')
        ratios = pd.read_csv(osp.join(analysis, 'insertion_ratios.csv'))
        assert len(ratios) == 1
        assert osp.isfile(osp.join(analysis, 'insertion_ratios.svg'))

    def test_seed_offset_and_options(self, tmp_path, run_config):
        out = str(tmp_path / 'out')
        code = main([
            'train', '--config', run_config, '--out', out, '--seed-offset',
            '10', '--cfg-options', 'seeds=[0]', 'train_cfg.max_epochs=2'
        ])
        assert code == EXIT_OK
        report = ExperimentReport.from_csv(
            osp.join(out, 'seed_10', 'report.csv'))
        assert report.num_epochs == 2

    def test_missing_config(self, capsys):
        assert main(['train']) == EXIT_USAGE
        assert 'needs --config' in capsys.readouterr().err
        assert main(['train', '--config', 'no/such/config.py']) == EXIT_USAGE

    def test_invalid_config(self, tmp_path, run_config, capsys):
        out = str(tmp_path / 'out')
        code = main([
            'train', '--config', run_config, '--out', out, '--cfg-options',
            'train_cfg.beta=-1', 'model.dropout=1.5'
        ])
        assert code == EXIT_USAGE
        err = capsys.readouterr().err
        assert '2 config error(s)' in err
        assert not osp.exists(osp.join(out, 'summary.csv'))

    def test_missing_dataset(self, tmp_path, capsys):
        path = tmp_path / 'missing.py'
        path.write_text(RUN_CONFIG.format(path=str(tmp_path / 'absent')))
        code = main(['train', '--config', str(path), '--out',
                     str(tmp_path / 'out')])
        assert code == EXIT_USAGE
        assert 'does not exist' in capsys.readouterr().err

    def test_analyze_without_dumps(self, tmp_path):
        assert main(['analyze', str(tmp_path)]) == EXIT_USAGE


class TestRunLog:

    def test_back_to_back_runs_keep_their_own_log(self, tmp_path):
        args = argparse.Namespace(command='train')
        first = _start_run(args, str(tmp_path / 'a'))
        second = _start_run(args, str(tmp_path / 'b'))
        assert first.instance_name != second.instance_name
        first.info('first run')
        second.info('second run')
        first_log = (tmp_path / 'a' / 'run.log').read_text()
        second_log = (tmp_path / 'b' / 'run.log').read_text()
        assert 'second run' in second_log
        assert 'second run' not in first_log
        assert 'first run' in first_log


class TestSweep:

    def test_sweep(self, tmp_path, run_config):
        out = str(tmp_path / 'sweep')
        code = main([
            'sweep', '--config', run_config, '--out', out, '--layers', '1',
            '2', '--methods', 'baseline', 'unigap'
        ])
        assert code == EXIT_OK
        frame = pd.read_csv(osp.join(out, 'layers.csv'))
        assert len(frame) == 4
        assert osp.isfile(osp.join(out, 'accuracy_vs_layers.svg'))
        assert load(osp.join(out, 'meta.json'))['layers'] == [1, 2]

    def test_layers_outside_grid(self, tmp_path, run_config):
        code = main([
            'sweep', '--config', run_config, '--out',
            str(tmp_path / 'o'), '--layers', '2', '9'
        ])
        assert code == EXIT_USAGE


class TestTheory:

    def test_theory(self, tmp_path, capsys):
        spec = tmp_path / 'latent.py'
        spec.write_text('sigma = 1.0\ndim = 2\nn_train = 30\nn_val = 10\n'
                        'n_test = 30\nk_max = 6\np = 0.0\n')
        out = str(tmp_path / 'theory')
        assert main(['theory', str(spec), '--out', out]) == EXIT_OK
        printed = capsys.readouterr().out
        assert 'p=0 identity check passed' in printed
        assert 'stationarity residuals' in printed
        assert 'interior optimum 0 < k* < 6' in printed
        for name in ('rate.csv', 'rate.svg', 'k_star.csv',
                     'risk_seed_0.csv', 'meta.json'):
            assert osp.isfile(osp.join(out, name))

    def test_invalid_spec(self, tmp_path, capsys):
        spec = tmp_path / 'bad.py'
        spec.write_text('lam = -1.0\n')
        assert main(['theory', str(spec), '--out',
                     str(tmp_path / 'o')]) == EXIT_USAGE
        assert 'lam must be positive' in capsys.readouterr().err

    def test_missing_spec(self):
        assert main(['theory']) == EXIT_USAGE
