# Copyright (c) The UniGAP Authors. All rights reserved.
"""``unigap`` command line: ingest, train, sweep, theory and analyze.

Exit codes: 0 on success, 1 on a runtime failure, 2 on a usage, config or
input error.
"""
import argparse
import glob
import itertools
import logging
import os.path as osp
import sys
import time
from typing import List, Optional

import numpy as np
import pandas as pd
from mmengine.config import Config, DictAction
from mmengine.fileio import load
from mmengine.logging import MMLogger, print_log
from mmengine.utils import mkdir_or_exist

from unigap.datasets import (GraphBundle, dataset_statistics,
                             format_statistics, load_bundle, read_source,
                             save_bundle)
from unigap.datasets.io import SOURCE_READERS
from unigap.engine import (TrainConfig, analyze_insertions, run_seeds,
                           summarize_runs, sweep_layers)
from unigap.engine.sweep import METHODS
from unigap.theory import (empirical_smoothing, load_latent_spec,
                           propagation_matrix, rate_check,
                           smoothing_covariance, stationarity_check)
from unigap.utils.config import resolve_out_dir, validate_run_config
from unigap.utils.exceptions import BundleFormatError, ConfigError
from unigap.utils.fileio import read_csv, write_csv, write_json
from unigap.utils.plotting import plot_ratio_bars
from unigap.version import __version__

META = 'meta.json'
_RUN_IDS = itertools.count()
EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """A command was asked to do something its inputs do not allow."""


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--config', help='run or theory config file path')
    parser.add_argument(
        '--jobs',
        type=int,
        default=1,
        help='number of worker processes for multi-run commands')
    parser.add_argument(
        '--seed-offset',
        type=int,
        default=0,
        help='added to every seed of the config')
    parser.add_argument(
        '--out', help='output directory, overrides $UNIGAP_OUT and work_dir')
    parser.add_argument(
        '--cfg-options',
        nargs='+',
        action=DictAction,
        help='override some settings in the used config, the key-value pair '
        'in xxx=yyy format will be merged into config file. If the value to '
        'be overwritten is a list, it should be like key="[a,b]" or key=a,b')
    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='unigap', description='Graph upsampling experiments')
    parser.add_argument(
        '--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    ingest = sub.add_parser(
        'ingest', parents=[common], help='convert a raw graph to a bundle')
    ingest.add_argument('src', help='raw source directory')
    ingest.add_argument('dst', help='bundle directory to write')
    ingest.add_argument(
        '--format',
        choices=sorted(SOURCE_READERS),
        default='bundle',
        help='source layout')
    ingest.add_argument('--name', help='dataset name')
    ingest.add_argument(
        '--seed', type=int, default=0, help='seed for generated splits')

    sub.add_parser(
        'train', parents=[common], help='train every seed of a config')

    sweep = sub.add_parser(
        'sweep', parents=[common], help='accuracy and MAD against depth')
    sweep.add_argument(
        '--layers', type=int, nargs='+', help='depths, each in 1..8')
    sweep.add_argument(
        '--methods', nargs='+', choices=METHODS, help='variants to compare')

    theory = sub.add_parser(
        'theory', parents=[common], help='smoothing-rate checks')
    theory.add_argument('spec', nargs='?', help='latent model spec file')

    analyze = sub.add_parser(
        'analyze', parents=[common], help='insertion placement by class')
    analyze.add_argument('run_dirs', nargs='+', help='training output dirs')
    return parser.parse_args(argv)


def _load_run_config(args) -> Config:
    if not args.config:
        raise UsageError(f'{args.command} needs --config')
    if not osp.isfile(args.config):
        raise UsageError(f'config file {args.config!r} does not exist')
    cfg = Config.fromfile(args.config)
    if args.cfg_options is not None:
        cfg.merge_from_dict(args.cfg_options)
    validate_run_config(cfg)
    return cfg


def _load_dataset(cfg: Config) -> GraphBundle:
    dataset = cfg.dataset
    if isinstance(dataset, str):
        dataset = dict(path=dataset)
    path = dataset['path']
    if not osp.isdir(path):
        raise UsageError(f'dataset directory {path!r} does not exist')
    return load_bundle(path, dataset.get('name'))


def _start_run(args, out_dir: str) -> MMLogger:
    mkdir_or_exist(out_dir)
    timestamp = time.strftime('%Y%m%d_%H%M%S', time.localtime())
    # MMLogger caches by name and ignores log_file on a cache hit
    return MMLogger.get_instance(
        f'unigap_{args.command}_{timestamp}_{next(_RUN_IDS)}',
        log_file=osp.join(out_dir, 'run.log'))


def _write_meta(args, out_dir: str, started: float, **extra) -> None:
    meta = dict(
        command=args.command,
        argv=args.argv,
        config=args.config,
        version=__version__,
        started=time.strftime('%Y-%m-%dT%H:%M:%S', time.localtime(started)),
        finished=time.strftime('%Y-%m-%dT%H:%M:%S'))
    meta.update(extra)
    write_json(meta, osp.join(out_dir, META))


def cmd_ingest(args) -> int:
    kwargs = dict(name=args.name) if args.name else {}
    if args.format != 'bundle':
        kwargs['seed'] = args.seed
    g = read_source(args.src, args.format, **kwargs)
    save_bundle(g, args.dst)
    stats = dataset_statistics(g)
    write_json(dict(stats), osp.join(args.dst, 'statistics.json'))
    print(format_statistics(stats))
    return EXIT_OK


def _seeds(cfg: Config, offset: int) -> List[int]:
    return [int(s) + offset for s in cfg.get('seeds', [0])]


def cmd_train(args) -> int:
    started = time.time()
    cfg = _load_run_config(args)
    out_dir = resolve_out_dir(cfg, args.config, args.out)
    _start_run(args, out_dir)
    g = _load_dataset(cfg)
    print_log(format_statistics(dataset_statistics(g)), logger='current')
    seeds = _seeds(cfg, args.seed_offset)
    train_cfg = TrainConfig.from_config(cfg)
    reports = run_seeds(g, train_cfg, seeds, jobs=args.jobs, out_dir=out_dir)
    summary = summarize_runs(reports)
    write_csv(summary, osp.join(out_dir, 'summary.csv'))
    for row in summary.itertuples(index=False):
        print(f'{row.metric}: {row.summary} (runs={row.runs})')
    _write_meta(
        args,
        out_dir,
        started,
        dataset=cfg.dataset,
        seeds=seeds,
        variant=train_cfg.variant_name)
    return EXIT_OK


def cmd_sweep(args) -> int:
    started = time.time()
    cfg = _load_run_config(args)
    out_dir = resolve_out_dir(cfg, args.config, args.out)
    _start_run(args, out_dir)
    g = _load_dataset(cfg)
    layers = args.layers or cfg.get('layers', None) or [2, 4, 6, 8]
    bad = [num for num in layers if not 1 <= num <= 8]
    if bad:
        raise ConfigError([f'layers: {num!r} is outside 1..8' for num in bad])
    methods = args.methods or cfg.get('methods', None) or list(METHODS)
    seed = _seeds(cfg, args.seed_offset)[0]
    frame = sweep_layers(
        g,
        TrainConfig.from_config(cfg, seed=seed),
        layers,
        methods,
        variants=cfg.get('method_variants', None),
        jobs=args.jobs,
        out_dir=out_dir)
    print(frame.to_string(index=False))
    _write_meta(
        args,
        out_dir,
        started,
        dataset=cfg.dataset,
        seed=seed,
        layers=list(layers),
        methods=list(methods))
    return EXIT_OK


def cmd_theory(args) -> int:
    started = time.time()
    path = args.spec or args.config
    if not path:
        raise UsageError('theory needs a spec file')
    if not osp.isfile(path):
        raise UsageError(f'spec file {path!r} does not exist')
    spec = load_latent_spec(path)
    out_dir = resolve_out_dir({}, path, args.out)
    _start_run(args, out_dir)

    curve = rate_check(spec.sigma, spec.k_max, spec.p)
    curve.to_csv(osp.join(out_dir, 'rate.csv'))
    curve.plot(osp.join(out_dir, 'rate.svg'))
    print(f'decay slopes: plain={curve.slopes["plain"]:.6f} '
          f'unigap={curve.slopes["unigap"]:.6f} '
          f'slope ratio={curve.slope_ratio or float("nan"):.4f}')
    if spec.p == 0:
        a = propagation_matrix(spec.sigma)
        gap = max(
            np.abs(
                smoothing_covariance(spec.sigma, k, 'unigap', 0.0) -
                np.linalg.matrix_power(a, k - 1) @ spec.sigma).max()
            for k in range(1, spec.k_max + 1))
        status = 'passed' if gap < 1e-10 else 'FAILED'
        print(f'p=0 identity check {status} (max deviation {gap:.3g})')

    rows = []
    for seed in spec.seeds:
        seed = seed + args.seed_offset
        risk = empirical_smoothing(spec.graph(seed), spec.k_max, spec.p,
                                   seed, spec.lam)
        risk.to_csv(osp.join(out_dir, f'risk_seed_{seed}.csv'))
        risk.plot(osp.join(out_dir, f'risk_seed_{seed}.svg'))
        k_plain = risk.argmin('plain')
        rows.append(
            dict(
                seed=seed,
                k_star_plain=k_plain,
                k_star_unigap=risk.argmin('unigap'),
                interior=0 < k_plain < spec.k_max))
    k_star = pd.DataFrame(rows)
    write_csv(k_star, osp.join(out_dir, 'k_star.csv'))
    print(k_star.to_string(index=False))
    interior = int(k_star['interior'].sum())
    print(f'interior optimum 0 < k* < {spec.k_max}: '
          f'{interior}/{len(k_star)} seeds')
    if interior < len(k_star):
        print_log(
            'smoothing never helped on some seeds; raise feature_noise or '
            'density',
            logger='current',
            level=logging.WARNING)

    result = stationarity_check(
        k=2, lam=spec.lam, gamma=spec.gamma, seed=spec.seeds[0])
    print(f'stationarity residuals: theta={result.theta_residual:.3g} '
          f'theta_u={result.theta_u_residual:.3g}')
    _write_meta(args, out_dir, started, spec=spec.to_dict())
    return EXIT_OK


def _insertion_records(path: str) -> np.ndarray:
    frame = read_csv(path)
    chosen = frame[frame['mask'] == 1]
    return np.stack([
        np.arange(len(chosen)), chosen['src'].to_numpy(),
        chosen['dst'].to_numpy()
    ], axis=1).astype(np.int64)


def cmd_analyze(args) -> int:
    started = time.time()
    rows = []
    for run_dir in args.run_dirs:
        meta_path = osp.join(run_dir, META)
        dumps = sorted(
            glob.glob(osp.join(run_dir, '**', 'insertions.csv'),
                      recursive=True))
        if not dumps:
            raise UsageError(f'no insertions.csv under {run_dir!r}; train '
                             f'with train_cfg.dump_insertions=True')
        if not osp.isfile(meta_path):
            raise UsageError(f'{run_dir!r} has no {META}')
        dataset = load(meta_path)['dataset']
        if isinstance(dataset, str):
            dataset = dict(path=dataset)
        g = load_bundle(dataset['path'], dataset.get('name'))
        records = np.concatenate([_insertion_records(p) for p in dumps])
        stats = analyze_insertions(records, g.labels)
        if stats.empty:
            print_log(
                f'{run_dir}: no insertions between labeled nodes',
                logger='current',
                level=logging.WARNING)
        rows.append(
            dict(
                dataset=g.name,
                run=run_dir,
                insertions=len(records),
                intra=stats.intra,
                inter=stats.inter,
                unlabeled=stats.unlabeled))
    frame = pd.DataFrame(rows)
    if args.out:
        out_dir = args.out
    elif len(args.run_dirs) == 1:
        out_dir = osp.join(args.run_dirs[0], 'analysis')
    else:
        out_dir = resolve_out_dir({}, 'analyze', None)
    _start_run(args, out_dir)
    write_csv(frame, osp.join(out_dir, 'insertion_ratios.csv'))
    plot_ratio_bars(frame, osp.join(out_dir, 'insertion_ratios.svg'))
    print(frame.to_string(index=False))
    _write_meta(
        args, out_dir, started, run_dirs=list(args.run_dirs))
    return EXIT_OK


COMMANDS = dict(
    ingest=cmd_ingest,
    train=cmd_train,
    sweep=cmd_sweep,
    theory=cmd_theory,
    analyze=cmd_analyze)


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    args.argv = list(sys.argv[1:] if argv is None else argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, UsageError, BundleFormatError,
            FileNotFoundError) as e:
        print(f'unigap {args.command}: {e}', file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # noqa: BLE001
        print(f'unigap {args.command} failed: {type(e).__name__}: {e}',
              file=sys.stderr)
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
