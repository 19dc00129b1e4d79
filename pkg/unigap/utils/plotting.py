# Copyright (c) The UniGAP Authors. All rights reserved.
"""SVG figures for sweeps, insertion analysis and risk curves.

Figures are drawn on a bare :class:`~matplotlib.figure.Figure` (no pyplot
state) so plotting is safe from worker threads, and saved with a fixed
hash salt and no date so identical data give identical files.
"""
from typing import Optional, Sequence

import matplotlib
import pandas as pd
from matplotlib.figure import Figure

from .fileio import atomic_path

matplotlib.use('Agg')

SVG_RC = {'svg.hashsalt': 'unigap', 'svg.fonttype': 'none'}


def save_svg(fig: Figure, path: str) -> None:
    with matplotlib.rc_context(SVG_RC), atomic_path(path) as tmp:
        fig.savefig(tmp, format='svg', metadata={'Date': None})


def plot_lines(frame: pd.DataFrame,
               x: str,
               y: str,
               hue: str,
               path: str,
               xlabel: Optional[str] = None,
               ylabel: Optional[str] = None,
               logy: bool = False,
               title: Optional[str] = None) -> None:
    """One polyline per ``hue`` value, in order of first appearance."""
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    for key in pd.unique(frame[hue]):
        part = frame[frame[hue] == key].sort_values(x)
        ax.plot(part[x], part[y], 'o-', linewidth=1.5, label=str(key))
    if logy:
        ax.set_yscale('log')
    ax.set_xlabel(xlabel or x)
    ax.set_ylabel(ylabel or y)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3, linestyle='--')
    ax.legend()
    fig.tight_layout()
    save_svg(fig, path)


def plot_ratio_bars(frame: pd.DataFrame,
                    path: str,
                    label: str = 'dataset',
                    columns: Sequence[str] = ('intra', 'inter')) -> None:
    """Grouped bars of insertion proportions per ``label`` row."""
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    width = 0.8 / len(columns)
    positions = range(len(frame))
    for i, column in enumerate(columns):
        ax.bar([p + i * width for p in positions],
               frame[column],
               width=width,
               label=column)
    ax.set_xticks([p + width * (len(columns) - 1) / 2 for p in positions])
    ax.set_xticklabels(frame[label].astype(str))
    ax.set_ylim(0, 1)
    ax.set_ylabel('proportion of inserted nodes')
    ax.legend()
    fig.tight_layout()
    save_svg(fig, path)
