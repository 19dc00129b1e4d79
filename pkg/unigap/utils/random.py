# Copyright (c) The UniGAP Authors. All rights reserved.
from typing import Dict

import numpy as np

# Spawn order is part of the reproducibility contract: appending a stream
# is safe, reordering changes every downstream draw.
STREAMS = ('model', 'encoder', 'upsampler', 'dropout', 'gumbel', 'halfhop',
           'pretext', 'projection', 'split', 'eval')


class RngStreams:
    """Independent generators derived from one seed.

    Each concern draws from its own stream so that enabling a component
    (e.g. HalfHop sampling) never shifts the draws of another (e.g. the
    downstream model's dropout masks).
    """

    def __init__(self, seed: int) -> None:
        self.seed = int(seed)
        children = np.random.SeedSequence(self.seed).spawn(len(STREAMS))
        self._streams: Dict[str, np.random.Generator] = {
            name: np.random.default_rng(child)
            for name, child in zip(STREAMS, children)
        }

    def __getitem__(self, name: str) -> np.random.Generator:
        return self._streams[name]

    def fresh(self, name: str) -> np.random.Generator:
        """A generator restarted at the beginning of stream ``name``."""
        idx = STREAMS.index(name)
        child = np.random.SeedSequence(self.seed).spawn(len(STREAMS))[idx]
        return np.random.default_rng(child)
