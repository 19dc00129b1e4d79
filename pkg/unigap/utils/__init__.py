# Copyright (c) The UniGAP Authors. All rights reserved.
from .exceptions import (BundleFormatError, ConfigError, DivergenceError,
                         NonFiniteError, ShapeError, TapeError)
from .fileio import atomic_path, read_csv, write_csv, write_json, write_text
from .random import STREAMS, RngStreams

__all__ = [
    'ShapeError', 'NonFiniteError', 'TapeError', 'BundleFormatError',
    'ConfigError', 'DivergenceError', 'atomic_path', 'read_csv', 'write_csv',
    'write_json', 'write_text', 'STREAMS', 'RngStreams'
]
