# Copyright (c) The UniGAP Authors. All rights reserved.
from typing import Iterable, Sequence, Tuple


class ShapeError(ValueError):
    """Operand shapes are not conformable."""

    def __init__(self, op: str, *shapes: Tuple[int, ...]) -> None:
        self.op = op
        self.shapes = shapes
        shown = ' vs '.join(str(tuple(s)) for s in shapes)
        super().__init__(f'{op}: incompatible shapes {shown}')


class NonFiniteError(FloatingPointError):
    """A kernel produced or received NaN/Inf values."""


class TapeError(RuntimeError):
    """Misuse of a recorded tape (consumed tape, non-scalar loss, ...)."""


class BundleFormatError(ValueError):
    """A graph bundle or raw source file is malformed."""

    def __init__(self, message: str, path: str = None, line: int = None):
        self.path = path
        self.line = line
        where = ''
        if path is not None:
            where = f'{path}'
            if line is not None:
                where += f':{line}'
            where += ': '
        super().__init__(f'{where}{message}')


class ConfigError(ValueError):
    """Collects every schema violation found in a config."""

    def __init__(self, errors: Iterable[str]) -> None:
        self.errors: Sequence[str] = list(errors)
        lines = '\n'.join(f'  - {e}' for e in self.errors)
        super().__init__(
            f'{len(self.errors)} config error(s):\n{lines}')


class DivergenceError(FloatingPointError):
    """Training produced a non-finite loss."""
