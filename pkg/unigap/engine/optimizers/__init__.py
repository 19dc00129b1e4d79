# Copyright (c) The UniGAP Authors. All rights reserved.
from .adam import Adam
from .constructor import OptimizerConstructor

__all__ = ['Adam', 'OptimizerConstructor']
