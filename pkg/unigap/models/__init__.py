# Copyright (c) The UniGAP Authors. All rights reserved.
from .base import BaseComponent, glorot_uniform  # noqa
from .checkpoint import load_checkpoint, save_checkpoint  # noqa
from .backbones import *  # noqa
from .layers import *  # noqa
from .trajectory import *  # noqa
from .encoders import *  # noqa
from .upsamplers import *  # noqa
from .losses import *  # noqa
