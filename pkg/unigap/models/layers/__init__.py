# Copyright (c) The UniGAP Authors. All rights reserved.
from .attention import AttentionReadout, HopAttentionBlock

__all__ = ['HopAttentionBlock', 'AttentionReadout']
