# Copyright (c) The UniGAP Authors. All rights reserved.
from .smoothness import MAD_MODES, dirichlet_energy, mad, total_loss

__all__ = ['mad', 'dirichlet_energy', 'total_loss', 'MAD_MODES']
