# Copyright (c) The UniGAP Authors. All rights reserved.
import copy
from typing import Dict, Iterable, List, Optional, Tuple

from mmengine.logging import print_log

from unigap.diffcore import Variable
from unigap.registry import OPTIMIZERS


class OptimizerConstructor:
    """Build an optimizer with per-parameter-group options.

    ``paramwise_cfg`` supports ``custom_keys``: a mapping from a name
    substring (e.g. ``'upsampler.'``) to ``lr_mult`` / ``decay_mult``;
    the longest matching key wins. ``bias_decay_mult`` and
    ``flat_decay_mult`` adjust the decay of bias and other 1-D
    parameters that no custom key matched.

    Args:
        optim_cfg (dict): Optimizer config, e.g. ``dict(type='Adam',
            lr=0.01, weight_decay=5e-4)``.
        paramwise_cfg (dict, optional): Parameter-wise options.
    """

    def __init__(self,
                 optim_cfg: Dict,
                 paramwise_cfg: Optional[Dict] = None) -> None:
        self.optim_cfg = copy.deepcopy(dict(optim_cfg))
        self.optim_cfg.setdefault('type', 'Adam')
        self.paramwise_cfg = dict(paramwise_cfg or {})
        self.base_lr = self.optim_cfg.get('lr', 0.01)
        self.base_wd = self.optim_cfg.get('weight_decay', None)

    def add_params(self, params: List[Dict],
                   named_params: Iterable[Tuple[str, Variable]]) -> None:
        """Append one param group per parameter, applying the
        ``paramwise_cfg`` rules."""
        custom_keys = self.paramwise_cfg.get('custom_keys', {})
        # first sort with alphabet order and then sort with reversed len of str
        sorted_keys = sorted(sorted(custom_keys.keys()), key=len, reverse=True)
        bias_decay_mult = self.paramwise_cfg.get('bias_decay_mult', None)
        flat_decay_mult = self.paramwise_cfg.get('flat_decay_mult', None)

        for name, param in named_params:
            param_group = {'params': [param]}
            matched = False
            for key in sorted_keys:
                if key in name:
                    matched = True
                    lr_mult = custom_keys[key].get('lr_mult', 1.)
                    param_group['lr'] = self.base_lr * lr_mult
                    if self.base_wd is not None:
                        decay_mult = custom_keys[key].get('decay_mult', 1.)
                        param_group['weight_decay'] = self.base_wd * decay_mult
                    break

            if not matched and self.base_wd is not None:
                short = name.rsplit('.', 1)[-1]
                if short.startswith('bias') and bias_decay_mult is not None:
                    param_group['weight_decay'] = \
                        self.base_wd * bias_decay_mult
                elif param.ndim == 1 and flat_decay_mult is not None:
                    param_group['weight_decay'] = \
                        self.base_wd * flat_decay_mult
            params.append(param_group)
            for key, value in param_group.items():
                if key == 'params':
                    continue
                print_log(
                    f'paramwise_options -- {name}:{key}={value}',
                    logger='current')

    def __call__(self, named_params: Iterable[Tuple[str, Variable]]):
        optim_cfg = self.optim_cfg.copy()
        named_params = list(named_params)
        # if no paramwise option is specified, just use the global setting
        if not self.paramwise_cfg:
            optim_cfg['params'] = [p for _, p in named_params]
        else:
            params: List = []
            self.add_params(params, named_params)
            optim_cfg['params'] = params
        return OPTIMIZERS.build(optim_cfg)
