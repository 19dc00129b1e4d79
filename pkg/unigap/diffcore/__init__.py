# Copyright (c) The UniGAP Authors. All rights reserved.
from .gumbel import annealed_temperature, gumbel_softmax_st, sample_gumbel
from .ops import (add, concat, concat_axis0, concat_cols, dense_op, dropout,
                  elementwise, elu, hadamard, l2_normalize_rows,
                  masked_softmax_cross_entropy, matmul, mean, mse_loss, mul,
                  prelu, relu, reshape, row_l2_normalize, scale, sigmoid,
                  softmax, spmm, sub, take, transpose)
from .ops import sum as reduce_sum
from .optim import adam_step
from .sparse import (CsrMatrix, canonical, check_csr, csr_from_edges,
                     densify, identity)
from .tape import Tape, Variable, as_variable, backward, current_tape, detach

__all__ = [
    'Tape', 'Variable', 'as_variable', 'backward', 'current_tape', 'detach',
    'add', 'sub', 'mul', 'hadamard', 'matmul', 'concat', 'concat_cols',
    'concat_axis0', 'dense_op', 'scale', 'relu', 'elu', 'prelu', 'sigmoid',
    'dropout', 'elementwise', 'row_l2_normalize', 'l2_normalize_rows',
    'softmax', 'masked_softmax_cross_entropy', 'mse_loss', 'mean',
    'reduce_sum', 'take', 'transpose', 'reshape', 'spmm', 'gumbel_softmax_st',
    'sample_gumbel', 'annealed_temperature', 'adam_step', 'CsrMatrix',
    'canonical', 'check_csr', 'csr_from_edges', 'densify', 'identity'
]
