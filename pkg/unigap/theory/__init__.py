# Copyright (c) The UniGAP Authors. All rights reserved.
from .curve import MODES, RiskCurve
from .empirical import empirical_smoothing
from .ridge import ridge_fit, test_risk
from .smoothing import (fit_decay_slope, operator_norm, propagation_matrix,
                        rate_check, smoothing_covariance)
from .spec import LatentSpec, load_latent_spec
from .stationarity import StationarityResult, stationarity_check

__all__ = [
    'RiskCurve', 'MODES', 'ridge_fit', 'test_risk', 'smoothing_covariance',
    'propagation_matrix', 'operator_norm', 'fit_decay_slope', 'rate_check',
    'empirical_smoothing', 'stationarity_check', 'StationarityResult',
    'LatentSpec', 'load_latent_spec'
]
