"""Numerics for the continuous antiderivatives of SL(2) automorphic distributions."""
from .series import (FourierSeries, SpectralParams, TranslateTable, eta_product_11,
                     eta_series, load_series, theta_series, weight_one_23)

__version__ = "0.1.0"
