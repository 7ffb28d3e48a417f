"""Certified value-at-risk of delta-gamma portfolios by Fourier inversion."""
from .errors import DgVarError
from .montecarlo import McConfig, mc_var, required_samples
from .portfolio import PortfolioConfig, desk_model
from .spectral import DeltaGammaModel, Normal, StudentT, spectral_transform
from .var import VarResult, cdf, value_at_risk, var_normal, var_student_t

__all__ = [
    "DeltaGammaModel", "DgVarError", "McConfig", "Normal", "PortfolioConfig", "StudentT",
    "VarResult", "cdf", "desk_model", "mc_var", "required_samples", "spectral_transform",
    "value_at_risk", "var_normal", "var_student_t",
]
