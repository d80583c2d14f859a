"""Steady-state cavity cooling of a mechanical resonator coupled to a TLS defect."""
from .model import ModelVariant, ParamError, RegimeWarning, SystemParams, validate_params

__version__ = "0.1.0"

__all__ = ["ModelVariant", "ParamError", "RegimeWarning", "SystemParams", "validate_params"]
