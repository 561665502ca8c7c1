"""Cooperative NOMA with an improved hybrid SWIPT protocol: capacity and EE lab."""

from .params import ParameterError, SystemParams, ValidatedParams, validate
from .schemes import SchemeId, SinrMode

__all__ = ["ParameterError", "SchemeId", "SinrMode", "SystemParams", "ValidatedParams", "validate"]
__version__ = "0.1.0"
