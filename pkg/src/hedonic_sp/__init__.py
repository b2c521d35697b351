"""Strategyproof mechanisms for additively separable and fractional hedonic games."""

from .errors import (
    ClassMismatchError,
    GuardExceededError,
    HedonicError,
    InstanceFormatError,
    ValidationError,
)
from .game import (
    GameKind,
    Partition,
    ValuationClass,
    ValuationProfile,
    coalition_of,
    social_welfare,
    utility,
    validate,
)
from .instances import Instance, parse_instance, serialize_instance
from .mechanisms import MechanismId, run_mechanism
from .oracle import OptResult, enumerate_partitions, optimal_partition

__all__ = [
    "ClassMismatchError",
    "GameKind",
    "GuardExceededError",
    "HedonicError",
    "Instance",
    "InstanceFormatError",
    "MechanismId",
    "OptResult",
    "Partition",
    "ValidationError",
    "ValuationClass",
    "ValuationProfile",
    "coalition_of",
    "enumerate_partitions",
    "optimal_partition",
    "parse_instance",
    "run_mechanism",
    "serialize_instance",
    "social_welfare",
    "utility",
    "validate",
]
