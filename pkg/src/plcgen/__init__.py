"""Statistical powerline-communication channel generator for NAYY cables."""

from .cable_params import NAYY35, NAYY150, CableSpec, get_cable
from .channel_synthesis import (
    ChannelRealization,
    FrequencyResponse,
    GeneratorConfig,
    generate,
    impulse_response,
    synthesize,
    transfer_function,
)
from .errors import (
    DistanceDomainError,
    GridError,
    ParameterDomainError,
    PlcError,
    UnsupportedClassError,
    UnsupportedClusterError,
)

__version__ = "0.1.0"

__all__ = [
    "NAYY35", "NAYY150", "CableSpec", "get_cable",
    "ChannelRealization", "FrequencyResponse", "GeneratorConfig",
    "generate", "impulse_response", "synthesize", "transfer_function",
    "DistanceDomainError", "GridError", "ParameterDomainError", "PlcError",
    "UnsupportedClassError", "UnsupportedClusterError",
]
