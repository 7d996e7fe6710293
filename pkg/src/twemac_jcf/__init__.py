"""Density evolution and finite-length validation for joint
compute-and-forward message-passing decoding of identical LDPC codes over
two-way erasure multiple-access channels."""

__version__ = "0.1.0"

from .channel import (
    ChannelFamily,
    PunctureSpec,
    get_family,
    parse_channel_config,
    puncture,
    sample_state,
    validate_dist,
)
from .de_core import DeResult, RegularConfig, de_regular
from .de_coupled import CoupledEnsemble, CoupledResult, de_coupled, nominal_rate
from .message_types import MessageType, chk_combine, chk_fold, knows_xor, var_combine, var_fold
from .rates import RateBundle, mi_enumerate, rate_bounds
from .threshold import Caps, CoupledSystem, RegularSystem, find_threshold, is_decodable, sweep

__all__ = [
    "ChannelFamily",
    "PunctureSpec",
    "get_family",
    "parse_channel_config",
    "puncture",
    "sample_state",
    "validate_dist",
    "DeResult",
    "RegularConfig",
    "de_regular",
    "CoupledEnsemble",
    "CoupledResult",
    "de_coupled",
    "nominal_rate",
    "MessageType",
    "chk_combine",
    "chk_fold",
    "knows_xor",
    "var_combine",
    "var_fold",
    "RateBundle",
    "mi_enumerate",
    "rate_bounds",
    "Caps",
    "CoupledSystem",
    "RegularSystem",
    "find_threshold",
    "is_decodable",
    "sweep",
]
