"""Two-bit message-passing decoders for LDPC codes on the binary symmetric channel."""

from .decoders import (
    AlgorithmE,
    DecodeResult,
    GallagerA,
    GallagerB,
    TwoBitMessage,
    TwoBitRule,
    decode,
    decode_batch,
    extract_lookup_tables,
    format_decoder,
    parse_decoder,
)
from .density import (
    EnsembleParams,
    MessageDensity,
    ThresholdResult,
    find_threshold,
    find_threshold_dynamic,
    run_de,
)
from .expansion import ExpansionConditionSet, check_expansion, construct_fixture
from .graph import TannerGraph, girth, neighborhood, parse_alist, read_alist, serialize_alist
from .guarantee import classify_pattern, trace_messages, verify_guarantee
from .simulation import SimConfig, estimate_fer, fer_sweep

__version__ = "0.1.0"

__all__ = [
    "AlgorithmE",
    "DecodeResult",
    "EnsembleParams",
    "ExpansionConditionSet",
    "GallagerA",
    "GallagerB",
    "MessageDensity",
    "SimConfig",
    "TannerGraph",
    "ThresholdResult",
    "TwoBitMessage",
    "TwoBitRule",
    "check_expansion",
    "classify_pattern",
    "construct_fixture",
    "decode",
    "decode_batch",
    "estimate_fer",
    "extract_lookup_tables",
    "fer_sweep",
    "find_threshold",
    "find_threshold_dynamic",
    "format_decoder",
    "girth",
    "neighborhood",
    "parse_alist",
    "parse_decoder",
    "read_alist",
    "run_de",
    "serialize_alist",
    "trace_messages",
    "verify_guarantee",
    "__version__",
]
