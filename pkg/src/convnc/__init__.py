"""Convolutional network coding over cyclic networks, exactly.

Kernels are rational power series in the unit delay z over a finite
field; codes are analyzed, simulated slot by slot, and decoded purely
through truncated coefficient matrices.  All arithmetic is exact.
"""

from .field import GF, Field, Matrix
from .series import (
    MatrixSeries,
    NilpotencyReport,
    NotExpandableError,
    RationalSeries,
    ToeplitzExpansion,
    block_toeplitz,
    neumann_expand,
    nilpotency,
)
from .network import (
    AcyclicityReport,
    Channel,
    CncInstance,
    EncodingTopology,
    NetworkGraph,
    acyclicity,
    default_injection,
    encoding_topology,
    k0_matrix,
    lek_matrix,
)
from .encoder import (
    FeasibilityReport,
    NotNormalError,
    classify,
    derive_geks,
    gek_at_sink,
)
from .simulator import NotFeasibleError, SymbolStream, received_at, simulate
from .decoder import (
    DecodabilityVerdict,
    DecodingMatrix,
    NotDecodableError,
    SequentialDecoder,
    build_decoding_matrix,
    check_decodable,
    check_necessary,
    minimal_delay,
    sequential_decode,
    time_invariant_decoder,
)
from .textio import (
    ParseError,
    ParsedDocument,
    parse_document,
    parse_rational,
    render_document,
    render_rational,
)
from .generate import random_instance, random_source_stream

__version__ = "0.1.0"

__all__ = [
    "GF",
    "Field",
    "Matrix",
    "MatrixSeries",
    "RationalSeries",
    "ToeplitzExpansion",
    "NilpotencyReport",
    "NotExpandableError",
    "block_toeplitz",
    "neumann_expand",
    "nilpotency",
    "AcyclicityReport",
    "Channel",
    "CncInstance",
    "EncodingTopology",
    "NetworkGraph",
    "acyclicity",
    "default_injection",
    "encoding_topology",
    "k0_matrix",
    "lek_matrix",
    "FeasibilityReport",
    "NotNormalError",
    "classify",
    "derive_geks",
    "gek_at_sink",
    "NotFeasibleError",
    "SymbolStream",
    "received_at",
    "simulate",
    "DecodabilityVerdict",
    "DecodingMatrix",
    "NotDecodableError",
    "SequentialDecoder",
    "build_decoding_matrix",
    "check_decodable",
    "check_necessary",
    "minimal_delay",
    "sequential_decode",
    "time_invariant_decoder",
    "ParseError",
    "ParsedDocument",
    "parse_document",
    "parse_rational",
    "render_document",
    "render_rational",
    "random_instance",
    "random_source_stream",
    "__version__",
]
