"""FAIR Digital Object toolkit.

Parse named-graph datasets, lift them into a typed object model, validate
the model against the rule catalog, and resolve identifiers to deposited
metadata.
"""

from .graph import (
    BlankNode,
    BlankNodeBoundError,
    Dataset,
    Iri,
    Literal,
    Quad,
    graph_slice,
    isomorphic,
    merge_datasets,
)
from .identifiers import (
    URI_SPACE,
    Collision,
    Gupri,
    Identification,
    IdentificationSpace,
    Identifier,
    MintError,
    MintLedger,
    is_gupri,
    uniqueness_audit,
)
from .model import (
    ClassificationSummary,
    FdofModel,
    FdofObject,
    FmrRecord,
    Kind,
    UnknownNodeError,
    classify,
    extract_model,
    lookup_by_gupri,
)
from .registry import (
    DepositConflictError,
    DepositEntry,
    DepositValidationError,
    RegistryStore,
    UnknownGupriError,
    compute_etag,
)
from .shapes import (
    PropertyRequirement,
    ShapeConfigError,
    ShapeRegistry,
    TypeShape,
    conformance,
    load_shapes,
)
from .trig import ParseError, canonical_nquads, parse_trig, serialize_trig
from .uris import UriParts, UriRejection, check_uri_syntax
from .validator import (
    Finding,
    Rule,
    Severity,
    ValidationOptions,
    ValidationReport,
    brute_force_c3,
    render_report,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "BlankNode",
    "BlankNodeBoundError",
    "ClassificationSummary",
    "Collision",
    "Dataset",
    "DepositConflictError",
    "DepositEntry",
    "DepositValidationError",
    "FdofModel",
    "FdofObject",
    "Finding",
    "FmrRecord",
    "Gupri",
    "Identification",
    "IdentificationSpace",
    "Identifier",
    "Iri",
    "Kind",
    "Literal",
    "MintError",
    "MintLedger",
    "ParseError",
    "PropertyRequirement",
    "Quad",
    "RegistryStore",
    "Rule",
    "Severity",
    "ShapeConfigError",
    "ShapeRegistry",
    "TypeShape",
    "URI_SPACE",
    "UnknownGupriError",
    "UnknownNodeError",
    "UriParts",
    "UriRejection",
    "ValidationOptions",
    "ValidationReport",
    "brute_force_c3",
    "canonical_nquads",
    "check_uri_syntax",
    "classify",
    "compute_etag",
    "conformance",
    "extract_model",
    "graph_slice",
    "is_gupri",
    "isomorphic",
    "lookup_by_gupri",
    "merge_datasets",
    "parse_trig",
    "render_report",
    "serialize_trig",
    "uniqueness_audit",
    "validate",
]
