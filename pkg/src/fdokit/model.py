"""Lift a raw dataset into the typed FAIR-digital-object view.

Extraction is total and deterministic: malformed structures still yield a
model (the validator flags them). A node enters the model when it is typed
with a vocabulary class, bears one of the vocabulary properties, or is the
target of a metadata record.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import vocab
from .graph import BlankNode, Dataset, GraphName, Iri, Literal, Node, Quad, Term, graph_slice


class Kind(enum.Enum):
    INFORMATION_OBJECT = "InformationObject"
    MEDIA_OBJECT = "MediaObject"
    METADATA_RECORD = "MetadataRecord"


class UnknownNodeError(KeyError):
    """The requested node is not part of the model."""


def node_text(term: Node | GraphName) -> str:
    """Plain-text node reference: the IRI value, or ``_:label`` for blank nodes."""
    if isinstance(term, Iri):
        return term.value
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    raise TypeError(f"not a node: {term!r}")


@dataclass(frozen=True)
class FdofObject:
    """One object of the model with everything the vocabulary says about it."""

    node: Node
    kinds: frozenset[Kind]
    declared_classes: tuple[str, ...]
    gupris: tuple[str, ...]
    identifier_nodes: tuple[Iri, ...]
    info_types: tuple[str, ...]
    materialized_by: tuple[Node, ...]
    encoding_formats: tuple[str, ...]
    described_by: tuple[Node, ...]
    attributions: tuple[tuple[str, Term], ...]


@dataclass(frozen=True)
class FmrRecord:
    """A metadata record: the named graph a record node aggregates, and its targets."""

    record_node: Node
    graph: Node
    targets: tuple[Node, ...]
    statements: Dataset


@dataclass(frozen=True)
class ClassificationSummary:
    """Answer payload for "what is this object": kinds, intent types, encodings."""

    kinds: tuple[str, ...]
    info_types: tuple[str, ...]
    encoding_formats: tuple[str, ...]


class FdofModel:
    """Immutable typed view over a source dataset."""

    def __init__(
        self,
        objects: dict[Node, FdofObject],
        records: dict[Node, FmrRecord],
        source: Dataset,
    ) -> None:
        self._objects = objects
        self._records = records
        self._source = source

    @property
    def objects(self) -> dict[Node, FdofObject]:
        return self._objects

    @property
    def records(self) -> dict[Node, FmrRecord]:
        return self._records

    @property
    def source(self) -> Dataset:
        return self._source

    def object(self, node: Node) -> FdofObject:
        try:
            return self._objects[node]
        except KeyError:
            raise UnknownNodeError(node_text(node)) from None


def _information_object_types(ds: Dataset) -> frozenset[str]:
    """Type IRIs that convey information-object nature through the typing property.

    Subclass reasoning is deliberately bounded: the class itself, types
    declared a direct subclass of it, and types one intermediate class away.
    Deeper hierarchies need explicit declarations.
    """
    supers: dict[str, set[str]] = {}
    for quad in ds.match(predicate=Iri(vocab.RDFS_SUBCLASS_OF)):
        if isinstance(quad.subject, Iri) and isinstance(quad.object, Iri):
            supers.setdefault(quad.subject.value, set()).add(quad.object.value)
    base = vocab.FAIR_DIGITAL_INFORMATION_OBJECT
    accepted = {base}
    accepted.update(t for t, sup in supers.items() if base in sup)
    for t, sup in supers.items():
        if any(base in supers.get(mid, ()) for mid in sup):
            accepted.add(t)
    return frozenset(accepted)


class _Builder:
    def __init__(self) -> None:
        self.order: list[Node] = []
        self.declared: dict[Node, list[str]] = {}
        self.gupris: dict[Node, list[str]] = {}
        self.identifier_nodes: dict[Node, list[Iri]] = {}
        self.info_types: dict[Node, list[str]] = {}
        self.materialized_by: dict[Node, list[Node]] = {}
        self.encoding_formats: dict[Node, list[str]] = {}
        self.described_by: dict[Node, list[Node]] = {}

    def register(self, node: Node) -> None:
        if node not in self.declared:
            self.order.append(node)
            self.declared[node] = []
            self.gupris[node] = []
            self.identifier_nodes[node] = []
            self.info_types[node] = []
            self.materialized_by[node] = []
            self.encoding_formats[node] = []
            self.described_by[node] = []

    def add(self, store: dict, node: Node, value) -> None:
        self.register(node)
        if value not in store[node]:
            store[node].append(value)


def extract_model(ds: Dataset) -> FdofModel:
    """Classify every object the dataset describes; never raises on malformed input."""
    b = _Builder()
    fdio_types = _information_object_types(ds)

    for quad in ds:
        p = quad.predicate.value
        s = quad.subject
        o = quad.object
        if p == vocab.RDF_TYPE and isinstance(o, Iri) and o.value in vocab.FDOF_CLASSES:
            b.add(b.declared, s, o.value)
        elif p == vocab.GUPRI:
            if isinstance(o, Literal):
                b.add(b.gupris, s, o.lexical)
            else:
                b.register(s)
        elif p == vocab.IS_IDENTIFIED_BY:
            if isinstance(o, Iri):
                b.add(b.identifier_nodes, s, o)
            else:
                b.register(s)
        elif p == vocab.HAS_INFORMATION_OBJECT_TYPE:
            if isinstance(o, Iri):
                b.add(b.info_types, s, o.value)
            else:
                b.register(s)
        elif p == vocab.IS_MATERIALIZED_BY:
            if isinstance(o, (Iri, BlankNode)):
                b.add(b.materialized_by, s, o)
            else:
                b.register(s)
        elif p == vocab.HAS_ENCODING_FORMAT:
            if isinstance(o, Iri):
                b.add(b.encoding_formats, s, o.value)
            else:
                b.register(s)
        elif p == vocab.IS_METADATA_OF:
            b.register(s)

    def kinds_of(node: Node) -> frozenset[Kind]:
        kinds = set()
        declared = b.declared[node]
        if vocab.FAIR_DIGITAL_INFORMATION_OBJECT in declared:
            kinds.add(Kind.INFORMATION_OBJECT)
        if vocab.FAIR_DIGITAL_MEDIA_OBJECT in declared:
            kinds.add(Kind.MEDIA_OBJECT)
        if vocab.FAIR_METADATA_RECORD in declared:
            # A metadata record is itself an information object.
            kinds.add(Kind.METADATA_RECORD)
            kinds.add(Kind.INFORMATION_OBJECT)
        if any(t in fdio_types for t in b.info_types[node]):
            kinds.add(Kind.INFORMATION_OBJECT)
        return frozenset(kinds)

    # Metadata records: a record node must name a graph holding its own
    # isMetadataOf statement; statements about the record outside that graph
    # stay on the object, not the record.
    records: dict[Node, FmrRecord] = {}
    for node in list(b.order):
        if Kind.METADATA_RECORD not in kinds_of(node):
            continue
        statements = graph_slice(ds, node)
        targets: list[Node] = []
        for quad in statements.match(
            subject=node, predicate=Iri(vocab.IS_METADATA_OF)
        ):
            if isinstance(quad.object, (Iri, BlankNode)) and quad.object not in targets:
                targets.append(quad.object)
        if targets:
            records[node] = FmrRecord(node, node, tuple(targets), statements)
            for target in targets:
                b.add(b.described_by, target, node)

    attributions: dict[Node, list[tuple[str, Term]]] = {n: [] for n in b.order}
    for quad in ds:
        node = quad.subject
        if node not in attributions:
            continue
        p = quad.predicate.value
        if p in vocab.FDOF_PROPERTIES:
            continue
        if (
            p == vocab.RDF_TYPE
            and isinstance(quad.object, Iri)
            and quad.object.value in vocab.FDOF_CLASSES
        ):
            continue
        entry = (p, quad.object)
        if entry not in attributions[node]:
            attributions[node].append(entry)

    objects: dict[Node, FdofObject] = {}
    for node in b.order:
        objects[node] = FdofObject(
            node=node,
            kinds=kinds_of(node),
            declared_classes=tuple(b.declared[node]),
            gupris=tuple(b.gupris[node]),
            identifier_nodes=tuple(b.identifier_nodes[node]),
            info_types=tuple(b.info_types[node]),
            materialized_by=tuple(b.materialized_by[node]),
            encoding_formats=tuple(b.encoding_formats[node]),
            described_by=tuple(b.described_by[node]),
            attributions=tuple(attributions[node]),
        )
    return FdofModel(objects, records, ds)


def classify(model: FdofModel, node: Node) -> ClassificationSummary:
    """Kinds, information-object types, and encoding formats for one known node."""
    obj = model.object(node)
    return ClassificationSummary(
        kinds=tuple(sorted(k.value for k in obj.kinds)),
        info_types=tuple(sorted(obj.info_types)),
        encoding_formats=tuple(sorted(obj.encoding_formats)),
    )


def lookup_by_gupri(model: FdofModel, value: str) -> list[Node]:
    """All nodes carrying the identifier value (more than one signals a collision)."""
    return [node for node, obj in model.objects.items() if value in obj.gupris]
