"""Named-graph data model: RDF terms, quads, datasets, and dataset algebra.

Datasets are immutable values with set semantics on (subject, predicate,
object, graph) and stable insertion order, so serialization and reports are
reproducible. The default graph is represented by ``graph=None``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

from .vocab import RDF_LANG_STRING, XSD_STRING

_SCHEME_PREFIX_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


@dataclass(frozen=True)
class Iri:
    """An absolute IRI (must start with a scheme followed by a colon)."""

    value: str

    def __post_init__(self) -> None:
        if not _SCHEME_PREFIX_RE.match(self.value):
            raise ValueError(f"not an absolute IRI: {self.value!r}")


@dataclass(frozen=True)
class Literal:
    """An RDF literal: lexical form, datatype IRI, optional language tag.

    A language-tagged literal always has datatype rdf:langString; a plain
    literal defaults to xsd:string.
    """

    lexical: str
    datatype: str = ""
    language: str | None = None

    def __post_init__(self) -> None:
        if self.language is not None:
            if self.datatype and self.datatype != RDF_LANG_STRING:
                raise ValueError("language-tagged literal must use rdf:langString")
            object.__setattr__(self, "datatype", RDF_LANG_STRING)
        elif not self.datatype:
            object.__setattr__(self, "datatype", XSD_STRING)


@dataclass(frozen=True)
class BlankNode:
    """A blank node with a document-scoped label."""

    label: str


Term = Union[Iri, Literal, BlankNode]
Node = Union[Iri, BlankNode]
GraphName = Union[Iri, BlankNode, None]


@dataclass(frozen=True)
class Quad:
    """One statement, optionally inside a named graph (graph=None: default graph)."""

    subject: Node
    predicate: Iri
    object: Term
    graph: GraphName = None

    def __post_init__(self) -> None:
        if isinstance(self.subject, Literal):
            raise TypeError("literal cannot be a quad subject")
        if not isinstance(self.predicate, Iri):
            raise TypeError("quad predicate must be an IRI")
        if isinstance(self.graph, Literal):
            raise TypeError("literal cannot name a graph")


class _Any:
    def __repr__(self) -> str:  # pragma: no cover
        return "ANY"


ANY = _Any()


class Dataset:
    """An insertion-ordered, duplicate-free collection of quads plus prefix map."""

    __slots__ = ("_quads", "_quad_set", "_prefixes")

    def __init__(
        self,
        quads: Iterable[Quad] = (),
        prefixes: Mapping[str, str] | None = None,
    ) -> None:
        ordered: list[Quad] = []
        seen: set[Quad] = set()
        for quad in quads:
            if quad not in seen:
                seen.add(quad)
                ordered.append(quad)
        self._quads = tuple(ordered)
        self._quad_set = frozenset(seen)
        self._prefixes = dict(prefixes) if prefixes else {}

    @property
    def quads(self) -> tuple[Quad, ...]:
        return self._quads

    @property
    def prefixes(self) -> Mapping[str, str]:
        return MappingProxyType(self._prefixes)

    def quad_set(self) -> frozenset[Quad]:
        return self._quad_set

    def __len__(self) -> int:
        return len(self._quads)

    def __iter__(self) -> Iterator[Quad]:
        return iter(self._quads)

    def __contains__(self, quad: Quad) -> bool:
        return quad in self._quad_set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return self._quads == other._quads and self._prefixes == other._prefixes

    def __repr__(self) -> str:
        return f"Dataset({len(self._quads)} quads, {len(self._prefixes)} prefixes)"

    def graph_names(self) -> tuple[GraphName, ...]:
        """Distinct named-graph labels in first-appearance order (default graph excluded)."""
        names: list[GraphName] = []
        seen: set[GraphName] = set()
        for quad in self._quads:
            if quad.graph is not None and quad.graph not in seen:
                seen.add(quad.graph)
                names.append(quad.graph)
        return tuple(names)

    def match(
        self,
        subject: Node | _Any = ANY,
        predicate: Iri | _Any = ANY,
        object: Term | _Any = ANY,
        graph: GraphName | _Any = ANY,
    ) -> Iterator[Quad]:
        """Linear-scan pattern match; ANY matches every term, None matches the default graph."""
        for quad in self._quads:
            if subject is not ANY and quad.subject != subject:
                continue
            if predicate is not ANY and quad.predicate != predicate:
                continue
            if object is not ANY and quad.object != object:
                continue
            if graph is not ANY and quad.graph != graph:
                continue
            yield quad


def graph_slice(ds: Dataset, graph: GraphName) -> Dataset:
    """Quads whose graph component equals `graph` (None selects the default graph)."""
    return Dataset((q for q in ds if q.graph == graph), prefixes=ds.prefixes)


def merge_datasets(datasets: Iterable[Dataset]) -> Dataset:
    """Union of several datasets into one.

    Blank-node labels are renamed per source dataset so labels from separate
    documents never collide; prefix maps are merged first-wins.
    """
    sources = list(datasets)
    rename = len(sources) > 1
    quads: list[Quad] = []
    prefixes: dict[str, str] = {}
    for index, ds in enumerate(sources):
        def localize(term):
            if rename and isinstance(term, BlankNode):
                return BlankNode(f"f{index}_{term.label}")
            return term

        for q in ds:
            quads.append(
                Quad(localize(q.subject), q.predicate, localize(q.object), localize(q.graph))
            )
        for label, ns in ds.prefixes.items():
            prefixes.setdefault(label, ns)
    return Dataset(quads, prefixes=prefixes)


class BlankNodeBoundError(Exception):
    """Isomorphism undecided: combined blank-node count exceeds the configured bound."""


def _blank_nodes(ds: Dataset) -> list[BlankNode]:
    found: list[BlankNode] = []
    seen: set[BlankNode] = set()
    for quad in ds:
        for term in (quad.subject, quad.object, quad.graph):
            if isinstance(term, BlankNode) and term not in seen:
                seen.add(term)
                found.append(term)
    return found


def _blank_signature(ds: Dataset, node: BlankNode) -> tuple:
    """Structural fingerprint of a blank node, invariant under blank relabeling."""

    def mask(term):
        if isinstance(term, BlankNode):
            return ("blank", "self" if term == node else "*")
        if isinstance(term, Iri):
            return ("iri", term.value)
        if isinstance(term, Literal):
            return ("lit", term.lexical, term.datatype, term.language)
        return ("default",)

    rows = []
    for quad in ds:
        if node in (quad.subject, quad.object, quad.graph):
            rows.append(
                (
                    mask(quad.subject),
                    quad.predicate.value,
                    mask(quad.object),
                    mask(quad.graph) if quad.graph is not None else ("default",),
                )
            )
    return tuple(sorted(rows))


def _remap(ds: Dataset, mapping: dict[BlankNode, BlankNode]) -> frozenset[Quad]:
    def sub(term):
        if isinstance(term, BlankNode):
            return mapping[term]
        return term

    return frozenset(
        Quad(sub(q.subject), q.predicate, sub(q.object), sub(q.graph)) for q in ds
    )


def isomorphic(a: Dataset, b: Dataset, max_blank_nodes: int = 12) -> bool:
    """True iff a blank-node bijection makes the quad sets equal.

    Ground datasets compare by plain set equality. Raises BlankNodeBoundError
    when the combined blank-node count exceeds `max_blank_nodes` (the search
    is exponential beyond desk scale).
    """
    blanks_a = _blank_nodes(a)
    blanks_b = _blank_nodes(b)
    if not blanks_a and not blanks_b:
        return a.quad_set() == b.quad_set()
    if len(blanks_a) + len(blanks_b) > max_blank_nodes:
        raise BlankNodeBoundError(
            f"undecided at configured bound: {len(blanks_a) + len(blanks_b)} blank nodes "
            f"exceed limit {max_blank_nodes}"
        )
    if len(blanks_a) != len(blanks_b):
        return False
    if len(a) != len(b):
        return False

    target = b.quad_set()

    # Group candidates by structural signature; only same-signature bijections
    # can succeed, which keeps the permutation search small.
    sig_a: dict[tuple, list[BlankNode]] = {}
    for node in blanks_a:
        sig_a.setdefault(_blank_signature(a, node), []).append(node)
    sig_b: dict[tuple, list[BlankNode]] = {}
    for node in blanks_b:
        sig_b.setdefault(_blank_signature(b, node), []).append(node)
    if set(sig_a) != set(sig_b):
        return False
    if any(len(sig_a[s]) != len(sig_b[s]) for s in sig_a):
        return False

    groups = sorted(sig_a, key=repr)
    per_group = [
        [dict(zip(sig_a[s], perm)) for perm in itertools.permutations(sig_b[s])]
        for s in groups
    ]
    for combo in itertools.product(*per_group):
        mapping: dict[BlankNode, BlankNode] = {}
        for part in combo:
            mapping.update(part)
        if _remap(a, mapping) == target:
            return True
    return False
