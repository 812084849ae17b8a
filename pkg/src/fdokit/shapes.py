"""Declarative information-object-type shapes: required properties per type.

A shape is a small requirement list (property, min_count, value kind) loaded
from YAML, optionally inheriting from a parent shape. Conformance counts
distinct kind-matching values across all graphs, so adding statements can
only satisfy requirements, never break them.

Config format (YAML, UTF-8): a top-level list of shape blocks::

    - type: https://w3id.org/fdof/types#Dataset
      label: Dataset
      parent: https://w3id.org/fdof/types#InformationObject   # optional
      mandatory:
        - property: http://purl.org/dc/terms/license
          min_count: 1            # optional, default 1
          value_kind: iri         # optional: any | iri | literal | <datatype IRI>
      optional:
        - property: http://purl.org/dc/terms/title
"""

from __future__ import annotations

from dataclasses import dataclass

import yaml

from .graph import Iri, Literal, Node, Term
from .model import FdofModel

VALUE_KIND_ANY = "any"
VALUE_KIND_IRI = "iri"
VALUE_KIND_LITERAL = "literal"


class ShapeConfigError(Exception):
    """The shape configuration is unreadable or inconsistent."""


@dataclass(frozen=True)
class PropertyRequirement:
    property: str
    min_count: int = 1
    value_kind: str = VALUE_KIND_ANY


@dataclass(frozen=True)
class TypeShape:
    type_iri: str
    label: str
    mandatory: tuple[PropertyRequirement, ...] = ()
    optional: tuple[PropertyRequirement, ...] = ()
    parent: str | None = None


def _value_matches(term: Term, kind: str) -> bool:
    if kind == VALUE_KIND_ANY:
        return True
    if kind == VALUE_KIND_IRI:
        return isinstance(term, Iri)
    if kind == VALUE_KIND_LITERAL:
        return isinstance(term, Literal)
    return isinstance(term, Literal) and term.datatype == kind


def _merge_kinds(a: str, b: str) -> str | None:
    """Stricter of two value kinds, None when they contradict each other."""
    if a == b:
        return a
    if a == VALUE_KIND_ANY:
        return b
    if b == VALUE_KIND_ANY:
        return a
    a_literalish = a == VALUE_KIND_LITERAL or ":" in a
    b_literalish = b == VALUE_KIND_LITERAL or ":" in b
    if a_literalish and b_literalish:
        if a == VALUE_KIND_LITERAL:
            return b
        if b == VALUE_KIND_LITERAL:
            return a
    return None


class ShapeRegistry:
    """All loaded shapes, with inheritance resolved into effective requirements."""

    def __init__(self, shapes: dict[str, TypeShape]) -> None:
        self._shapes = shapes
        self._effective: dict[str, tuple[PropertyRequirement, ...]] = {}
        for type_iri in shapes:
            self._effective[type_iri] = self._resolve(type_iri)

    @property
    def shapes(self) -> dict[str, TypeShape]:
        return self._shapes

    def __len__(self) -> int:
        return len(self._shapes)

    def __contains__(self, type_iri: str) -> bool:
        return type_iri in self._shapes

    def get(self, type_iri: str) -> TypeShape | None:
        return self._shapes.get(type_iri)

    def effective_requirements(self, type_iri: str) -> tuple[PropertyRequirement, ...]:
        return self._effective[type_iri]

    def _resolve(self, type_iri: str) -> tuple[PropertyRequirement, ...]:
        merged: dict[str, PropertyRequirement] = {}
        order: list[str] = []
        current: str | None = type_iri
        while current is not None:
            shape = self._shapes[current]
            for req in shape.mandatory + shape.optional:
                existing = merged.get(req.property)
                if existing is None:
                    merged[req.property] = req
                    order.append(req.property)
                else:
                    kind = _merge_kinds(existing.value_kind, req.value_kind)
                    if kind is None:
                        raise ShapeConfigError(
                            f"shape {type_iri}: conflicting value kinds for "
                            f"{req.property} along the parent chain "
                            f"({existing.value_kind} vs {req.value_kind})"
                        )
                    merged[req.property] = PropertyRequirement(
                        req.property,
                        max(existing.min_count, req.min_count),
                        kind,
                    )
            current = shape.parent
        return tuple(merged[p] for p in order)


def _as_requirement(entry: object, context: str, mandatory: bool) -> PropertyRequirement:
    if not isinstance(entry, dict):
        raise ShapeConfigError(f"{context}: requirement entry must be a mapping")
    unknown = set(entry) - {"property", "min_count", "value_kind"}
    if unknown:
        raise ShapeConfigError(f"{context}: unknown requirement keys {sorted(unknown)}")
    prop = entry.get("property")
    if not isinstance(prop, str) or ":" not in prop:
        raise ShapeConfigError(f"{context}: 'property' must be an IRI")
    min_count = entry.get("min_count", 1)
    if not isinstance(min_count, int) or isinstance(min_count, bool) or min_count < 0:
        raise ShapeConfigError(f"{context}: 'min_count' must be a non-negative integer")
    if mandatory and min_count < 1:
        raise ShapeConfigError(f"{context}: mandatory requirements need min_count >= 1")
    kind = entry.get("value_kind", VALUE_KIND_ANY)
    if not isinstance(kind, str) or (
        kind not in (VALUE_KIND_ANY, VALUE_KIND_IRI, VALUE_KIND_LITERAL) and ":" not in kind
    ):
        raise ShapeConfigError(
            f"{context}: 'value_kind' must be any, iri, literal, or a datatype IRI"
        )
    return PropertyRequirement(prop, min_count, kind)


def load_shapes(text: str) -> ShapeRegistry:
    """Parse a shape config; checks parents, cycles, and requirement consistency."""
    try:
        raw = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        where = (
            f" at line {mark.line + 1}, column {mark.column + 1}" if mark is not None else ""
        )
        raise ShapeConfigError(f"invalid shape config{where}: {exc.problem}") from exc
    except yaml.YAMLError as exc:
        raise ShapeConfigError(f"invalid shape config: {exc}") from exc

    if raw is None:
        return ShapeRegistry({})
    if not isinstance(raw, list):
        raise ShapeConfigError("shape config must be a top-level list of shape blocks")

    shapes: dict[str, TypeShape] = {}
    for index, block in enumerate(raw):
        context = f"shape #{index + 1}"
        if not isinstance(block, dict):
            raise ShapeConfigError(f"{context}: shape block must be a mapping")
        unknown = set(block) - {"type", "label", "parent", "mandatory", "optional"}
        if unknown:
            raise ShapeConfigError(f"{context}: unknown keys {sorted(unknown)}")
        type_iri = block.get("type")
        if not isinstance(type_iri, str) or ":" not in type_iri:
            raise ShapeConfigError(f"{context}: 'type' must be an IRI")
        if type_iri in shapes:
            raise ShapeConfigError(f"{context}: duplicate shape for {type_iri}")
        label = block.get("label", type_iri)
        if not isinstance(label, str):
            raise ShapeConfigError(f"{context}: 'label' must be a string")
        parent = block.get("parent")
        if parent is not None and (not isinstance(parent, str) or ":" not in parent):
            raise ShapeConfigError(f"{context}: 'parent' must be an IRI")
        mandatory = tuple(
            _as_requirement(e, context, mandatory=True) for e in block.get("mandatory") or []
        )
        optional = tuple(
            _as_requirement(e, context, mandatory=False) for e in block.get("optional") or []
        )
        overlap = {r.property for r in mandatory} & {r.property for r in optional}
        if overlap:
            raise ShapeConfigError(
                f"{context}: properties both mandatory and optional: {sorted(overlap)}"
            )
        shapes[type_iri] = TypeShape(type_iri, label, mandatory, optional, parent)

    for shape in shapes.values():
        if shape.parent is not None and shape.parent not in shapes:
            raise ShapeConfigError(
                f"shape {shape.type_iri}: unknown parent {shape.parent}"
            )
    for shape in shapes.values():
        seen = {shape.type_iri}
        current = shape.parent
        while current is not None:
            if current in seen:
                raise ShapeConfigError(f"inheritance cycle through {current}")
            seen.add(current)
            current = shapes[current].parent

    return ShapeRegistry(shapes)


@dataclass(frozen=True)
class RequirementFinding:
    """One unmet effective requirement for a (node, shape) pair."""

    property: str
    min_count: int
    value_kind: str
    found_values: int
    found_matching: int
    problem: str  # "missing" | "count" | "wrong-kind"

    def describe(self) -> str:
        if self.problem == "missing":
            return f"missing mandatory property {self.property}"
        if self.problem == "wrong-kind":
            return (
                f"property {self.property} needs {self.min_count} value(s) of kind "
                f"{self.value_kind}, found {self.found_matching} of {self.found_values}"
            )
        return (
            f"property {self.property} needs at least {self.min_count} value(s), "
            f"found {self.found_values}"
        )


def conformance(
    model: FdofModel, node: Node, shape: TypeShape, registry: ShapeRegistry | None = None
) -> list[RequirementFinding]:
    """Findings for every unmet effective requirement; an empty list means conformance.

    Requirements are counted over distinct values across all graphs. When a
    registry is given, the shape's parent chain contributes inherited
    requirements; otherwise only the shape's own requirements apply.
    """
    model.object(node)  # raises UnknownNodeError for foreign nodes
    if registry is not None and shape.type_iri in registry:
        requirements = registry.effective_requirements(shape.type_iri)
    else:
        requirements = shape.mandatory + shape.optional

    findings: list[RequirementFinding] = []
    for req in requirements:
        if req.min_count < 1:
            continue
        values: list[Term] = []
        for quad in model.source.match(subject=node, predicate=Iri(req.property)):
            if quad.object not in values:
                values.append(quad.object)
        matching = [v for v in values if _value_matches(v, req.value_kind)]
        if len(matching) >= req.min_count:
            continue
        if not values:
            problem = "missing"
        elif len(values) >= req.min_count:
            problem = "wrong-kind"
        else:
            problem = "count"
        findings.append(
            RequirementFinding(
                req.property, req.min_count, req.value_kind, len(values), len(matching), problem
            )
        )
    return findings
