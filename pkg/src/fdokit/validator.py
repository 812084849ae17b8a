"""Constraint engine: evaluates the model-level rules and reports findings.

Rule catalog (severity in parentheses):

  C1  every typed object carries an identifier value or an identifier node (violation)
  C2  no identifier value names two different objects (violation)
  C3  every non-record information object is described by a metadata record (violation)
  C4  record nodes aggregate a named graph holding their isMetadataOf link,
      and each target is identifiable (violation; placement issues warn)
  C5  information objects are materialized by at least one media object
      (violation; downgradeable to warning for metadata-only corpora)
  C6  media objects have exactly one encoding format (zero: violation,
      several: warning)
  C7  nothing instantiates the abstract object class directly without also
      being an information or media object (violation)
  C8  information objects are typed with an information object type (warning)
  C9  registered type shapes are satisfied (violation); unregistered types
      can be reported as warnings
  C10 identifier values are syntactically valid URIs (violation)

Pure media objects are deliberately outside C3's scope: requiring records
for them would regress (each record needs a materialization, each
materialization a record) and no finite corpus could ever conform. Their
own obligations are C1 and C6.

validate() is a pure function of (model, registry, options); findings come
out ordered by rule, then focus node, so reports are reproducible.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from . import vocab
from .graph import BlankNode, Dataset, Iri, Node, Quad
from .identifiers import URI_SPACE, is_gupri, uniqueness_audit
from .model import FdofModel, FmrRecord, Kind, node_text
from .shapes import ShapeRegistry, conformance
from .trig import canonical_quad_line


class Rule(enum.Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"
    C6 = "C6"
    C7 = "C7"
    C8 = "C8"
    C9 = "C9"
    C10 = "C10"


_RULE_ORDER = {rule: index for index, rule in enumerate(Rule)}


class Severity(enum.Enum):
    VIOLATION = "violation"
    WARNING = "warning"


@dataclass(frozen=True)
class Finding:
    rule: Rule
    severity: Severity
    focus: Node
    message: str
    evidence: tuple[Quad, ...] = ()

    @property
    def focus_text(self) -> str:
        return node_text(self.focus)


@dataclass(frozen=True)
class ValidationOptions:
    """Report tuning; severities can be tightened, never loosened.

    materialization_as_warning downgrades C5 for metadata-only corpora, the
    one downgrade the rule catalog allows.
    """

    materialization_as_warning: bool = False
    warn_unregistered_types: bool = False
    warnings_as_violations: bool = False


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]
    stats: dict[str, dict[str, int]] = field(default_factory=dict)
    object_counts: dict[str, int] = field(default_factory=dict)

    @property
    def conforms(self) -> bool:
        return not any(f.severity is Severity.VIOLATION for f in self.findings)

    def violations(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity is Severity.VIOLATION)

    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity is Severity.WARNING)


def _has_extractable_identifier(model: FdofModel, node: Node) -> bool:
    """C1's test: a non-blank node with an identifier value or a typed identifier node."""
    if isinstance(node, BlankNode):
        # Document-scoped labels are not global identifiers.
        return False
    obj = model.objects.get(node)
    if obj is None:
        return False
    if obj.gupris:
        return True
    for id_node in obj.identifier_nodes:
        id_obj = model.objects.get(id_node)
        if id_obj is not None and vocab.IDENTIFIER_CLASS in id_obj.declared_classes:
            return True
    return False


def _gupri_quads(model: FdofModel, node: Node) -> tuple[Quad, ...]:
    return tuple(model.source.match(subject=node, predicate=Iri(vocab.GUPRI)))


def _check_c1(model: FdofModel) -> list[Finding]:
    findings = []
    for node, obj in model.objects.items():
        if not obj.kinds:
            continue
        if _has_extractable_identifier(model, node):
            continue
        if isinstance(node, BlankNode):
            message = "blank node cannot carry a resolvable global identifier"
        else:
            message = "object has no identifier value and no typed identifier node"
        findings.append(Finding(Rule.C1, Severity.VIOLATION, node, message))
    return findings


def _check_c2(model: FdofModel) -> list[Finding]:
    by_text: dict[str, Node] = {}
    pairs = []
    for node, obj in model.objects.items():
        text = node_text(node)
        by_text[text] = node
        for value in obj.gupris:
            pairs.append((value, text))
    findings = []
    for collision in uniqueness_audit(pairs):
        for subject in collision.subjects:
            node = by_text[subject]
            others = ", ".join(s for s in collision.subjects if s != subject)
            findings.append(
                Finding(
                    Rule.C2,
                    Severity.VIOLATION,
                    node,
                    f"identifier value {collision.value!r} also identifies {others}",
                    evidence=_gupri_quads(model, node),
                )
            )
    return findings


def c3_scope(model: FdofModel) -> list[Node]:
    """Nodes that the metadata-requirement rule applies to.

    Metadata records are exempt (that exemption is what stops the
    record-of-record regress) and pure media objects are out of scope; a
    node directly typed as the abstract object class is covered even
    though it has no concrete kind.
    """
    scope = []
    for node, obj in model.objects.items():
        if Kind.METADATA_RECORD in obj.kinds:
            continue
        if Kind.INFORMATION_OBJECT in obj.kinds:
            scope.append(node)
        elif (
            Kind.MEDIA_OBJECT not in obj.kinds
            and vocab.FAIR_DIGITAL_OBJECT in obj.declared_classes
        ):
            scope.append(node)
    return scope


def _check_c3(model: FdofModel) -> list[Finding]:
    described = {t for record in model.records.values() for t in record.targets}
    return [
        Finding(
            Rule.C3,
            Severity.VIOLATION,
            node,
            "no metadata record describes this object",
        )
        for node in c3_scope(model)
        if node not in described
    ]


def _check_c4(model: FdofModel) -> list[Finding]:
    findings = []
    is_metadata_of = Iri(vocab.IS_METADATA_OF)
    for node, obj in model.objects.items():
        if Kind.METADATA_RECORD not in obj.kinds:
            continue
        record = model.records.get(node)
        if record is None:
            graph_exists = any(True for _ in model.source.match(graph=node))
            if graph_exists:
                message = "record names a graph, but it contains no isMetadataOf statement"
            else:
                message = "record does not name a graph carrying its isMetadataOf statement"
            findings.append(Finding(Rule.C4, Severity.VIOLATION, node, message))
        else:
            for target in record.targets:
                link = tuple(
                    record.statements.match(
                        subject=node, predicate=is_metadata_of, object=target
                    )
                )
                if not _has_extractable_identifier(model, target):
                    findings.append(
                        Finding(
                            Rule.C4,
                            Severity.VIOLATION,
                            node,
                            f"described target {node_text(target)} carries no extractable identifier",
                            evidence=link,
                        )
                    )
                else:
                    stated_inside = any(
                        q.subject == target
                        and q.predicate.value in (vocab.GUPRI, vocab.IS_IDENTIFIED_BY)
                        for q in record.statements
                    )
                    if not stated_inside:
                        findings.append(
                            Finding(
                                Rule.C4,
                                Severity.WARNING,
                                node,
                                f"record graph states no identifier for target {node_text(target)}",
                                evidence=link,
                            )
                        )
        stray = tuple(
            q
            for q in model.source.match(subject=node, predicate=is_metadata_of)
            if q.graph != node
        )
        if stray:
            findings.append(
                Finding(
                    Rule.C4,
                    Severity.WARNING,
                    node,
                    "isMetadataOf statement outside the record's own graph",
                    evidence=stray,
                )
            )
    return findings


def _check_c5(model: FdofModel, options: ValidationOptions) -> list[Finding]:
    severity = (
        Severity.WARNING if options.materialization_as_warning else Severity.VIOLATION
    )
    findings = []
    for node, obj in model.objects.items():
        if Kind.INFORMATION_OBJECT not in obj.kinds:
            continue
        materialized = any(
            (target_obj := model.objects.get(target)) is not None
            and Kind.MEDIA_OBJECT in target_obj.kinds
            for target in obj.materialized_by
        )
        if not materialized:
            findings.append(
                Finding(
                    Rule.C5,
                    severity,
                    node,
                    "information object is not materialized by any media object",
                )
            )
    return findings


def _check_c6(model: FdofModel) -> list[Finding]:
    findings = []
    has_encoding = Iri(vocab.HAS_ENCODING_FORMAT)
    for node, obj in model.objects.items():
        if Kind.MEDIA_OBJECT not in obj.kinds:
            continue
        count = len(obj.encoding_formats)
        if count == 1:
            continue
        evidence = tuple(model.source.match(subject=node, predicate=has_encoding))
        if count == 0:
            findings.append(
                Finding(
                    Rule.C6,
                    Severity.VIOLATION,
                    node,
                    "media object has no encoding format",
                )
            )
        else:
            findings.append(
                Finding(
                    Rule.C6,
                    Severity.WARNING,
                    node,
                    f"media object has {count} encoding formats, expected exactly one",
                    evidence=evidence,
                )
            )
    return findings


def _check_c7(model: FdofModel) -> list[Finding]:
    findings = []
    for node, obj in model.objects.items():
        if vocab.FAIR_DIGITAL_OBJECT not in obj.declared_classes:
            continue
        if Kind.INFORMATION_OBJECT in obj.kinds or Kind.MEDIA_OBJECT in obj.kinds:
            continue
        findings.append(
            Finding(
                Rule.C7,
                Severity.VIOLATION,
                node,
                "abstract object class instantiated directly; the node is neither "
                "an information object nor a media object",
            )
        )
    return findings


def _check_c8(model: FdofModel) -> list[Finding]:
    return [
        Finding(
            Rule.C8,
            Severity.WARNING,
            node,
            "information object has no information object type",
        )
        for node, obj in model.objects.items()
        if Kind.INFORMATION_OBJECT in obj.kinds and not obj.info_types
    ]


def _check_c9(
    model: FdofModel, registry: ShapeRegistry | None, options: ValidationOptions
) -> list[Finding]:
    findings = []
    for node, obj in model.objects.items():
        for type_iri in obj.info_types:
            shape = registry.get(type_iri) if registry is not None else None
            if shape is None:
                if options.warn_unregistered_types:
                    findings.append(
                        Finding(
                            Rule.C9,
                            Severity.WARNING,
                            node,
                            f"no registered shape for information object type {type_iri}",
                        )
                    )
                continue
            for unmet in conformance(model, node, shape, registry):
                findings.append(
                    Finding(
                        Rule.C9,
                        Severity.VIOLATION,
                        node,
                        f"type {type_iri}: {unmet.describe()}",
                    )
                )
    return findings


def _check_c10(model: FdofModel) -> list[Finding]:
    findings = []
    for node, obj in model.objects.items():
        for value in obj.gupris:
            if not is_gupri(value, URI_SPACE):
                findings.append(
                    Finding(
                        Rule.C10,
                        Severity.VIOLATION,
                        node,
                        f"identifier value is not a valid URI: {value!r}",
                        evidence=_gupri_quads(model, node),
                    )
                )
    return findings


def validate(
    model: FdofModel,
    registry: ShapeRegistry | None = None,
    options: ValidationOptions | None = None,
) -> ValidationReport:
    """Evaluate every rule over the model and assemble a deterministic report."""
    options = options or ValidationOptions()
    findings: list[Finding] = []
    findings.extend(_check_c1(model))
    findings.extend(_check_c2(model))
    findings.extend(_check_c3(model))
    findings.extend(_check_c4(model))
    findings.extend(_check_c5(model, options))
    findings.extend(_check_c6(model))
    findings.extend(_check_c7(model))
    findings.extend(_check_c8(model))
    findings.extend(_check_c9(model, registry, options))
    findings.extend(_check_c10(model))

    if options.warnings_as_violations:
        findings = [
            Finding(f.rule, Severity.VIOLATION, f.focus, f.message, f.evidence)
            if f.severity is Severity.WARNING
            else f
            for f in findings
        ]

    findings.sort(
        key=lambda f: (_RULE_ORDER[f.rule], f.focus_text, f.severity.value, f.message)
    )

    stats: dict[str, dict[str, int]] = {}
    for f in findings:
        per_rule = stats.setdefault(f.rule.value, {"violation": 0, "warning": 0})
        per_rule[f.severity.value] += 1

    counts = {
        "objects": len(model.objects),
        "information_objects": 0,
        "media_objects": 0,
        "metadata_records": 0,
        "records": len(model.records),
    }
    for obj in model.objects.values():
        if Kind.INFORMATION_OBJECT in obj.kinds:
            counts["information_objects"] += 1
        if Kind.MEDIA_OBJECT in obj.kinds:
            counts["media_objects"] += 1
        if Kind.METADATA_RECORD in obj.kinds:
            counts["metadata_records"] += 1

    return ValidationReport(tuple(findings), stats, counts)


def brute_force_c3(ds: Dataset, max_quads: int = 1000) -> frozenset[Node]:
    """Naive triple-scan evaluation of the metadata-requirement rule.

    Differential-testing oracle: works on raw quads with no model
    extraction, so a bug would have to appear twice to go unseen.
    """
    if len(ds) > max_quads:
        raise ValueError(f"dataset exceeds the oracle bound of {max_quads} quads")

    typed: dict[Node, set[str]] = {}
    info_typed: dict[Node, set[str]] = {}
    supers: dict[str, set[str]] = {}
    for q in ds:
        if not isinstance(q.object, Iri):
            continue
        if q.predicate.value == vocab.RDF_TYPE:
            typed.setdefault(q.subject, set()).add(q.object.value)
        elif q.predicate.value == vocab.HAS_INFORMATION_OBJECT_TYPE:
            info_typed.setdefault(q.subject, set()).add(q.object.value)
        elif q.predicate.value == vocab.RDFS_SUBCLASS_OF and isinstance(q.subject, Iri):
            supers.setdefault(q.subject.value, set()).add(q.object.value)

    base = vocab.FAIR_DIGITAL_INFORMATION_OBJECT

    def conveys_information(type_iri: str) -> bool:
        if type_iri == base:
            return True
        direct = supers.get(type_iri, set())
        if base in direct:
            return True
        return any(base in supers.get(mid, ()) for mid in direct)

    def is_information(node: Node) -> bool:
        classes = typed.get(node, set())
        if vocab.FAIR_DIGITAL_INFORMATION_OBJECT in classes:
            return True
        if vocab.FAIR_METADATA_RECORD in classes:
            return True
        return any(conveys_information(t) for t in info_typed.get(node, ()))

    candidates: list[Node] = []
    for node in list(typed) + [n for n in info_typed if n not in typed]:
        if node in candidates:
            continue
        classes = typed.get(node, set())
        if vocab.FAIR_METADATA_RECORD in classes:
            continue
        if is_information(node):
            candidates.append(node)
        elif (
            vocab.FAIR_DIGITAL_OBJECT in classes
            and vocab.FAIR_DIGITAL_MEDIA_OBJECT not in classes
        ):
            candidates.append(node)

    described: set[Node] = set()
    for node, classes in typed.items():
        if vocab.FAIR_METADATA_RECORD not in classes:
            continue
        for q in ds:
            if (
                q.graph == node
                and q.subject == node
                and q.predicate.value == vocab.IS_METADATA_OF
                and isinstance(q.object, (Iri, BlankNode))
            ):
                described.add(q.object)

    return frozenset(c for c in candidates if c not in described)


# -- rendering ---------------------------------------------------------------


def _finding_to_dict(finding: Finding) -> dict:
    return {
        "rule": finding.rule.value,
        "severity": finding.severity.value,
        "focus": finding.focus_text,
        "message": finding.message,
        "evidence": [canonical_quad_line(q) for q in finding.evidence],
    }


def render_report(report: ValidationReport, format: str = "text") -> str:
    """Stable rendering; the json form uses fixed field names and key order."""
    if format == "json":
        doc = {
            "conforms": report.conforms,
            "findings": [_finding_to_dict(f) for f in report.findings],
            "stats": report.stats,
            "objects": report.object_counts,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if format != "text":
        raise ValueError(f"unknown report format: {format!r}")

    lines = [f"conforms: {'yes' if report.conforms else 'no'}"]
    counts = report.object_counts
    if counts:
        lines.append(
            "objects: {objects} ({information_objects} information, "
            "{media_objects} media, {metadata_records} metadata records); "
            "records: {records}".format(**counts)
        )
    for f in report.findings:
        lines.append(f"{f.rule.value} {f.severity.value} {f.focus_text}: {f.message}")
    lines.append(
        f"findings: {len(report.violations())} violation(s), "
        f"{len(report.warnings())} warning(s)"
    )
    return "\n".join(lines) + "\n"
