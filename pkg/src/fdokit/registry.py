"""Deposit store: identifier-addressed metadata slices with journal persistence.

Each deposited object gets one entry keyed by its identifier values. The
stored slice is the metadata-record graph when a record describes the node,
otherwise every statement the corpus makes with the node as subject. Entries
carry a strong content hash (sha-256 over the canonical quad lines), so
re-depositing identical content is a no-op and divergent content under the
same identifier is a conflict.

Persistence is an append-only journal of length-prefixed records: a 4-byte
big-endian header length, a JSON header (timestamp, node, identifier values,
record graph, classification, etag, forced flag), an 8-byte big-endian body
length, and the slice as TriG bytes. Replaying the journal reconstructs an
identical entry map, etags included.
"""

from __future__ import annotations

import hashlib
import json
import struct
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from .graph import BlankNode, Dataset, Iri, Node
from .model import (
    ClassificationSummary,
    FdofModel,
    classify,
    extract_model,
    node_text,
)
from .shapes import ShapeRegistry
from .trig import canonical_nquads, parse_trig, serialize_trig
from .validator import ValidationOptions, ValidationReport, validate


class RegistryError(Exception):
    pass


class UnknownGupriError(RegistryError):
    """No deposit is known under this identifier value."""


class NoDescribingRecordError(RegistryError):
    """The identifier is known but no stored content describes the object."""


class DepositConflictError(RegistryError):
    """An identifier value is already bound to different content."""


class DepositValidationError(RegistryError):
    """The dataset did not validate cleanly; the report explains why."""

    def __init__(self, report: ValidationReport) -> None:
        bad = ", ".join(
            f"{f.rule.value}@{f.focus_text}" for f in report.violations()
        )
        super().__init__(f"deposit refused, violations: {bad}")
        self.report = report


class JournalError(RegistryError):
    """The journal file is truncated or inconsistent."""


def compute_etag(ds: Dataset) -> str:
    """sha-256 hex over the canonical quad lines; equal quad sets hash equally."""
    return hashlib.sha256(canonical_nquads(ds).encode("utf-8")).hexdigest()


def node_from_text(text: str) -> Node:
    return BlankNode(text[2:]) if text.startswith("_:") else Iri(text)


@dataclass(frozen=True)
class DepositEntry:
    gupri: str
    node: Node
    record_graph: Node | None
    dataset: Dataset
    deposited_at: datetime
    etag: str
    classification: ClassificationSummary
    aliases: tuple[str, ...] = ()
    forced: bool = False


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


_HEADER_LEN = struct.Struct(">I")
_BODY_LEN = struct.Struct(">Q")


def _journal_append(path: Path, header: dict, body: str) -> None:
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    body_bytes = body.encode("utf-8")
    with path.open("ab") as fh:
        fh.write(_HEADER_LEN.pack(len(header_bytes)))
        fh.write(header_bytes)
        fh.write(_BODY_LEN.pack(len(body_bytes)))
        fh.write(body_bytes)


def _journal_read(path: Path) -> list[tuple[dict, str]]:
    records: list[tuple[dict, str]] = []
    data = path.read_bytes()
    offset = 0
    while offset < len(data):
        if offset + _HEADER_LEN.size > len(data):
            raise JournalError(f"truncated journal header at byte {offset}")
        (header_len,) = _HEADER_LEN.unpack_from(data, offset)
        offset += _HEADER_LEN.size
        if offset + header_len > len(data):
            raise JournalError(f"truncated journal header at byte {offset}")
        try:
            header = json.loads(data[offset : offset + header_len])
        except ValueError as exc:
            raise JournalError(f"unreadable journal header at byte {offset}: {exc}")
        offset += header_len
        if offset + _BODY_LEN.size > len(data):
            raise JournalError(f"truncated journal body length at byte {offset}")
        (body_len,) = _BODY_LEN.unpack_from(data, offset)
        offset += _BODY_LEN.size
        if offset + body_len > len(data):
            raise JournalError(f"truncated journal body at byte {offset}")
        body = data[offset : offset + body_len].decode("utf-8")
        offset += body_len
        records.append((header, body))
    return records


class RegistryStore:
    """Single-writer, many-reader store. Deposits serialize through a lock and
    land in the journal before they become visible; readers always see a
    complete deposit batch or none of it."""

    def __init__(self, journal_path: str | Path | None = None) -> None:
        self._lock = threading.Lock()
        self._entries: dict[str, DepositEntry] = {}
        self._journal = Path(journal_path) if journal_path is not None else None
        if self._journal is not None and self._journal.exists():
            self._replay()

    def _replay(self) -> None:
        assert self._journal is not None
        entries = dict(self._entries)
        for header, body in _journal_read(self._journal):
            dataset = parse_trig(body)
            etag = compute_etag(dataset)
            if etag != header.get("etag"):
                raise JournalError(
                    f"journal content hash mismatch for {header.get('gupris')}"
                )
            cls = header.get("classification", {})
            entry = DepositEntry(
                gupri=header["gupris"][0],
                node=node_from_text(header["node"]),
                record_graph=(
                    node_from_text(header["record_graph"])
                    if header.get("record_graph")
                    else None
                ),
                dataset=dataset,
                deposited_at=datetime.fromisoformat(header["ts"]),
                etag=etag,
                classification=ClassificationSummary(
                    kinds=tuple(cls.get("kinds", ())),
                    info_types=tuple(cls.get("info_types", ())),
                    encoding_formats=tuple(cls.get("encoding_formats", ())),
                ),
                aliases=tuple(header["gupris"][1:]),
                forced=bool(header.get("forced", False)),
            )
            for value in header["gupris"]:
                entries[value] = entry
        self._entries = entries

    # -- queries ------------------------------------------------------------

    def entries(self) -> list[DepositEntry]:
        seen: list[DepositEntry] = []
        for entry in self._entries.values():
            if not any(e is entry for e in seen):
                seen.append(entry)
        return seen

    def __len__(self) -> int:
        return len(self.entries())

    def resolve(self, gupri: str) -> DepositEntry:
        entry = self._entries.get(gupri)
        if entry is None:
            raise UnknownGupriError(gupri)
        if len(entry.dataset) == 0:
            raise NoDescribingRecordError(gupri)
        return entry

    def resolve_text(self, gupri: str) -> tuple[str, str]:
        """The stored slice serialized as TriG, plus its etag."""
        entry = self.resolve(gupri)
        return serialize_trig(entry.dataset), entry.etag

    def describe_type(self, gupri: str) -> ClassificationSummary:
        entry = self._entries.get(gupri)
        if entry is None:
            raise UnknownGupriError(gupri)
        return entry.classification

    # -- deposits -----------------------------------------------------------

    def _slice_for(self, model: FdofModel, node: Node) -> tuple[Dataset, Node | None]:
        for record in model.records.values():
            if node in record.targets:
                return record.statements, record.graph
        subject_quads = Dataset(
            model.source.match(subject=node), prefixes=model.source.prefixes
        )
        return subject_quads, None

    def deposit(
        self,
        ds: Dataset,
        shapes: ShapeRegistry | None = None,
        options: ValidationOptions | None = None,
        force: bool = False,
        now: Callable[[], datetime] = _utc_now,
    ) -> list[tuple[str, str]]:
        """Store one entry per identified object; returns (identifier, etag) pairs.

        Warnings never block a deposit; violations do, unless force is set
        (forced deposits are flagged in the entry and the journal).
        """
        model = extract_model(ds)
        if not force:
            report = validate(model, shapes, options)
            if not report.conforms:
                raise DepositValidationError(report)

        with self._lock:
            planned: list[DepositEntry] = []
            claimed: dict[str, str] = {}
            results: list[tuple[str, str]] = []
            for node, obj in model.objects.items():
                if not obj.kinds or not obj.gupris:
                    continue
                content, record_graph = self._slice_for(model, node)
                etag = compute_etag(content)
                for value in obj.gupris:
                    existing = self._entries.get(value)
                    if existing is not None and existing.etag != etag:
                        raise DepositConflictError(
                            f"{value} is already bound to different content"
                        )
                    if value in claimed and claimed[value] != etag:
                        raise DepositConflictError(
                            f"{value} claimed twice with different content in one deposit"
                        )
                    claimed[value] = etag
                results.append((obj.gupris[0], etag))
                if obj.gupris[0] in self._entries:
                    continue  # idempotent re-deposit
                planned.append(
                    DepositEntry(
                        gupri=obj.gupris[0],
                        node=node,
                        record_graph=record_graph,
                        dataset=content,
                        deposited_at=now(),
                        etag=etag,
                        classification=classify(model, node),
                        aliases=tuple(obj.gupris[1:]),
                        forced=force,
                    )
                )

            for entry in planned:
                if self._journal is not None:
                    header = {
                        "ts": entry.deposited_at.isoformat(),
                        "node": node_text(entry.node),
                        "gupris": [entry.gupri, *entry.aliases],
                        "record_graph": (
                            node_text(entry.record_graph)
                            if entry.record_graph is not None
                            else None
                        ),
                        "etag": entry.etag,
                        "classification": {
                            "kinds": list(entry.classification.kinds),
                            "info_types": list(entry.classification.info_types),
                            "encoding_formats": list(entry.classification.encoding_formats),
                        },
                        "forced": entry.forced,
                    }
                    _journal_append(self._journal, header, serialize_trig(entry.dataset))

            if planned:
                updated = dict(self._entries)
                for entry in planned:
                    for value in (entry.gupri, *entry.aliases):
                        updated[value] = entry
                self._entries = updated
            return results
