"""Identifier spaces, GUPRI checks, minting with provenance, and uniqueness audits.

A minted value is never deleted or rebound within a ledger; persistence
beyond the process is a governance concern and out of static reach here.
"""

from __future__ import annotations

import base64
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Iterable, Sequence

from .uris import UriParts, check_uri_syntax


@dataclass(frozen=True)
class IdentificationSpace:
    """A named identification system: the grammar decides membership, totally."""

    name: str
    grammar: Callable[[str], bool] = field(compare=False)

    def accepts(self, value: str) -> bool:
        return bool(self.grammar(value))


def _uri_member(value: str) -> bool:
    return isinstance(check_uri_syntax(value), UriParts)


URI_SPACE = IdentificationSpace("uri", _uri_member)


@dataclass(frozen=True)
class Identifier:
    """A value within an identification space; membership is enforced at construction."""

    value: str
    space: IdentificationSpace

    def __post_init__(self) -> None:
        if not self.space.accepts(self.value):
            raise ValueError(
                f"{self.value!r} is not a member of identification space {self.space.name!r}"
            )


@dataclass(frozen=True)
class Gupri:
    """A globally unique, persistent, resolvable identifier candidate."""

    base: Identifier
    resolvable_hint: str | None = None


@dataclass(frozen=True)
class Identification:
    """Reified assignment event: who bound which identifier to which object, when."""

    identifier: Identifier
    object: str
    agent: str
    timestamp: datetime


def is_gupri(value: str, space: IdentificationSpace = URI_SPACE) -> bool:
    """Syntax and space-membership check; uniqueness and resolvability are separate."""
    if not isinstance(check_uri_syntax(value), UriParts):
        return False
    return space.accepts(value)


class MintError(Exception):
    """A mint request could not produce a fresh, well-formed identifier."""


def _utc_now() -> datetime:
    return datetime.now(timezone.utc)


def _random_token(rand_bytes: Callable[[int], bytes]) -> str:
    # 128 random bits, lowercase base-32, fixed 26-character length.
    raw = rand_bytes(16)
    return base64.b32encode(raw).decode("ascii").rstrip("=").lower()


_RETRY_BOUND = 8


class MintLedger:
    """Serialized accounting scope for minted identifiers.

    Concurrent mints observe a total order; one object is minted at most once
    and no value is ever handed out twice.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._value_to_object: dict[str, str] = {}
        self._minted_objects: set[str] = set()

    def __len__(self) -> int:
        return len(self._value_to_object)

    def minted_values(self) -> tuple[str, ...]:
        with self._lock:
            return tuple(self._value_to_object)

    def object_for(self, value: str) -> str | None:
        with self._lock:
            return self._value_to_object.get(value)

    def mint(
        self,
        space: IdentificationSpace,
        template: str,
        agent: str,
        object: str,
        clock: Callable[[], datetime] = _utc_now,
        rand_bytes: Callable[[int], bytes] | None = None,
        resolvable_hint: str | None = None,
    ) -> tuple[Gupri, Identification]:
        """Fill the template's single ``{}`` slot with a fresh token and record the binding."""
        if template.count("{}") != 1:
            raise MintError("template must contain exactly one '{}' slot")
        if rand_bytes is None:
            import secrets

            rand_bytes = secrets.token_bytes
        with self._lock:
            if object in self._minted_objects:
                raise MintError(f"object already minted in this scope: {object}")
            value: str | None = None
            for _ in range(_RETRY_BOUND):
                candidate = template.replace("{}", _random_token(rand_bytes), 1)
                if not is_gupri(candidate, space):
                    raise MintError(
                        f"template instantiation is not a member of space {space.name!r}: "
                        f"{candidate!r}"
                    )
                if candidate not in self._value_to_object:
                    value = candidate
                    break
            if value is None:
                raise MintError("could not generate a fresh value within the retry bound")
            self._value_to_object[value] = object
            self._minted_objects.add(object)
            gupri = Gupri(Identifier(value, space), resolvable_hint)
            identification = Identification(gupri.base, object, agent, clock())
            return gupri, identification


@dataclass(frozen=True)
class Collision:
    """One identifier value bound to two or more distinct subjects."""

    value: str
    subjects: tuple[str, ...]


def uniqueness_audit(values: Iterable[Sequence[str]]) -> list[Collision]:
    """Report every value bound to more than one distinct subject.

    Repeating the same (value, subject) pair is a single reference and not a
    collision. The result is order-insensitive: sorted by value, subjects
    sorted within each collision.
    """
    bindings: dict[str, set[str]] = {}
    for value, subject in values:
        bindings.setdefault(value, set()).add(subject)
    return [
        Collision(value, tuple(sorted(subjects)))
        for value, subjects in sorted(bindings.items())
        if len(subjects) > 1
    ]
