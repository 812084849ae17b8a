"""RFC 3986 URI syntax checking with positional rejection diagnostics.

check_uri_syntax accepts exactly the absolute-URI-with-optional-fragment
form (scheme ":" hier-part ["?" query] ["#" fragment]) and decomposes it; a
rejection is a value carrying the first offending position, never an
exception. The component character rules, percent-encoding, and the
IP-literal grammar follow the RFC's ABNF.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_ALPHA = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")
_DIGIT = set("0123456789")
_HEXDIG = _DIGIT | set("abcdefABCDEF")
_UNRESERVED = _ALPHA | _DIGIT | set("-._~")
_SUB_DELIMS = set("!$&'()*+,;=")
_SCHEME_CHARS = _ALPHA | _DIGIT | set("+-.")
_USERINFO_CHARS = _UNRESERVED | _SUB_DELIMS | {":"}
_REG_NAME_CHARS = _UNRESERVED | _SUB_DELIMS
_PCHAR = _UNRESERVED | _SUB_DELIMS | {":", "@"}
_QUERY_CHARS = _PCHAR | {"/", "?"}

_DEC_OCTET_RE = re.compile(r"^(25[0-5]|2[0-4][0-9]|1[0-9][0-9]|[1-9][0-9]|[0-9])$")
_IPVFUTURE_RE = re.compile(
    r"^[vV][0-9A-Fa-f]+\.[A-Za-z0-9\-._~!$&'()*+,;=:]+$"
)


@dataclass(frozen=True)
class UriParts:
    """Decomposed absolute URI; authority/query/fragment are None when absent."""

    scheme: str
    authority: str | None
    path: str
    query: str | None
    fragment: str | None


@dataclass(frozen=True)
class UriRejection:
    """Why a candidate is not a URI: 0-based position of the first offending character."""

    position: int
    reason: str


class _Reject(Exception):
    def __init__(self, position: int, reason: str) -> None:
        self.position = position
        self.reason = reason


def _scan_chars(value: str, start: int, end: int, allowed: set[str], what: str) -> None:
    """Validate value[start:end] as a run of allowed chars and pct-encoded triplets."""
    i = start
    while i < end:
        ch = value[i]
        if ch == "%":
            if i + 2 >= end:
                raise _Reject(i, f"truncated percent-encoding in {what}")
            if value[i + 1] not in _HEXDIG or value[i + 2] not in _HEXDIG:
                bad = i + 1 if value[i + 1] not in _HEXDIG else i + 2
                raise _Reject(bad, f"invalid percent-encoding in {what}")
            i += 3
        elif ch in allowed:
            i += 1
        else:
            raise _Reject(i, f"character not allowed in {what}")


def _valid_ipv4(text: str) -> bool:
    parts = text.split(".")
    return len(parts) == 4 and all(_DEC_OCTET_RE.match(p) for p in parts)


def _valid_h16(text: str) -> bool:
    return 1 <= len(text) <= 4 and all(c in _HEXDIG for c in text)


def _valid_ipv6(text: str) -> bool:
    if "::" in text:
        head, _, tail = text.partition("::")
        if "::" in tail:
            return False
        left = head.split(":") if head else []
        right = tail.split(":") if tail else []
        groups = left + right
        compressed = True
    else:
        groups = text.split(":")
        compressed = False
    if not groups:
        return compressed
    units = 0
    for index, group in enumerate(groups):
        last = index == len(groups) - 1
        if last and "." in group:
            # An IPv4 tail is only legal in final position and counts as two
            # 16-bit groups. When "::" compressed the tail side, the tail must
            # actually end the address.
            if compressed and text.endswith("::"):
                return False
            if not _valid_ipv4(group):
                return False
            units += 2
        else:
            if not _valid_h16(group):
                return False
            units += 1
    if compressed:
        return units <= 7
    return units == 8


def _validate_host_port(value: str, start: int, end: int) -> None:
    if start < end and value[start] == "[":
        close = value.find("]", start, end)
        if close == -1:
            raise _Reject(start, "unterminated IP-literal host")
        inside = value[start + 1 : close]
        if not (_valid_ipv6(inside) or _IPVFUTURE_RE.match(inside)):
            raise _Reject(start + 1, "invalid IP-literal host")
        i = close + 1
    else:
        i = start
        while i < end:
            ch = value[i]
            if ch == ":":
                break
            if ch == "%":
                if i + 2 >= end:
                    raise _Reject(i, "truncated percent-encoding in host")
                if value[i + 1] not in _HEXDIG or value[i + 2] not in _HEXDIG:
                    bad = i + 1 if value[i + 1] not in _HEXDIG else i + 2
                    raise _Reject(bad, "invalid percent-encoding in host")
                i += 3
            elif ch in _REG_NAME_CHARS:
                i += 1
            else:
                raise _Reject(i, "character not allowed in host")
    if i == end:
        return
    if value[i] != ":":
        raise _Reject(i, "unexpected character after host")
    for j in range(i + 1, end):
        if value[j] not in _DIGIT:
            raise _Reject(j, "port must be digits")


def _validate_authority(value: str, start: int, end: int) -> None:
    at = value.find("@", start, end)
    if at != -1:
        _scan_chars(value, start, at, _USERINFO_CHARS, "userinfo")
        _validate_host_port(value, at + 1, end)
    else:
        _validate_host_port(value, start, end)


def check_uri_syntax(value: str) -> UriParts | UriRejection:
    """Accept and decompose an absolute URI, or report the first offending position."""
    try:
        return _check(value)
    except _Reject as reject:
        return UriRejection(reject.position, reject.reason)


def _check(value: str) -> UriParts:
    if not value or value[0] not in _ALPHA:
        raise _Reject(0, "scheme must start with a letter")
    i = 1
    while i < len(value) and value[i] in _SCHEME_CHARS:
        i += 1
    if i >= len(value) or value[i] != ":":
        raise _Reject(i, "expected ':' after scheme")
    scheme = value[:i]
    i += 1

    authority: str | None = None
    if value.startswith("//", i):
        i += 2
        auth_start = i
        while i < len(value) and value[i] not in "/?#":
            i += 1
        _validate_authority(value, auth_start, i)
        authority = value[auth_start:i]
        path_start = i
        # path-abempty: zero or more '/'-led segments
        while i < len(value) and value[i] not in "?#":
            if value[i] == "/":
                i += 1
            else:
                seg_end = i
                while seg_end < len(value) and value[seg_end] not in "/?#":
                    seg_end += 1
                _scan_chars(value, i, seg_end, _PCHAR, "path")
                i = seg_end
        path = value[path_start:i]
    else:
        path_start = i
        if i < len(value) and value[i] == "/":
            # path-absolute: a single leading slash (a double slash would be
            # an authority, already handled above)
            i += 1
        while i < len(value) and value[i] not in "?#":
            if value[i] == "/":
                i += 1
            else:
                seg_end = i
                while seg_end < len(value) and value[seg_end] not in "/?#":
                    seg_end += 1
                _scan_chars(value, i, seg_end, _PCHAR, "path")
                i = seg_end
        path = value[path_start:i]

    query: str | None = None
    if i < len(value) and value[i] == "?":
        i += 1
        q_start = i
        while i < len(value) and value[i] != "#":
            i += 1
        _scan_chars(value, q_start, i, _QUERY_CHARS, "query")
        query = value[q_start:i]

    fragment: str | None = None
    if i < len(value) and value[i] == "#":
        i += 1
        f_start = i
        _scan_chars(value, f_start, len(value), _QUERY_CHARS, "fragment")
        fragment = value[f_start:]
        i = len(value)

    if i != len(value):
        raise _Reject(i, "unexpected character")
    return UriParts(scheme, authority, path, query, fragment)
