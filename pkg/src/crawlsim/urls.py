"""URL canonicalization, 64-bit document ids, and the crawl frontier.

A canonical URL renders as ``scheme://host[:port]path[?query]`` and that
rendering is the doc_id hash input, so it must be byte-stable across
runs. The frontier is a FIFO with a seen-set keyed by doc_id, enforcing
visit-once within a crawl cycle.
"""

from __future__ import annotations

import re
import threading
from collections import deque
from dataclasses import dataclass
from urllib.parse import urljoin, urlsplit

from crawlsim._kernels import fnv1a64

DocId = int

_DEFAULT_PORTS = {"http": 80, "https": 443}
_PCT_RE = re.compile(r"%[0-9a-fA-F]{2}")


class UrlError(ValueError):
    """Base class for URL normalization failures."""


class NonHttpScheme(UrlError):
    """Scheme other than http/https (mailto:, javascript:, ftp:, ...)."""


class RelativeWithoutBase(UrlError):
    """Relative reference given with no base URL to resolve against."""


class UnparsableUrl(UrlError):
    """Reference that cannot be parsed into an http(s) URL."""


@dataclass(frozen=True)
class NormalizedUrl:
    """Canonical URL value; construct via :func:`normalize_url`."""

    scheme: str
    host: str
    port: int | None
    path: str
    query: str | None = None

    def __str__(self) -> str:
        host = f"[{self.host}]" if ":" in self.host else self.host
        port = "" if self.port is None else f":{self.port}"
        query = "" if self.query is None else f"?{self.query}"
        return f"{self.scheme}://{host}{port}{self.path}{query}"

    @property
    def request_path(self) -> str:
        """Path plus query, the robots.txt matching target."""
        return self.path if self.query is None else f"{self.path}?{self.query}"


def normalize_url(base: NormalizedUrl | None, href: str) -> NormalizedUrl:
    """Resolve `href` (against `base` when relative) to canonical form.

    Scheme and host are lowercased, default ports elided, dot-segments
    removed, the fragment stripped, and percent-escapes uppercased but
    otherwise preserved as given. An empty path renders as "/".
    """
    href = href.strip()
    if not href:
        raise UnparsableUrl("empty reference")

    target = urljoin(str(base), href) if base is not None else href
    try:
        parts = urlsplit(target)
    except ValueError as exc:
        raise UnparsableUrl(f"{href!r}: {exc}") from None

    if not parts.scheme:
        raise RelativeWithoutBase(f"relative reference with no base: {href!r}")
    scheme = parts.scheme.lower()
    if scheme not in ("http", "https"):
        raise NonHttpScheme(f"unsupported scheme {scheme!r} in {href!r}")

    try:
        host = parts.hostname
        port = parts.port
    except ValueError as exc:
        raise UnparsableUrl(f"{href!r}: {exc}") from None
    if not host:
        raise UnparsableUrl(f"no host in {href!r}")
    if port == _DEFAULT_PORTS[scheme]:
        port = None

    path = _remove_dot_segments(parts.path) or "/"
    query = parts.query or None
    return NormalizedUrl(
        scheme=scheme,
        host=host.lower(),
        port=port,
        path=_upper_pct(path),
        query=None if query is None else _upper_pct(query),
    )


def _remove_dot_segments(path: str) -> str:
    """Resolve "." and ".." segments (RFC 3986 section 5.2.4)."""
    segments: list[str] = []
    for segment in path.split("/"):
        if segment == ".":
            continue
        if segment == "..":
            if len(segments) > 1:
                segments.pop()
        else:
            segments.append(segment)
    if path.endswith(("/.", "/..")):
        segments.append("")
    resolved = "/".join(segments)
    if path.startswith("/") and not resolved.startswith("/"):
        resolved = "/" + resolved
    return resolved


def _upper_pct(text: str) -> str:
    return _PCT_RE.sub(lambda m: m.group(0).upper(), text)


def doc_id_of(url: NormalizedUrl) -> DocId:
    """Stable 64-bit id: FNV-1a over the canonical rendering's UTF-8."""
    return fnv1a64(str(url).encode("utf-8"))


def in_domain(url: NormalizedUrl, working_domain: str) -> bool:
    """True iff the URL's host is exactly the working domain."""
    return url.host == working_domain


class Frontier:
    """FIFO to-do queue with a seen-set; safe for concurrent workers."""

    def __init__(self) -> None:
        self._queue: deque[tuple[NormalizedUrl, DocId]] = deque()
        self._seen: set[DocId] = set()
        self._lock = threading.Lock()

    def enqueue_if_new(self, url: NormalizedUrl) -> bool:
        """Enqueue `url` unless its doc_id was already seen this cycle."""
        doc_id = doc_id_of(url)
        with self._lock:
            if doc_id in self._seen:
                return False
            self._seen.add(doc_id)
            self._queue.append((url, doc_id))
            return True

    def dequeue(self) -> tuple[NormalizedUrl, DocId] | None:
        """Pop the oldest entry, or None when the queue is empty."""
        with self._lock:
            if not self._queue:
                return None
            return self._queue.popleft()

    def __len__(self) -> int:
        with self._lock:
            return len(self._queue)
