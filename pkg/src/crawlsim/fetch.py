"""Page retrieval contract, injected clocks, and the politeness gate.

Every retrieval path (live HTTP and the simulated web) sits behind
:class:`PageSource` so the engine never touches a socket directly, and
time is always injected so politeness and freshness stay deterministic
under test.
"""

from __future__ import annotations

import math
import threading
import time
from dataclasses import dataclass
from enum import Enum

import requests

from crawlsim.urls import NormalizedUrl

DEFAULT_DELAY = 1.0  # seconds between fetches when robots.txt names none
MAX_REDIRECTS = 5


class FetchStatus(Enum):
    OK = "ok"
    NOT_FOUND = "not_found"
    SERVER_ERROR = "server_error"
    NETWORK_ERROR = "network_error"


@dataclass(frozen=True)
class FetchResult:
    """Outcome of one fetch; `body` is present exactly when status is OK."""

    url: NormalizedUrl
    status: FetchStatus
    body: bytes | None
    fetched_at: float

    def __post_init__(self) -> None:
        if (self.body is not None) != (self.status is FetchStatus.OK):
            raise ValueError("body must be present iff status is OK")


class PageSource:
    """Something that serves page bytes for a URL at a point in time."""

    def fetch(self, url: NormalizedUrl, at: float) -> FetchResult:
        raise NotImplementedError


class Clock:
    """Injected time source; `wait_until` blocks (or advances) to a time."""

    def now(self) -> float:
        raise NotImplementedError

    def wait_until(self, t: float) -> None:
        raise NotImplementedError


class SystemClock(Clock):
    """Wall clock, monotonic within a run."""

    def __init__(self) -> None:
        self._origin = time.monotonic()

    def now(self) -> float:
        return time.monotonic() - self._origin

    def wait_until(self, t: float) -> None:
        remaining = t - self.now()
        if remaining > 0:
            time.sleep(remaining)


class SimClock(Clock):
    """Simulated time: waiting jumps the clock forward, never sleeps."""

    def __init__(self, start: float = 0.0) -> None:
        self._now = start
        self._lock = threading.Lock()

    def now(self) -> float:
        with self._lock:
            return self._now

    def wait_until(self, t: float) -> None:
        with self._lock:
            if t > self._now:
                self._now = t


class PolitenessGate:
    """Per-host fetch slot allocator enforcing a minimum delay.

    `reserve_slot` hands out grant times at least `delay` apart per
    host; the caller must not fetch before its grant. Hosts are fully
    independent. Thread-safe.
    """

    def __init__(self, default_delay: float = DEFAULT_DELAY) -> None:
        self._default_delay = default_delay
        self._delays: dict[str, float] = {}
        self._last_grant: dict[str, float] = {}
        self._lock = threading.Lock()

    def set_delay(self, host: str, delay: float) -> None:
        if delay < 0:
            raise ValueError(f"delay must be >= 0, got {delay}")
        with self._lock:
            self._delays[host] = delay

    def delay_for(self, host: str) -> float:
        with self._lock:
            return self._delays.get(host, self._default_delay)

    def reserve_slot(self, host: str, now: float) -> float:
        with self._lock:
            delay = self._delays.get(host, self._default_delay)
            last = self._last_grant.get(host)
            grant = now if last is None else max(now, _spaced(last, delay))
            self._last_grant[host] = grant
            return grant


def _spaced(base: float, delay: float) -> float:
    """Smallest float t with t - base >= delay; plain addition can round
    a hair short, and grant gaps must honor the delay exactly."""
    t = base + delay
    while t - base < delay:
        t = math.nextafter(t, math.inf)
    return t


class LiveSource(PageSource):
    """Minimal HTTP adapter: one GET per fetch, at most 5 redirects.

    Sends ``User-Agent: <agent>`` (the same token used for robots
    matching); no cookies, no auth. 2xx maps to OK, 404 to NOT_FOUND,
    other 4xx/5xx to SERVER_ERROR, and transport failures (including
    over-long redirect chains) to NETWORK_ERROR.
    """

    def __init__(self, agent: str, timeout: float = 10.0) -> None:
        self._timeout = timeout
        self._session = requests.Session()
        self._session.max_redirects = MAX_REDIRECTS
        self._session.headers["User-Agent"] = agent

    def fetch(self, url: NormalizedUrl, at: float) -> FetchResult:
        try:
            response = self._session.get(str(url), timeout=self._timeout)
        except requests.RequestException:
            return FetchResult(url, FetchStatus.NETWORK_ERROR, None, at)
        if 200 <= response.status_code < 300:
            return FetchResult(url, FetchStatus.OK, response.content, at)
        if response.status_code == 404:
            return FetchResult(url, FetchStatus.NOT_FOUND, None, at)
        return FetchResult(url, FetchStatus.SERVER_ERROR, None, at)
