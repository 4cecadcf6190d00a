"""The crawl cycle: seed, robots gate, fetch, index, expand, terminate.

W workers share one frontier, one politeness gate, and one report; the
cycle ends when the queue is empty with no fetch in flight, or when the
page budget runs out. Each doc_id is fetched at most once per cycle
regardless of worker count.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO

from crawlsim.fetch import (
    DEFAULT_DELAY,
    Clock,
    FetchStatus,
    PageSource,
    PolitenessGate,
    SystemClock,
)
from crawlsim.index import (
    PageSnapshot,
    WordIndex,
    content_hash,
    extract_links,
    tokenize,
)
from crawlsim.robots import Rule, crawl_delay_for, decide_access, parse_robots
from crawlsim.urls import DocId, Frontier, NormalizedUrl, doc_id_of


@dataclass(frozen=True)
class CrawlConfig:
    seed_url: NormalizedUrl
    agent: str
    workers: int = 1
    max_pages: int | None = None
    default_delay: float = DEFAULT_DELAY

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.max_pages is not None and self.max_pages < 1:
            raise ValueError(f"max_pages must be >= 1, got {self.max_pages}")


@dataclass(frozen=True)
class ErrorRecord:
    url: NormalizedUrl
    status: FetchStatus
    fetched_at: float


@dataclass
class CrawlReport:
    """Everything one cycle did: visits, skips, errors, and timing."""

    seed_url: NormalizedUrl
    agent: str
    workers: int
    visited: list[PageSnapshot] = field(default_factory=list)
    skipped_disallowed: list[tuple[NormalizedUrl, Rule | None]] = field(
        default_factory=list
    )
    skipped_out_of_domain: list[NormalizedUrl] = field(default_factory=list)
    errors: list[ErrorRecord] = field(default_factory=list)
    started: float = 0.0
    finished: float = 0.0

    @property
    def domain(self) -> str:
        return self.seed_url.host

    def seed_diagnostic(self) -> str | None:
        """One-line explanation when the cycle visited nothing."""
        if self.visited:
            return None
        seed_id = doc_id_of(self.seed_url)
        for url, rule in self.skipped_disallowed:
            if doc_id_of(url) == seed_id:
                return f"seed disallowed by robots.txt ({rule})"
        for record in self.errors:
            if doc_id_of(record.url) == seed_id:
                return f"seed unfetchable: {record.status.value}"
        return None


def crawl_cycle(
    config: CrawlConfig, source: PageSource, clock: Clock | None = None
) -> tuple[CrawlReport, WordIndex]:
    """Run one crawl cycle over the seed's domain.

    robots.txt is fetched once up front (absence means allow-all) and
    every dequeued URL is checked against it; disallowed and
    out-of-domain URLs are recorded, never fetched. The politeness gate
    spaces fetches per host using the robots crawl-delay when present.
    """
    clock = clock or SystemClock()
    cycle = _Cycle(config, source, clock)
    return cycle.run()


class _Cycle:
    def __init__(self, config: CrawlConfig, source: PageSource, clock: Clock):
        self.config = config
        self.source = source
        self.clock = clock
        self.domain = config.seed_url.host
        self.frontier = Frontier()
        self.gate = PolitenessGate(default_delay=config.default_delay)
        self.index = WordIndex()
        self.report = CrawlReport(
            seed_url=config.seed_url, agent=config.agent, workers=config.workers
        )
        self.policy = None
        self._cond = threading.Condition()
        self._in_flight = 0
        self._stopped = False
        self._reserved = 0
        self._report_lock = threading.Lock()
        self._index_lock = threading.Lock()
        self._offsite_seen: set[DocId] = set()

    def run(self) -> tuple[CrawlReport, WordIndex]:
        self.report.started = self.clock.now()
        self._load_robots()
        self.frontier.enqueue_if_new(self.config.seed_url)
        if self.config.workers == 1:
            self._worker()
        else:
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                futures = [
                    pool.submit(self._worker) for _ in range(self.config.workers)
                ]
                for future in futures:
                    future.result()
        self.report.finished = self.clock.now()
        return self.report, self.index

    def _load_robots(self) -> None:
        # One fetch per cycle, exempt from the politeness gate.
        seed = self.config.seed_url
        robots_url = NormalizedUrl(
            scheme=seed.scheme, host=seed.host, port=seed.port, path="/robots.txt"
        )
        result = self.source.fetch(robots_url, self.clock.now())
        if result.status is FetchStatus.OK:
            self.policy = parse_robots(result.body)
        delay = crawl_delay_for(self.policy, self.config.agent)
        if delay is not None:
            self.gate.set_delay(self.domain, delay)

    # --- worker loop ---

    def _worker(self) -> None:
        while True:
            item = self._claim()
            if item is None:
                return
            url, doc_id = item
            try:
                self._process(url, doc_id)
            finally:
                self._release()

    def _claim(self) -> tuple[NormalizedUrl, DocId] | None:
        with self._cond:
            while True:
                if self._stopped:
                    return None
                item = self.frontier.dequeue()
                if item is not None:
                    self._in_flight += 1
                    return item
                if self._in_flight == 0:
                    self._cond.notify_all()
                    return None
                self._cond.wait(timeout=0.1)

    def _release(self) -> None:
        with self._cond:
            self._in_flight -= 1
            self._cond.notify_all()

    def _notify(self) -> None:
        with self._cond:
            self._cond.notify_all()

    def _reserve_visit(self) -> bool:
        if self.config.max_pages is None:
            return True
        with self._cond:
            if self._reserved >= self.config.max_pages:
                self._stopped = True
                self._cond.notify_all()
                return False
            self._reserved += 1
            return True

    def _process(self, url: NormalizedUrl, doc_id: DocId) -> None:
        decision = decide_access(self.policy, self.config.agent, url.request_path)
        if not decision.allowed:
            with self._report_lock:
                self.report.skipped_disallowed.append((url, decision.matched_rule))
            return
        if not self._reserve_visit():
            return

        grant = self.gate.reserve_slot(url.host, self.clock.now())
        self.clock.wait_until(grant)
        result = self.source.fetch(url, grant)
        if result.status is not FetchStatus.OK:
            with self._report_lock:
                self.report.errors.append(ErrorRecord(url, result.status, grant))
            return

        body = result.body
        tokens = tokenize(body)
        links = extract_links(body, base=url)
        snapshot = PageSnapshot(
            doc_id=doc_id,
            url=url,
            fetched_at=grant,
            content_hash=content_hash(body),
            out_links=tuple(links),
            token_count=len(tokens),
        )
        with self._index_lock:
            self.index.index_document(doc_id, tokens)
        with self._report_lock:
            self.report.visited.append(snapshot)

        added = False
        for link in links:
            if link.host != self.domain:
                link_id = doc_id_of(link)
                with self._report_lock:
                    if link_id not in self._offsite_seen:
                        self._offsite_seen.add(link_id)
                        self.report.skipped_out_of_domain.append(link)
                continue
            if self.frontier.enqueue_if_new(link):
                added = True
        if added:
            self._notify()


# --- report serialization ----------------------------------------------


def report_records(report: CrawlReport) -> list[dict]:
    """Report as JSON-ready records: visits, then errors, then a summary."""
    records: list[dict] = []
    for snap in report.visited:
        records.append(
            {
                "url": str(snap.url),
                "doc_id": snap.doc_id,
                "fetched_at": snap.fetched_at,
                "status": FetchStatus.OK.value,
                "n_links": len(snap.out_links),
                "n_tokens": snap.token_count,
                "content_hash": snap.content_hash,
            }
        )
    for error in report.errors:
        records.append(
            {
                "url": str(error.url),
                "doc_id": doc_id_of(error.url),
                "fetched_at": error.fetched_at,
                "status": error.status.value,
                "n_links": 0,
                "n_tokens": 0,
                "content_hash": 0,
            }
        )
    records.append(
        {
            "summary": {
                "seed": str(report.seed_url),
                "domain": report.domain,
                "agent": report.agent,
                "workers": report.workers,
                "visited": len(report.visited),
                "errors": len(report.errors),
                "skipped_disallowed": [
                    [str(url), None if rule is None else str(rule)]
                    for url, rule in report.skipped_disallowed
                ],
                "skipped_out_of_domain": [
                    str(url) for url in report.skipped_out_of_domain
                ],
                "started": report.started,
                "finished": report.finished,
            }
        }
    )
    return records


def write_report(report: CrawlReport, fp: IO[str]) -> None:
    """Write the line-delimited report; byte-stable for identical runs."""
    for record in report_records(report):
        fp.write(json.dumps(record, separators=(",", ":")) + "\n")
