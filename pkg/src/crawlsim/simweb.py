"""Deterministic simulated web for crawling and revisit experiments.

Everything is a pure function of the site seed: the page graph comes
from one splitmix64 structure stream, each page's change process from
its own substream keyed by (seed, path hash), and page bytes from
(domain, path, version). Identical seeds give bit-identical sites,
which is what the golden-file tests rely on.

The module also hosts the brute-force oracles (reachability, freshness)
used to check the engine and the revisit metrics from the outside.
"""

from __future__ import annotations

import dataclasses
import json
import threading
from bisect import bisect_left, bisect_right
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from crawlsim._kernels import MASK64, SplitMix64, fnv1a64
from crawlsim.fetch import FetchResult, FetchStatus, PageSource
from crawlsim.index import content_hash
from crawlsim.revisit import (
    AllRatesZero,
    PageState,
    RevisitPlan,
    collection_freshness,
    estimate_change_rate,
    plan_proportional,
    plan_uniform,
)
from crawlsim.robots import RobotsPolicy, decide_access
from crawlsim.urls import NormalizedUrl, doc_id_of

SECTIONS = ("docs", "images", "news", "data", "blog")
EXTERNAL_EVERY = 16  # one page in ~16 gets an off-domain link
WORDS_PER_PAGE = 30
PERIOD_LEN = 10  # ticks per revisit-planning period

_VOCAB = (
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "theta", "kappa",
    "lambda", "sigma", "omega", "crawler", "spider", "robot", "index",
    "search", "engine", "query", "keyword", "page", "link", "anchor",
    "domain", "server", "client", "fetch", "parse", "token", "fresh",
    "stale", "update", "change", "revisit", "queue", "frontier", "polite",
    "delay", "worker", "thread", "graph", "node", "edge", "path", "root",
    "leaf", "depth", "breadth", "cycle",
)


class InvalidParams(ValueError):
    """Site generation parameters out of range."""


class TimeReversal(ValueError):
    """advance_to asked to move the simulation backwards."""


@dataclass
class SimPage:
    """One simulated page; `out_links` mixes internal paths and external URLs."""

    path: str
    out_links: list[str]
    change_prob: float
    version: int = 0
    modified_times: list[int] = field(default_factory=list)
    _stream: SplitMix64 = field(repr=False, default=None)  # type: ignore[assignment]


@dataclass
class SimSite:
    """A single-domain simulated site plus its change-process state."""

    domain: str
    pages: dict[str, SimPage]
    robots_text: str | None
    rng_seed: int
    tick: int = 0

    def url_of(self, path: str) -> NormalizedUrl:
        return NormalizedUrl(scheme="http", host=self.domain, port=None, path=path)


def generate_site(
    seed: int,
    n_pages: int,
    link_density: float,
    change_profile: list[float] | None = None,
    domain: str = "sim.test",
    robots_text: str | None = None,
) -> SimSite:
    """Build a pseudo-random site; identical inputs give identical sites.

    The structure stream (splitmix64 of `seed`) is consumed in a fixed
    order: section per page, spanning parent per page, the extra link
    endpoints, then one external-link draw per page. Page 0 is "/" and
    every page hangs off the spanning tree, so the whole site is
    reachable from the root. Page i takes change_profile[i mod len].
    """
    if n_pages < 1:
        raise InvalidParams(f"n_pages must be >= 1, got {n_pages}")
    if link_density < 0:
        raise InvalidParams(f"link_density must be >= 0, got {link_density}")
    profile = list(change_profile) if change_profile else [0.0]
    for p in profile:
        if not 0.0 <= p <= 1.0:
            raise InvalidParams(f"change probability out of [0, 1]: {p}")

    rng = SplitMix64(seed)
    paths = ["/"]
    for i in range(1, n_pages):
        section = SECTIONS[rng.next_u64() % len(SECTIONS)]
        paths.append(f"/{section}/p{i}")

    links: dict[str, list[str]] = {path: [] for path in paths}
    for i in range(1, n_pages):
        parent = rng.next_u64() % i
        links[paths[parent]].append(paths[i])
    if n_pages > 1:  # a single page has no internal link targets
        extra = max(0, round(n_pages * link_density) - (n_pages - 1))
        for _ in range(extra):
            src = rng.next_u64() % n_pages
            dst = rng.next_u64() % n_pages
            links[paths[src]].append(paths[dst])
    for i, path in enumerate(paths):
        if rng.next_u64() % EXTERNAL_EVERY == 0:
            links[path].append(f"http://offsite-{i % 3}.test/ext{i}")

    pages = {
        path: SimPage(
            path=path,
            out_links=links[path],
            change_prob=profile[i % len(profile)],
            _stream=SplitMix64((seed ^ fnv1a64(path.encode("utf-8"))) & MASK64),
        )
        for i, path in enumerate(paths)
    }
    return SimSite(domain=domain, pages=pages, robots_text=robots_text, rng_seed=seed)


def build_site(
    domain: str,
    links_by_path: dict[str, list[str]],
    robots_text: str | None = None,
    change_probs: dict[str, float] | None = None,
    seed: int = 0,
) -> SimSite:
    """Assemble a site with an explicit link structure.

    Handy for scripted scenarios where the exact graph matters; pages
    default to never changing.
    """
    probs = change_probs or {}
    pages = {
        path: SimPage(
            path=path,
            out_links=list(links),
            change_prob=probs.get(path, 0.0),
            _stream=SplitMix64((seed ^ fnv1a64(path.encode("utf-8"))) & MASK64),
        )
        for path, links in links_by_path.items()
    }
    return SimSite(domain=domain, pages=pages, robots_text=robots_text, rng_seed=seed)


def advance_to(site: SimSite, tick: int) -> SimSite:
    """Run the per-page change process up to `tick` (inclusive).

    Each page consumes exactly one draw from its own stream per tick,
    so the outcome does not depend on page iteration order.
    """
    if tick < site.tick:
        raise TimeReversal(f"cannot rewind from tick {site.tick} to {tick}")
    for page in site.pages.values():
        for t in range(site.tick + 1, tick + 1):
            if page._stream.next_unit() < page.change_prob:
                page.version += 1
                page.modified_times.append(t)
    site.tick = tick
    return site


def version_at(page: SimPage, tick: int) -> int:
    """Version visible to a fetch at `tick` (same-tick changes included)."""
    return bisect_right(page.modified_times, tick)


def page_body(site: SimSite, path: str, version: int) -> bytes:
    """Page bytes as a pure function of (domain, path, version)."""
    page = site.pages[path]
    rng = SplitMix64(fnv1a64(f"{site.domain}|{path}|v{version}".encode("utf-8")))
    words = " ".join(
        _VOCAB[rng.next_u64() % len(_VOCAB)] for _ in range(WORDS_PER_PAGE)
    )
    anchors = "\n".join(
        f'<a href="{target}">{target}</a>' for target in page.out_links
    )
    html = (
        f"<html><head><title>{site.domain}{path} v{version}</title></head>\n"
        f"<body>\n<p>{words}</p>\n{anchors}\n</body></html>\n"
    )
    return html.encode("utf-8")


def serve(site: SimSite, path: str, tick: int) -> FetchResult:
    """Serve `path` as it looked at `tick` (requires advance_to(site, tick)).

    "/robots.txt" serves the configured robots text or NOT_FOUND;
    unknown paths are NOT_FOUND.
    """
    if tick > site.tick:
        raise ValueError(
            f"tick {tick} not simulated yet (site is at {site.tick}); "
            "call advance_to first"
        )
    url = site.url_of(path)
    if path == "/robots.txt":
        if site.robots_text is None:
            return FetchResult(url, FetchStatus.NOT_FOUND, None, float(tick))
        return FetchResult(
            url, FetchStatus.OK, site.robots_text.encode("utf-8"), float(tick)
        )
    page = site.pages.get(path)
    if page is None:
        return FetchResult(url, FetchStatus.NOT_FOUND, None, float(tick))
    body = page_body(site, path, version_at(page, tick))
    return FetchResult(url, FetchStatus.OK, body, float(tick))


class SimWebSource(PageSource):
    """PageSource adapter over a SimSite; internally synchronized.

    Fetch times are mapped to ticks by truncation; the site is advanced
    lazily and never rewound, so concurrent workers are safe.
    """

    def __init__(self, site: SimSite) -> None:
        self.site = site
        self._lock = threading.Lock()

    def fetch(self, url: NormalizedUrl, at: float) -> FetchResult:
        tick = int(at)
        with self._lock:
            if url.host != self.site.domain:
                return FetchResult(url, FetchStatus.NETWORK_ERROR, None, at)
            if tick > self.site.tick:
                advance_to(self.site, tick)
            result = serve(self.site, url.path, tick)
        return dataclasses.replace(result, url=url, fetched_at=at)


# --- oracles -----------------------------------------------------------
#
# Written against the raw site structures, with no frontier and no fetch
# layer, so they can contradict the engine if it misbehaves.


def oracle_reachable(
    site: SimSite, robots: RobotsPolicy | None, agent: str
) -> set[str]:
    """Breadth-first closure from "/" over allowed internal links.

    Disallowed pages are neither counted nor expanded, matching the
    crawl rule that a denied URL is never fetched.
    """
    def allowed(path: str) -> bool:
        return decide_access(robots, agent, path).allowed

    reachable: set[str] = set()
    if "/" not in site.pages or not allowed("/"):
        return reachable
    queue: deque[str] = deque(["/"])
    reachable.add("/")
    while queue:
        path = queue.popleft()
        for target in site.pages[path].out_links:
            if not target.startswith("/"):
                continue  # external link; out-of-domain by construction
            if target in reachable or target not in site.pages:
                continue
            if allowed(target):
                reachable.add(target)
                queue.append(target)
    return reachable


def oracle_freshness(
    site: SimSite, crawl_times: dict[str, list[int]], eval_tick: int
) -> tuple[float, float]:
    """Mean freshness and age at `eval_tick` straight from the tick lists.

    A page is stale when some modification falls strictly between its
    last crawl and the evaluation instant; its age runs from the
    earliest such modification. A never-crawled page counts as crawled
    at tick 0 (the generated content is the known copy).
    """
    total_f = 0
    total_a = 0.0
    for path, page in site.pages.items():
        ticks = [t for t in crawl_times.get(path, []) if t <= eval_tick]
        last_crawl = max(ticks) if ticks else 0
        unsynced = [m for m in page.modified_times if last_crawl < m < eval_tick]
        if unsynced:
            total_a += eval_tick - unsynced[0]
        else:
            total_f += 1
    n = len(site.pages)
    return total_f / n, total_a / n


def page_state_at(
    site: SimSite, path: str, last_crawl_tick: int, eval_tick: int
) -> PageState:
    """PageState for the revisit metrics, built from sim ground truth.

    Convention: a crawl sees same-tick changes; an evaluation does not
    count a change landing at the evaluation instant itself (its age
    would be zero, so the page still counts as fresh at that instant).
    """
    page = site.pages[path]
    mods = page.modified_times
    crawled_version = bisect_right(mods, last_crawl_tick)
    unsynced = mods[crawled_version : bisect_left(mods, eval_tick)]
    if unsynced:
        live_version = bisect_left(mods, eval_tick)
        live_modified_at = float(unsynced[0])
    else:
        live_version = crawled_version
        synced = mods[:crawled_version]
        live_modified_at = float(synced[-1]) if synced else 0.0
    return PageState(
        doc_id=doc_id_of(site.url_of(path)),
        last_crawled_at=float(last_crawl_tick),
        crawled_hash=content_hash(page_body(site, path, crawled_version)),
        live_modified_at=live_modified_at,
        live_hash=content_hash(page_body(site, path, live_version)),
    )


# --- site spec files and the revisit simulation ------------------------


def load_site_spec(path: str | Path) -> SimSite:
    """Build a site from a JSON spec file.

    Schema: {"domain", "n_pages", "seed", "link_density",
    "change_profile": [floats], "robots": optional string}.
    """
    with open(path, encoding="utf-8") as fp:
        spec = json.load(fp)
    try:
        return generate_site(
            seed=spec["seed"],
            n_pages=spec["n_pages"],
            link_density=spec["link_density"],
            change_profile=spec.get("change_profile"),
            domain=spec["domain"],
            robots_text=spec.get("robots"),
        )
    except KeyError as exc:
        raise InvalidParams(f"site spec missing field {exc}") from None


def run_revisit_simulation(
    site: SimSite, policy: str, budget: int, ticks: int
) -> list[dict]:
    """Simulate a revisit policy and report freshness per period.

    Every page is crawled once at tick 0. Time then runs in periods of
    PERIOD_LEN ticks; each period gets `budget` revisits allocated by
    the chosen policy and spread evenly over the period's ticks. The
    proportional policy estimates change rates from the revisit history
    and falls back to uniform while every estimate is still zero.
    Returns one {policy, period, mean_F, mean_A} row per period.
    """
    if policy not in ("uniform", "proportional"):
        raise ValueError(f"unknown policy {policy!r}")
    if ticks < 1:
        raise ValueError("ticks must be >= 1")
    if budget < 0:
        raise ValueError("budget must be >= 0")

    paths = list(site.pages)
    ids = {path: doc_id_of(site.url_of(path)) for path in paths}
    path_of = {doc_id: path for path, doc_id in ids.items()}
    last_crawl = {path: 0 for path in paths}
    last_version = {path: 0 for path in paths}
    history: dict[str, list[tuple[float, bool]]] = {path: [] for path in paths}

    rows: list[dict] = []
    period = 0
    tick = 0
    while tick < ticks:
        period_start = tick + 1
        period_end = min(tick + PERIOD_LEN, ticks)
        length = period_end - period_start + 1

        plan = _plan_period(policy, ids, history, budget)
        schedule: dict[int, list[str]] = {}
        for doc_id, count in plan.counts.items():
            if count <= 0:
                continue
            path = path_of[doc_id]
            visit_ticks = {
                period_start + (j * length) // count for j in range(count)
            }
            for t in visit_ticks:  # >L visits collapse to one per tick
                schedule.setdefault(t, []).append(path)

        for t in range(period_start, period_end + 1):
            advance_to(site, t)
            for path in schedule.get(t, ()):
                version = version_at(site.pages[path], t)
                history[path].append((float(t), version != last_version[path]))
                last_version[path] = version
                last_crawl[path] = t

        states = [
            page_state_at(site, path, last_crawl[path], period_end)
            for path in paths
        ]
        mean_f, mean_a = collection_freshness(states, float(period_end))
        rows.append(
            {
                "policy": policy,
                "period": period,
                "mean_F": mean_f,
                "mean_A": mean_a,
            }
        )
        period += 1
        tick = period_end
    return rows


def _plan_period(
    policy: str,
    ids: dict[str, int],
    history: dict[str, list[tuple[float, bool]]],
    budget: int,
) -> RevisitPlan:
    doc_ids = sorted(ids.values())
    if policy == "uniform":
        return plan_uniform(doc_ids, budget)
    rates = {
        ids[path]: estimate_change_rate(h) if h else 0.0
        for path, h in history.items()
    }
    try:
        return plan_proportional(rates, budget)
    except AllRatesZero:
        return plan_uniform(doc_ids, budget)  # no signal yet; spread evenly
