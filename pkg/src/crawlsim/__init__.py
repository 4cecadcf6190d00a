"""crawlsim: a polite single-domain web crawler and revisit simulator.

The pieces mirror a classic crawler pipeline: robots.txt policy
(`robots`), URL canonicalization and the frontier (`urls`), retrieval
with politeness (`fetch`), tokenizing and inverted indexing (`index`),
the crawl cycle itself (`engine`), freshness metrics and revisit
planning (`revisit`), and a fully deterministic simulated web to test
it all against (`simweb`).
"""

from crawlsim._kernels import BACKEND as KERNEL_BACKEND
from crawlsim.engine import CrawlConfig, CrawlReport, crawl_cycle
from crawlsim.fetch import (
    FetchResult,
    FetchStatus,
    LiveSource,
    PageSource,
    PolitenessGate,
    SimClock,
    SystemClock,
)
from crawlsim.index import PageSnapshot, WordIndex, extract_links, tokenize
from crawlsim.revisit import (
    PageState,
    RevisitPlan,
    age_at,
    collection_freshness,
    estimate_change_rate,
    freshness_at,
    plan_proportional,
    plan_uniform,
)
from crawlsim.robots import (
    AccessDecision,
    RobotsPolicy,
    crawl_delay_for,
    decide_access,
    parse_robots,
)
from crawlsim.simweb import (
    SimSite,
    SimWebSource,
    advance_to,
    generate_site,
    load_site_spec,
    oracle_freshness,
    oracle_reachable,
    serve,
)
from crawlsim.urls import (
    DocId,
    Frontier,
    NormalizedUrl,
    doc_id_of,
    in_domain,
    normalize_url,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "CrawlConfig",
    "CrawlReport",
    "crawl_cycle",
    "FetchResult",
    "FetchStatus",
    "LiveSource",
    "PageSource",
    "PolitenessGate",
    "SimClock",
    "SystemClock",
    "PageSnapshot",
    "WordIndex",
    "extract_links",
    "tokenize",
    "PageState",
    "RevisitPlan",
    "age_at",
    "collection_freshness",
    "estimate_change_rate",
    "freshness_at",
    "plan_proportional",
    "plan_uniform",
    "AccessDecision",
    "RobotsPolicy",
    "crawl_delay_for",
    "decide_access",
    "parse_robots",
    "SimSite",
    "SimWebSource",
    "advance_to",
    "generate_site",
    "load_site_spec",
    "oracle_freshness",
    "oracle_reachable",
    "serve",
    "DocId",
    "Frontier",
    "NormalizedUrl",
    "doc_id_of",
    "in_domain",
    "normalize_url",
]
