"""Freshness and age metrics plus uniform/proportional revisit planning.

Freshness follows the "local copy is up to date" reading: a page is
fresh at time t when the crawler's stored content still matches the
live content. Age is the time since the earliest live modification the
crawler has not yet picked up, and is zero exactly when fresh.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from crawlsim.urls import DocId


class EmptyCollection(ValueError):
    """Freshness asked over zero pages."""


class NoHistory(ValueError):
    """Change-rate estimate asked with zero observations."""


class NoPages(ValueError):
    """Revisit plan asked for zero pages."""


class AllRatesZero(ValueError):
    """Proportional plan asked with every change rate zero."""


@dataclass(frozen=True)
class PageState:
    """Crawler-side and live-side view of one page at evaluation time.

    `live_modified_at` is the modification timestamp age is measured
    from: the simulator records the earliest change after the last
    crawl exactly, while a live adapter can only approximate it with
    the most recent known modification.
    """

    doc_id: DocId
    last_crawled_at: float
    crawled_hash: int
    live_modified_at: float
    live_hash: int


@dataclass(frozen=True)
class FreshnessSample:
    """One (t, F, A) measurement; F = 1 exactly when A = 0."""

    t: float
    freshness: int
    age: float

    def __post_init__(self) -> None:
        if (self.freshness == 1) != (self.age == 0):
            raise ValueError(f"F=1 must coincide with A=0: {self}")


def freshness_at(state: PageState, t: float) -> int:
    """1 when the crawled copy still matches the live content, else 0."""
    if t < state.last_crawled_at:
        raise ValueError("evaluation time precedes the last crawl")
    return 1 if state.crawled_hash == state.live_hash else 0


def age_at(state: PageState, t: float) -> float:
    """Time since the earliest unsynchronized modification; 0 when fresh."""
    if freshness_at(state, t) == 1:
        return 0.0
    return t - state.live_modified_at


def sample_at(state: PageState, t: float) -> FreshnessSample:
    return FreshnessSample(t=t, freshness=freshness_at(state, t), age=age_at(state, t))


def collection_freshness(
    states: list[PageState], t: float
) -> tuple[float, float]:
    """Mean freshness and mean age over a page collection at time t."""
    if not states:
        raise EmptyCollection("no pages to evaluate")
    total_f = 0
    total_a = 0.0
    for state in states:
        total_f += freshness_at(state, t)
        total_a += age_at(state, t)
    n = len(states)
    return total_f / n, total_a / n


def estimate_change_rate(history: list[tuple[float, bool]]) -> float:
    """Fraction of revisits that found changed content, in [0, 1]."""
    if not history:
        raise NoHistory("no revisit observations")
    changed = sum(1 for _, did_change in history if did_change)
    return changed / len(history)


@dataclass(frozen=True)
class RevisitPlan:
    """Integer visits per page for one period; counts sum to the budget."""

    counts: dict[DocId, int]
    period_budget: int

    def __post_init__(self) -> None:
        total = sum(self.counts.values())
        if total != self.period_budget:
            raise ValueError(
                f"plan allocates {total} visits against budget {self.period_budget}"
            )


def plan_uniform(pages: list[DocId], budget: int) -> RevisitPlan:
    """Equal visit counts regardless of change rate.

    Each page gets floor(budget/n); the remainder goes to the first
    (budget mod n) pages in ascending doc_id order.
    """
    if not pages:
        raise NoPages("no pages to plan for")
    if budget < 0:
        raise ValueError("budget must be >= 0")
    ordered = sorted(pages)
    base, extra = divmod(budget, len(ordered))
    counts = {
        doc_id: base + (1 if i < extra else 0) for i, doc_id in enumerate(ordered)
    }
    return RevisitPlan(counts=counts, period_budget=budget)


def plan_proportional(rates: dict[DocId, float], budget: int) -> RevisitPlan:
    """Visit counts proportional to change rate, budget-exact.

    Real shares budget * rate/sum(rates) are integerized by largest
    remainder with ties broken by ascending doc_id. Shares are computed
    in exact rational arithmetic so the allocation is invariant under
    exact rescaling of all rates.
    """
    if not rates:
        raise NoPages("no pages to plan for")
    if budget < 0:
        raise ValueError("budget must be >= 0")
    for doc_id, rate in rates.items():
        if rate < 0:
            raise ValueError(f"negative change rate for doc {doc_id}: {rate}")
    total = Fraction(0)
    exact: dict[DocId, Fraction] = {}
    for doc_id, rate in rates.items():
        exact[doc_id] = Fraction(rate)
        total += exact[doc_id]
    if total == 0:
        raise AllRatesZero("every change rate is zero")

    shares = {doc_id: budget * f / total for doc_id, f in exact.items()}
    counts = {doc_id: int(share) for doc_id, share in shares.items()}
    leftover = budget - sum(counts.values())
    by_remainder = sorted(
        shares, key=lambda doc_id: (counts[doc_id] - shares[doc_id], doc_id)
    )
    for doc_id in by_remainder[:leftover]:
        counts[doc_id] += 1
    return RevisitPlan(counts=counts, period_budget=budget)
