"""Robot Exclusion Protocol: parse robots.txt and answer access queries.

Parsing is total (any byte soup yields a policy); matching follows the
de-facto REP convention of longest-prefix wins with Allow breaking ties.
A missing policy, a fetch error, or an empty file all mean allow-all.
"""

from __future__ import annotations

from dataclasses import dataclass, field

MAX_CRAWL_DELAY = 3600.0  # hostile robots.txt must not starve the scheduler

_DELAY_FIELDS = ("crawl-delay", "crawler-delay")


class InvalidPath(ValueError):
    """Access query path does not start with '/'."""


@dataclass(frozen=True)
class Rule:
    """One Allow/Disallow line; the path prefix is kept verbatim."""

    allow: bool
    path_prefix: str

    @property
    def directive(self) -> str:
        return "Allow" if self.allow else "Disallow"

    def __str__(self) -> str:
        return f"{self.directive} {self.path_prefix}".rstrip()


@dataclass
class RuleGroup:
    """Rules for one or more agent tokens, with an optional crawl delay."""

    agents: list[str]
    rules: list[Rule] = field(default_factory=list)
    crawl_delay: float | None = None

    def matches_agent(self, agent: str) -> bool:
        token = agent.lower()
        return any(a.lower() == token for a in self.agents)

    @property
    def is_wildcard(self) -> bool:
        return any(a == "*" for a in self.agents)


@dataclass
class RobotsPolicy:
    """Ordered rule groups parsed from one robots.txt file."""

    groups: list[RuleGroup] = field(default_factory=list)

    def group_for(self, agent: str) -> RuleGroup | None:
        """First group naming `agent` exactly, else the first "*" group."""
        for group in self.groups:
            if group.matches_agent(agent):
                return group
        for group in self.groups:
            if group.is_wildcard:
                return group
        return None


@dataclass(frozen=True)
class AccessDecision:
    """Outcome of an access query: verdict plus the rule that decided it."""

    allowed: bool
    matched_rule: Rule | None = None
    policy_present: bool = True

    def __str__(self) -> str:
        verdict = "Allowed" if self.allowed else "Disallowed"
        if self.matched_rule is None:
            return verdict
        return f"{verdict} ({self.matched_rule})"


def parse_robots(data: bytes | str) -> RobotsPolicy:
    """Parse robots.txt content into a policy.

    Lines are split on LF with an optional preceding CR stripped; ``#``
    starts a comment; field names are case-insensitive; unknown fields
    and lines without a colon are skipped. Consecutive User-agent lines
    accumulate agents for one group until a body line (rule or delay)
    closes the accumulation.
    """
    if isinstance(data, bytes):
        text = data.decode("utf-8", errors="replace")
    else:
        text = data

    policy = RobotsPolicy()
    current: RuleGroup | None = None
    collecting_agents = False

    for raw_line in text.split("\n"):
        line = raw_line.rstrip("\r")
        line = line.split("#", 1)[0].strip()
        if not line or ":" not in line:
            continue
        name, _, value = line.partition(":")
        name = name.strip().lower()
        value = value.strip()

        if name == "user-agent":
            if not value:
                continue
            if current is None or not collecting_agents:
                current = RuleGroup(agents=[value])
                policy.groups.append(current)
                collecting_agents = True
            else:
                current.agents.append(value)
        elif name in ("allow", "disallow"):
            if current is None:
                continue  # rule before any User-agent line
            collecting_agents = False
            current.rules.append(Rule(allow=(name == "allow"), path_prefix=value))
        elif name in _DELAY_FIELDS:
            if current is None:
                continue
            collecting_agents = False
            delay = _parse_delay(value)
            if delay is not None:
                current.crawl_delay = delay

    return policy


def _parse_delay(value: str) -> float | None:
    try:
        delay = float(value)
    except ValueError:
        return None
    if delay < 0 or delay != delay or delay == float("inf"):
        return None
    return min(delay, MAX_CRAWL_DELAY)


def serialize_policy(policy: RobotsPolicy) -> str:
    """Render a policy back to robots.txt text in canonical field order."""
    lines: list[str] = []
    for group in policy.groups:
        for agent in group.agents:
            lines.append(f"User-agent: {agent}")
        for rule in group.rules:
            lines.append(f"{rule.directive}: {rule.path_prefix}")
        if group.crawl_delay is not None:
            lines.append(f"Crawl-delay: {group.crawl_delay!r}")
        lines.append("")
    return "\n".join(lines)


def decide_access(
    policy: RobotsPolicy | None, agent: str, path: str
) -> AccessDecision:
    """Decide whether `agent` may fetch `path` under `policy`.

    No policy means free access. Otherwise the group is chosen by exact
    case-insensitive agent token, falling back to "*"; within the group
    the longest matching prefix wins and Allow wins length ties. An
    empty prefix matches nothing.
    """
    if not path.startswith("/"):
        raise InvalidPath(f"path must start with '/': {path!r}")
    if policy is None:
        return AccessDecision(allowed=True, policy_present=False)

    group = policy.group_for(agent)
    if group is None:
        return AccessDecision(allowed=True)

    best: Rule | None = None
    for rule in group.rules:
        if not rule.path_prefix or not path.startswith(rule.path_prefix):
            continue
        if best is None or len(rule.path_prefix) > len(best.path_prefix):
            best = rule
        elif len(rule.path_prefix) == len(best.path_prefix) and rule.allow:
            best = rule
    if best is None:
        return AccessDecision(allowed=True)
    return AccessDecision(allowed=best.allow, matched_rule=best)


def crawl_delay_for(policy: RobotsPolicy | None, agent: str) -> float | None:
    """Crawl delay of the group that governs `agent`, if any."""
    if policy is None:
        return None
    group = policy.group_for(agent)
    return None if group is None else group.crawl_delay
