"""Command-line entry point: crawl, robots-check, sim, and query.

Exit codes: 0 on success, 1 on domain errors (seed disallowed,
unreadable files, empty queries), 2 on usage errors. Data goes to
stdout or the requested files; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from crawlsim import engine, index, robots, simweb
from crawlsim.fetch import LiveSource, SimClock, SystemClock
from crawlsim.urls import UrlError, normalize_url


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (OSError, UrlError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crawlsim",
        description="Polite single-domain crawler and revisit-policy simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    crawl = sub.add_parser("crawl", help="run one crawl cycle")
    crawl.add_argument("--seed", required=True, help="seed URL (defines the domain)")
    crawl.add_argument("--agent", required=True, help="crawler user-agent token")
    crawl.add_argument("--workers", type=int, default=1)
    crawl.add_argument("--max-pages", type=int, default=None)
    crawl.add_argument("--source", choices=("live", "sim"), default="live")
    crawl.add_argument("--site", help="site spec JSON (required with --source sim)")
    crawl.add_argument("--out", required=True, help="report file (JSON lines)")
    crawl.set_defaults(handler=_cmd_crawl)

    check = sub.add_parser("robots-check", help="evaluate a robots.txt decision")
    check.add_argument("--file", required=True, help="robots.txt file")
    check.add_argument("--agent", required=True)
    check.add_argument("--path", required=True, help="request path, starts with /")
    check.set_defaults(handler=_cmd_robots_check)

    sim = sub.add_parser("sim", help="run a revisit-policy simulation")
    sim.add_argument("--site", required=True, help="site spec JSON")
    sim.add_argument("--policy", choices=("uniform", "proportional"), required=True)
    sim.add_argument("--budget", type=int, required=True, help="visits per period")
    sim.add_argument("--ticks", type=int, required=True)
    sim.set_defaults(handler=_cmd_sim)

    query = sub.add_parser("query", help="search an index dump")
    query.add_argument("--index", required=True, dest="index_file")
    query.add_argument("terms", nargs="+")
    query.set_defaults(handler=_cmd_query)

    return parser


def index_dump_path(report_path: str | Path) -> Path:
    """Index dump written next to the report: <report>.index.jsonl."""
    report_path = Path(report_path)
    return report_path.with_name(report_path.name + ".index.jsonl")


def _cmd_crawl(args: argparse.Namespace) -> int:
    seed = normalize_url(None, args.seed)
    config = engine.CrawlConfig(
        seed_url=seed,
        agent=args.agent,
        workers=args.workers,
        max_pages=args.max_pages,
    )
    if args.source == "sim":
        if not args.site:
            print("error: --source sim requires --site", file=sys.stderr)
            return 2
        site = simweb.load_site_spec(args.site)
        source = simweb.SimWebSource(site)
        clock = SimClock()
    else:
        if args.max_pages is None:
            print(
                "error: live crawls require an explicit --max-pages",
                file=sys.stderr,
            )
            return 2
        source = LiveSource(agent=args.agent)
        clock = SystemClock()

    report, word_index = engine.crawl_cycle(config, source, clock)

    with open(args.out, "w", encoding="utf-8") as fp:
        engine.write_report(report, fp)
    with open(index_dump_path(args.out), "w", encoding="utf-8") as fp:
        index.dump_index(word_index, fp)

    diagnostic = report.seed_diagnostic()
    if diagnostic is not None:
        print(f"error: {diagnostic}", file=sys.stderr)
        return 1
    print(
        f"visited {len(report.visited)} pages on {report.domain} "
        f"({len(report.errors)} errors, "
        f"{len(report.skipped_disallowed)} disallowed, "
        f"{len(report.skipped_out_of_domain)} off-domain)",
        file=sys.stderr,
    )
    return 0


def _cmd_robots_check(args: argparse.Namespace) -> int:
    with open(args.file, "rb") as fp:
        policy = robots.parse_robots(fp.read())
    decision = robots.decide_access(policy, args.agent, args.path)
    print(decision)
    return 0


def _cmd_sim(args: argparse.Namespace) -> int:
    site = simweb.load_site_spec(args.site)
    rows = simweb.run_revisit_simulation(
        site, policy=args.policy, budget=args.budget, ticks=args.ticks
    )
    for row in rows:
        print(json.dumps(row, separators=(",", ":")))
    return 0


def _cmd_query(args: argparse.Namespace) -> int:
    with open(args.index_file, encoding="utf-8") as fp:
        word_index = index.load_index(fp)
    results = word_index.lookup(args.terms)
    for doc_id, score in results:
        print(f"{doc_id}\t{score}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
