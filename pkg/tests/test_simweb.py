"""Simulated-web determinism, the change process, and the oracles."""

from __future__ import annotations

import json

import pytest

from crawlsim.fetch import FetchStatus
from crawlsim.index import extract_links, tokenize
from crawlsim.robots import parse_robots
from crawlsim.simweb import (
    InvalidParams,
    TimeReversal,
    advance_to,
    build_site,
    generate_site,
    load_site_spec,
    oracle_freshness,
    oracle_reachable,
    page_state_at,
    run_revisit_simulation,
    serve,
    version_at,
)
from crawlsim.urls import normalize_url
from oracles import SplitMix64Ref, bfs_closure, fnv1a64_ref


class TestGenerateSite:
    def test_same_seed_same_site(self):
        a = generate_site(seed=9, n_pages=40, link_density=2.5, change_profile=[0.1])
        b = generate_site(seed=9, n_pages=40, link_density=2.5, change_profile=[0.1])
        assert list(a.pages) == list(b.pages)
        for path in a.pages:
            assert a.pages[path].out_links == b.pages[path].out_links
            assert a.pages[path].change_prob == b.pages[path].change_prob

    def test_matches_reference_golden(self, golden):
        fixture = golden("site_seed42_n5_d2.json")
        site = generate_site(seed=42, n_pages=5, link_density=2.0)
        assert list(site.pages) == fixture["paths"]
        assert {p: page.out_links for p, page in site.pages.items()} == fixture["links"]

    def test_single_page_site(self):
        site = generate_site(seed=3, n_pages=1, link_density=2.0)
        assert list(site.pages) == ["/"]
        assert all(not l.startswith("/") for l in site.pages["/"].out_links)

    def test_root_reaches_every_page(self):
        site = generate_site(seed=11, n_pages=60, link_density=1.0)
        links = {p: page.out_links for p, page in site.pages.items()}
        assert bfs_closure(links, "/") == set(site.pages)

    def test_change_profile_cycled(self):
        site = generate_site(
            seed=5, n_pages=5, link_density=0.0, change_profile=[0.1, 0.9]
        )
        probs = [page.change_prob for page in site.pages.values()]
        assert probs == [0.1, 0.9, 0.1, 0.9, 0.1]

    def test_invalid_params(self):
        with pytest.raises(InvalidParams):
            generate_site(seed=1, n_pages=0, link_density=1.0)
        with pytest.raises(InvalidParams):
            generate_site(seed=1, n_pages=5, link_density=-1.0)
        with pytest.raises(InvalidParams):
            generate_site(seed=1, n_pages=5, link_density=1.0, change_profile=[1.5])


class TestAdvance:
    def test_certain_change_every_tick(self):
        site = generate_site(seed=1, n_pages=2, link_density=0.0, change_profile=[1.0])
        advance_to(site, 3)
        for page in site.pages.values():
            assert page.version == 3
            assert page.modified_times == [1, 2, 3]

    def test_never_changes(self):
        site = generate_site(seed=1, n_pages=2, link_density=0.0, change_profile=[0.0])
        advance_to(site, 100)
        for page in site.pages.values():
            assert page.version == 0
            assert page.modified_times == []

    def test_matches_reference_stream_golden(self, golden):
        fixture = golden("changes_seed7.json")
        site = generate_site(
            seed=fixture["seed"],
            n_pages=5,
            link_density=2.0,
            change_profile=[fixture["change_prob"]],
        )
        assert fixture["path"] in site.pages
        advance_to(site, fixture["ticks"])
        assert site.pages[fixture["path"]].modified_times == fixture["modified_ticks"]

    def test_time_reversal_rejected(self):
        site = generate_site(seed=1, n_pages=2, link_density=0.0)
        advance_to(site, 5)
        with pytest.raises(TimeReversal):
            advance_to(site, 4)

    def test_advance_is_incremental(self):
        one = generate_site(seed=8, n_pages=4, link_density=0.0, change_profile=[0.5])
        two = generate_site(seed=8, n_pages=4, link_density=0.0, change_profile=[0.5])
        advance_to(one, 30)
        for t in range(1, 31):
            advance_to(two, t)
        for path in one.pages:
            assert one.pages[path].modified_times == two.pages[path].modified_times


class TestServe:
    def test_robots_absent_not_found(self):
        site = generate_site(seed=1, n_pages=2, link_density=0.0)
        assert serve(site, "/robots.txt", 0).status is FetchStatus.NOT_FOUND

    def test_robots_text_served(self):
        site = generate_site(
            seed=1, n_pages=2, link_density=0.0, robots_text="User-agent: *\nDisallow:"
        )
        result = serve(site, "/robots.txt", 0)
        assert result.status is FetchStatus.OK
        assert result.body == b"User-agent: *\nDisallow:"

    def test_unknown_path_not_found(self):
        site = generate_site(seed=1, n_pages=2, link_density=0.0)
        assert serve(site, "/nope", 0).status is FetchStatus.NOT_FOUND

    def test_body_embeds_out_links_in_order(self):
        site = build_site(
            "sim.test", {"/": ["/a", "/b", "http://off.site/x"], "/a": [], "/b": []}
        )
        body = serve(site, "/", 0).body
        base = normalize_url(None, "http://sim.test/")
        assert [str(u) for u in extract_links(body, base)] == [
            "http://sim.test/a",
            "http://sim.test/b",
            "http://off.site/x",
        ]

    def test_body_changes_with_version(self):
        site = generate_site(seed=2, n_pages=2, link_density=0.0, change_profile=[1.0])
        before = serve(site, "/", 0).body
        advance_to(site, 1)
        after = serve(site, "/", 1).body
        assert before != after
        # earlier versions remain replayable
        assert serve(site, "/", 0).body == before

    def test_serving_future_tick_requires_advance(self):
        site = generate_site(seed=2, n_pages=2, link_density=0.0)
        with pytest.raises(ValueError):
            serve(site, "/", 3)

    def test_page_tokens_nonempty(self):
        site = generate_site(seed=2, n_pages=2, link_density=1.0)
        assert len(tokenize(serve(site, "/", 0).body)) > 10


class TestOracleReachable:
    def test_plain_chain(self):
        site = build_site("sim.test", {"/": ["/a"], "/a": ["/b"], "/b": []})
        assert oracle_reachable(site, None, "Bot") == {"/", "/a", "/b"}

    def test_disallowed_subtree_excluded(self):
        site = build_site(
            "sim.test", {"/": ["/a", "/images/pic"], "/a": [], "/images/pic": []}
        )
        policy = parse_robots(b"User-agent: *\nDisallow: /images/")
        assert oracle_reachable(site, policy, "Bot") == {"/", "/a"}

    def test_page_behind_disallowed_page_excluded(self):
        site = build_site(
            "sim.test",
            {"/": ["/gate"], "/gate": ["/hidden"], "/hidden": []},
        )
        policy = parse_robots(b"User-agent: *\nDisallow: /gate")
        assert oracle_reachable(site, policy, "Bot") == {"/"}

    def test_disallowed_root_empty(self):
        site = build_site("sim.test", {"/": ["/a"], "/a": []})
        policy = parse_robots(b"User-agent: *\nDisallow: /")
        assert oracle_reachable(site, policy, "Bot") == set()

    def test_no_robots_equals_plain_bfs(self):
        site = generate_site(seed=13, n_pages=50, link_density=2.0)
        links = {p: page.out_links for p, page in site.pages.items()}
        assert oracle_reachable(site, None, "Bot") == bfs_closure(links, "/")


class TestOracleFreshness:
    def test_crawled_after_last_modification_fresh(self):
        site = build_site("sim.test", {"/": []}, change_probs={"/": 0.0})
        site.pages["/"].modified_times = [2, 4]
        site.pages["/"].version = 2
        site.tick = 10
        assert oracle_freshness(site, {"/": [5]}, 9) == (1.0, 0.0)

    def test_fixture_modified5_crawled3_eval9(self):
        site = build_site("sim.test", {"/": []})
        site.pages["/"].modified_times = [5]
        site.pages["/"].version = 1
        site.tick = 10
        assert oracle_freshness(site, {"/": [3]}, 9) == (0.0, 4.0)

    def test_empty_modification_history_always_fresh(self):
        site = build_site("sim.test", {"/": []})
        site.tick = 50
        for t in (0, 10, 50):
            assert oracle_freshness(site, {}, t) == (1.0, 0.0)

    def test_agrees_with_page_state_metrics(self):
        from crawlsim.revisit import collection_freshness

        site = generate_site(
            seed=21, n_pages=12, link_density=1.0, change_profile=[0.0, 0.4, 0.9]
        )
        advance_to(site, 40)
        crawl_times = {
            path: [i % 17, 17 + i % 13] for i, path in enumerate(site.pages)
        }
        eval_tick = 40
        states = [
            page_state_at(site, path, max(t for t in crawl_times[path]), eval_tick)
            for path in site.pages
        ]
        assert collection_freshness(states, float(eval_tick)) == oracle_freshness(
            site, crawl_times, eval_tick
        )


class TestPageStateConventions:
    def test_crawl_sees_same_tick_change(self):
        site = build_site("sim.test", {"/": []})
        site.pages["/"].modified_times = [5]
        site.pages["/"].version = 1
        site.tick = 10
        s = page_state_at(site, "/", last_crawl_tick=5, eval_tick=9)
        assert s.crawled_hash == s.live_hash  # crawl at 5 picked up the change

    def test_change_at_eval_instant_not_counted(self):
        site = build_site("sim.test", {"/": []})
        site.pages["/"].modified_times = [9]
        site.pages["/"].version = 1
        site.tick = 10
        s = page_state_at(site, "/", last_crawl_tick=3, eval_tick=9)
        assert s.crawled_hash == s.live_hash
        stale = page_state_at(site, "/", last_crawl_tick=3, eval_tick=10)
        assert stale.crawled_hash != stale.live_hash
        assert stale.live_modified_at == 9.0

    def test_version_at_is_inclusive(self):
        site = build_site("sim.test", {"/": []})
        site.pages["/"].modified_times = [3, 7]
        site.pages["/"].version = 2
        assert version_at(site.pages["/"], 2) == 0
        assert version_at(site.pages["/"], 3) == 1
        assert version_at(site.pages["/"], 7) == 2


class TestSiteSpec:
    def test_load_and_generate(self, tmp_path):
        spec = {
            "domain": "spec.test",
            "n_pages": 12,
            "seed": 99,
            "link_density": 1.5,
            "change_profile": [0.0, 0.3],
            "robots": "User-agent: *\nDisallow: /data/",
        }
        path = tmp_path / "site.json"
        path.write_text(json.dumps(spec))
        site = load_site_spec(path)
        assert site.domain == "spec.test"
        assert len(site.pages) == 12
        assert site.robots_text == spec["robots"]
        twin = generate_site(
            seed=99, n_pages=12, link_density=1.5, change_profile=[0.0, 0.3]
        )
        assert list(site.pages) == list(twin.pages)

    def test_missing_field_rejected(self, tmp_path):
        path = tmp_path / "site.json"
        path.write_text(json.dumps({"domain": "x.test", "seed": 1}))
        with pytest.raises(InvalidParams):
            load_site_spec(path)


class TestRevisitSimulation:
    def test_row_schema_and_period_count(self):
        site = generate_site(
            seed=17, n_pages=15, link_density=1.0, change_profile=[0.0, 0.2]
        )
        rows = run_revisit_simulation(site, "uniform", budget=8, ticks=35)
        assert len(rows) == 4  # 10+10+10+5 ticks
        for i, row in enumerate(rows):
            assert row["policy"] == "uniform"
            assert row["period"] == i
            assert 0.0 <= row["mean_F"] <= 1.0
            assert row["mean_A"] >= 0.0

    def test_deterministic_across_runs(self):
        def run(policy):
            site = generate_site(
                seed=17, n_pages=15, link_density=1.0, change_profile=[0.1, 0.6]
            )
            return run_revisit_simulation(site, policy, budget=6, ticks=30)

        assert run("uniform") == run("uniform")
        assert run("proportional") == run("proportional")

    def test_static_site_stays_fresh(self):
        site = generate_site(seed=4, n_pages=8, link_density=1.0, change_profile=[0.0])
        rows = run_revisit_simulation(site, "uniform", budget=4, ticks=20)
        assert all(row["mean_F"] == 1.0 and row["mean_A"] == 0.0 for row in rows)

    def test_unknown_policy_rejected(self):
        site = generate_site(seed=4, n_pages=8, link_density=1.0)
        with pytest.raises(ValueError):
            run_revisit_simulation(site, "aggressive", budget=4, ticks=20)
