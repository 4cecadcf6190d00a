"""CLI surface: commands, exit codes, and output streams."""

from __future__ import annotations

import json

import pytest

from crawlsim.cli import index_dump_path, main

SITE_SPEC = {
    "domain": "sim.test",
    "n_pages": 40,
    "seed": 42,
    "link_density": 2.0,
    "change_profile": [0.0, 0.2],
    "robots": "User-agent: *\nDisallow: /images/",
}


@pytest.fixture
def site_file(tmp_path):
    path = tmp_path / "site.json"
    path.write_text(json.dumps(SITE_SPEC))
    return path


@pytest.fixture
def robots_file(tmp_path):
    path = tmp_path / "robots.txt"
    path.write_text("User-agent: *\nDisallow: /images/\n")
    return path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRobotsCheck:
    def test_disallowed_with_rule(self, capsys, robots_file):
        code, out, _ = run(
            capsys,
            "robots-check", "--file", str(robots_file),
            "--agent", "AnyBot", "--path", "/images/x",
        )
        assert code == 0
        assert out.strip() == "Disallowed (Disallow /images/)"

    def test_allowed(self, capsys, robots_file):
        code, out, _ = run(
            capsys,
            "robots-check", "--file", str(robots_file),
            "--agent", "AnyBot", "--path", "/docs/",
        )
        assert code == 0
        assert out.strip() == "Allowed"

    def test_missing_file_exits_1(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            "robots-check", "--file", str(tmp_path / "absent.txt"),
            "--agent", "A", "--path", "/x",
        )
        assert code == 1
        assert "error:" in err

    def test_bad_path_exits_1(self, capsys, robots_file):
        code, _, err = run(
            capsys,
            "robots-check", "--file", str(robots_file),
            "--agent", "A", "--path", "no-slash",
        )
        assert code == 1
        assert "error:" in err


class TestCrawl:
    def test_sim_crawl_writes_report_and_index(self, capsys, tmp_path, site_file):
        out_file = tmp_path / "report.jsonl"
        code, _, err = run(
            capsys,
            "crawl", "--seed", "http://sim.test/", "--agent", "TestBot",
            "--source", "sim", "--site", str(site_file), "--out", str(out_file),
        )
        assert code == 0
        assert "visited" in err
        lines = out_file.read_text().splitlines()
        assert len(lines) > 1
        assert "summary" in json.loads(lines[-1])
        assert index_dump_path(out_file).exists()

    def test_two_single_worker_runs_byte_identical(self, capsys, tmp_path, site_file):
        outs = []
        for name in ("a.jsonl", "b.jsonl"):
            out_file = tmp_path / name
            code, _, _ = run(
                capsys,
                "crawl", "--seed", "http://sim.test/", "--agent", "TestBot",
                "--workers", "1", "--source", "sim", "--site", str(site_file),
                "--out", str(out_file),
            )
            assert code == 0
            outs.append(out_file.read_bytes())
        assert outs[0] == outs[1]

    def test_sim_requires_site(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            "crawl", "--seed", "http://sim.test/", "--agent", "T",
            "--source", "sim", "--out", str(tmp_path / "r.jsonl"),
        )
        assert code == 2
        assert "--site" in err

    def test_live_requires_max_pages(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            "crawl", "--seed", "http://127.0.0.1:1/", "--agent", "T",
            "--out", str(tmp_path / "r.jsonl"),
        )
        assert code == 2
        assert "--max-pages" in err

    def test_seed_disallowed_exits_1(self, capsys, tmp_path):
        spec = dict(SITE_SPEC, robots="User-agent: *\nDisallow: /")
        site = tmp_path / "deny.json"
        site.write_text(json.dumps(spec))
        code, _, err = run(
            capsys,
            "crawl", "--seed", "http://sim.test/", "--agent", "T",
            "--source", "sim", "--site", str(site),
            "--out", str(tmp_path / "r.jsonl"),
        )
        assert code == 1
        assert "disallowed" in err

    def test_unknown_flag_exits_2(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["crawl", "--seed", "http://x/", "--agent", "T",
                  "--out", str(tmp_path / "r"), "--frobnicate"])
        assert exc.value.code == 2


class TestSim:
    def test_rows_streamed_as_json_lines(self, capsys, site_file):
        code, out, _ = run(
            capsys,
            "sim", "--site", str(site_file), "--policy", "uniform",
            "--budget", "8", "--ticks", "25",
        )
        assert code == 0
        rows = [json.loads(line) for line in out.splitlines()]
        assert len(rows) == 3
        assert all(
            set(row) == {"policy", "period", "mean_F", "mean_A"} for row in rows
        )

    def test_both_policies_run(self, capsys, site_file):
        for policy in ("uniform", "proportional"):
            code, out, _ = run(
                capsys,
                "sim", "--site", str(site_file), "--policy", policy,
                "--budget", "5", "--ticks", "12",
            )
            assert code == 0
            assert all(json.loads(l)["policy"] == policy for l in out.splitlines())

    def test_invalid_policy_exits_2(self, site_file):
        with pytest.raises(SystemExit) as exc:
            main(["sim", "--site", str(site_file), "--policy", "eager",
                  "--budget", "5", "--ticks", "12"])
        assert exc.value.code == 2

    def test_missing_site_exits_1(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            "sim", "--site", str(tmp_path / "nope.json"), "--policy", "uniform",
            "--budget", "5", "--ticks", "12",
        )
        assert code == 1
        assert "error:" in err


class TestQuery:
    @pytest.fixture
    def index_file(self, capsys, tmp_path, site_file):
        out_file = tmp_path / "report.jsonl"
        code, _, _ = run(
            capsys,
            "crawl", "--seed", "http://sim.test/", "--agent", "T",
            "--source", "sim", "--site", str(site_file), "--out", str(out_file),
        )
        assert code == 0
        return index_dump_path(out_file)

    def test_ranked_results(self, capsys, index_file):
        code, out, _ = run(capsys, "query", "--index", str(index_file), "crawler")
        assert code == 0
        lines = out.splitlines()
        assert lines, "expected at least one hit on a vocabulary word"
        scores = []
        for line in lines:
            doc_id, score = line.split("\t")
            int(doc_id)
            scores.append(int(score))
        assert scores == sorted(scores, reverse=True)

    def test_unknown_term_empty_output(self, capsys, index_file):
        code, out, _ = run(
            capsys, "query", "--index", str(index_file), "zzzzmissing"
        )
        assert code == 0
        assert out == ""

    def test_vacuous_terms_exit_1(self, capsys, index_file):
        code, _, err = run(capsys, "query", "--index", str(index_file), "!", "?")
        assert code == 1
        assert "error:" in err

    def test_no_terms_is_usage_error(self, index_file):
        with pytest.raises(SystemExit) as exc:
            main(["query", "--index", str(index_file)])
        assert exc.value.code == 2

    def test_missing_index_exits_1(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "query", "--index", str(tmp_path / "none.jsonl"), "web"
        )
        assert code == 1
        assert "error:" in err
