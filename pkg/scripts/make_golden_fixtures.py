#!/usr/bin/env python3
"""Standalone reference generator for the golden test fixtures.

Deliberately self-contained: this script reimplements the 64-bit FNV-1a
hash and the splitmix64 generator from their published definitions and
must never import crawlsim. Tests compare package output against the
files this script writes, so keeping the two code paths separate is the
point.

Usage:
    python scripts/make_golden_fixtures.py [outdir]

Writes JSON fixtures into <outdir> (default tests/golden/).
"""

import json
import sys
from pathlib import Path

MASK64 = 0xFFFFFFFFFFFFFFFF

# --- FNV-1a, 64-bit (offset basis / prime per the published constants) ---

FNV_OFFSET = 14695981039346656037
FNV_PRIME = 1099511628211


def fnv1a64_ref(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & MASK64
    return h


# --- splitmix64 (state += golden gamma; published finalizer) ---


class SplitMix64Ref:
    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def next_unit(self) -> float:
        # 53-bit mantissa draw in [0, 1); exact in binary64.
        return (self.next_u64() >> 11) * 2.0**-53


# --- simulated-site recipe, mirrored from the package design notes ---
#
# Structure stream: SplitMix64(seed), consumed in this exact order:
#   1. per page i in 1..n-1: one draw -> section index
#   2. per page i in 1..n-1: one draw -> spanning parent j in [0, i)
#   3. per extra link: two draws -> (source, target) page indices
#   4. per page i in 0..n-1: one draw -> external link when draw % 16 == 0
# Page-change streams: SplitMix64(seed XOR fnv1a64(path)), one unit draw
# per tick per page; a tick modifies the page when draw < change_prob.

SECTIONS = ("docs", "images", "news", "data", "blog")
EXTERNAL_EVERY = 16


def site_paths_and_links(seed: int, n_pages: int, link_density: float):
    rng = SplitMix64Ref(seed)
    paths = ["/"]
    for i in range(1, n_pages):
        section = SECTIONS[rng.next_u64() % len(SECTIONS)]
        paths.append(f"/{section}/p{i}")
    links = {path: [] for path in paths}
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
    return paths, links


def change_ticks(seed: int, path: str, change_prob: float, ticks: int):
    rng = SplitMix64Ref((seed ^ fnv1a64_ref(path.encode("utf-8"))) & MASK64)
    return [t for t in range(1, ticks + 1) if rng.next_unit() < change_prob]


def main() -> None:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/golden")
    outdir.mkdir(parents=True, exist_ok=True)

    fnv_fixture = {
        "http://example.com/": fnv1a64_ref(b"http://example.com/"),
        "http://e.com/a": fnv1a64_ref(b"http://e.com/a"),
        "http://e.com/b": fnv1a64_ref(b"http://e.com/b"),
        "": fnv1a64_ref(b""),
        "hello": fnv1a64_ref(b"hello"),
    }
    (outdir / "fnv1a64.json").write_text(json.dumps(fnv_fixture, indent=2) + "\n")

    sm_fixture = {
        "seed_0_first_8": [SplitMix64Ref(0).next_u64() for _ in range(1)]
        + [None] * 0,
    }
    rng = SplitMix64Ref(0)
    sm_fixture["seed_0_first_8"] = [rng.next_u64() for _ in range(8)]
    rng = SplitMix64Ref(42)
    sm_fixture["seed_42_first_8"] = [rng.next_u64() for _ in range(8)]
    rng = SplitMix64Ref(0x123456789ABCDEF)
    sm_fixture["seed_0x123456789abcdef_first_4"] = [rng.next_u64() for _ in range(4)]
    (outdir / "splitmix64.json").write_text(json.dumps(sm_fixture, indent=2) + "\n")

    paths, links = site_paths_and_links(seed=42, n_pages=5, link_density=2.0)
    site_fixture = {"seed": 42, "n_pages": 5, "link_density": 2.0,
                    "paths": paths, "links": links}
    (outdir / "site_seed42_n5_d2.json").write_text(
        json.dumps(site_fixture, indent=2) + "\n")

    big_paths, big_links = site_paths_and_links(seed=42, n_pages=200,
                                                link_density=3.0)
    big_fixture = {"seed": 42, "n_pages": 200, "link_density": 3.0,
                   "paths": big_paths, "links": big_links}
    (outdir / "site_seed42_n200_d3.json").write_text(
        json.dumps(big_fixture, indent=2) + "\n")

    # change fixture targets a path that really exists in the seed-7 site
    seed7_paths, _ = site_paths_and_links(seed=7, n_pages=5, link_density=2.0)
    target = seed7_paths[1]
    changes = {
        "seed": 7,
        "path": target,
        "change_prob": 0.5,
        "ticks": 100,
        "modified_ticks": change_ticks(7, target, 0.5, 100),
    }
    (outdir / "changes_seed7.json").write_text(json.dumps(changes, indent=2) + "\n")

    print(f"wrote fixtures to {outdir}/")
    print("fnv1a64('http://example.com/') =", fnv_fixture["http://example.com/"])
    print("splitmix64(0) first =", sm_fixture["seed_0_first_8"][0],
          hex(sm_fixture["seed_0_first_8"][0]))
    n_external = sum(1 for targets in big_links.values()
                     for t in targets if t.startswith("http://"))
    n_images = sum(1 for p in big_paths if p.startswith("/images/"))
    print(f"200-page site: {n_external} external links, "
          f"{n_images} pages under /images/")


if __name__ == "__main__":
    main()
