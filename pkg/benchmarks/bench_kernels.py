#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python twins.

Usage:
    python benchmarks/bench_kernels.py [--repeat N]

Measures the three hot loops (FNV-1a hashing, splitmix64 draws, HTML
tokenization) on synthetic workloads sized like a mid-size crawl, and
prints per-op timings plus the speedup of the compiled extension.
"""

from __future__ import annotations

import argparse
import random
import time

from crawlsim._kernels import _pykernels

try:
    from crawlsim._kernels import _ckernels
except ImportError:
    _ckernels = None


def make_payloads():
    rng = random.Random(12345)
    urls = [
        f"http://bench.test/{rng.choice(['docs', 'img', 'news'])}/p{i}?v={rng.randint(0, 999)}".encode()
        for i in range(2000)
    ]
    words = ["crawl", "index", "fresh", "alpha", "delta", "queue", "robots"]
    pages = []
    for i in range(200):
        body = " ".join(rng.choice(words) for _ in range(600))
        links = "".join(f'<a href="/p{j}">p{j}</a>' for j in range(30))
        pages.append(
            f"<html><head><title>page {i}</title><script>var x = {i};</script>"
            f"</head><body><p>{body}</p>{links}</body></html>"
        )
    return urls, pages


def bench(label, fn, repeat):
    best = min(timed(fn) for _ in range(repeat))
    print(f"  {label:<28s} {best * 1000:8.2f} ms")
    return best


def timed(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def run_suite(mod, urls, pages, repeat):
    timings = {}

    def hash_urls():
        for u in urls:
            mod.fnv1a64(u)

    def draw_stream():
        rng = mod.SplitMix64(42)
        for _ in range(200_000):
            rng.next_unit()

    def tokenize_pages():
        for page in pages:
            mod.split_alnum(mod.strip_markup(page).lower())

    timings["fnv1a64 (2k urls)"] = bench("fnv1a64 (2k urls)", hash_urls, repeat)
    timings["splitmix64 (200k draws)"] = bench(
        "splitmix64 (200k draws)", draw_stream, repeat
    )
    timings["tokenize (200 pages)"] = bench(
        "tokenize (200 pages)", tokenize_pages, repeat
    )
    return timings


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    urls, pages = make_payloads()
    print("pure python:")
    pure = run_suite(_pykernels, urls, pages, args.repeat)

    if _ckernels is None:
        print("compiled extension not built; nothing to compare")
        return

    print("compiled:")
    compiled = run_suite(_ckernels, urls, pages, args.repeat)
    print("speedup (pure / compiled):")
    for label in pure:
        print(f"  {label:<28s} {pure[label] / compiled[label]:8.1f}x")


if __name__ == "__main__":
    main()
