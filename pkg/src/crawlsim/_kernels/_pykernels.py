"""Pure-Python kernels: FNV-1a hashing, splitmix64, HTML text scanning.

Reference implementation of the hot loops; `crawlsim._kernels` swaps in
the compiled twin when it is available. Both twins must agree bit for
bit, which the parity tests enforce.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF

FNV_OFFSET_BASIS = 14695981039346656037
FNV_PRIME = 1099511628211

_SM64_GAMMA = 0x9E3779B97F4A7C15
_SM64_MIX1 = 0xBF58476D1CE4E5B9
_SM64_MIX2 = 0x94D049BB133111EB


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash of a byte string."""
    h = FNV_OFFSET_BASIS
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & MASK64
    return h


class SplitMix64:
    """splitmix64 stream: 64-bit state, one output per state bump."""

    __slots__ = ("state",)

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _SM64_GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * _SM64_MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _SM64_MIX2) & MASK64
        return z ^ (z >> 31)

    def next_unit(self) -> float:
        """Uniform draw in [0, 1) with 53 mantissa bits; exact in binary64."""
        return (self.next_u64() >> 11) * 2.0**-53


def strip_markup(text: str) -> str:
    """Drop HTML markup from `text` in a single pass.

    Everything from ``<`` to the next ``>`` is replaced by one space, and
    the entire content of <script>/<style> elements is skipped. No
    entity decoding, no attribute parsing: this feeds the tokenizer, not
    a DOM.
    """
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        lt = text.find("<", i)
        if lt < 0:
            out.append(text[i:])
            break
        out.append(text[i:lt])
        close = text.find(">", lt + 1)
        if close < 0:
            break  # unterminated tag swallows the rest
        tag = text[lt + 1 : close]
        out.append(" ")
        i = close + 1
        name = tag.lstrip().lower()
        for raw in ("script", "style"):
            if (
                name.startswith(raw)
                and (len(name) == len(raw) or not name[len(raw)].isalnum())
                and not tag.rstrip().endswith("/")
            ):
                i = _skip_raw_text(text, i, raw)
                break
    return "".join(out)


def _skip_raw_text(text: str, start: int, element: str) -> int:
    """Return the index just past ``</element...>`` starting at `start`."""
    needle = "</" + element
    lowered = text.lower()
    at = lowered.find(needle, start)
    if at < 0:
        return len(text)
    close = text.find(">", at)
    return len(text) if close < 0 else close + 1


def split_alnum(text: str, min_len: int = 2) -> list[str]:
    """Split `text` into maximal alphanumeric runs of at least `min_len`."""
    tokens: list[str] = []
    start = -1
    for i, ch in enumerate(text):
        if ch.isalnum():
            if start < 0:
                start = i
        elif start >= 0:
            if i - start >= min_len:
                tokens.append(text[start:i])
            start = -1
    if start >= 0 and len(text) - start >= min_len:
        tokens.append(text[start:])
    return tokens
