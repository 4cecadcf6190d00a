# cython: boundscheck=False, wraparound=False
"""Compiled twin of ``_pykernels``; must agree with it bit for bit."""

from libc.stdint cimport uint64_t

MASK64 = 0xFFFFFFFFFFFFFFFF
FNV_OFFSET_BASIS = 14695981039346656037
FNV_PRIME = 1099511628211

cdef uint64_t _FNV_OFFSET = 14695981039346656037ULL
cdef uint64_t _FNV_PRIME = 1099511628211ULL
cdef uint64_t _SM64_GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t _SM64_MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t _SM64_MIX2 = 0x94D049BB133111EBULL


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash of a byte string."""
    cdef const unsigned char[:] view = data
    cdef uint64_t h = _FNV_OFFSET
    cdef Py_ssize_t i
    for i in range(view.shape[0]):
        h = (h ^ view[i]) * _FNV_PRIME
    return h


cdef class SplitMix64:
    """splitmix64 stream: 64-bit state, one output per state bump."""

    cdef public uint64_t state

    def __init__(self, seed):
        self.state = <uint64_t> (seed & 0xFFFFFFFFFFFFFFFF)

    cpdef uint64_t next_u64(self):
        cdef uint64_t z
        self.state += _SM64_GAMMA
        z = self.state
        z = (z ^ (z >> 30)) * _SM64_MIX1
        z = (z ^ (z >> 27)) * _SM64_MIX2
        return z ^ (z >> 31)

    def next_unit(self) -> float:
        """Uniform draw in [0, 1) with 53 mantissa bits; exact in binary64."""
        return <double> (self.next_u64() >> 11) * (2.0 ** -53)


def strip_markup(text: str) -> str:
    """Drop HTML markup from `text` in a single pass.

    Everything from ``<`` to the next ``>`` is replaced by one space, and
    the entire content of <script>/<style> elements is skipped.
    """
    cdef list out = []
    cdef Py_ssize_t i = 0, lt, close
    cdef Py_ssize_t n = len(text)
    cdef str tag, name, raw
    while i < n:
        lt = text.find("<", i)
        if lt < 0:
            out.append(text[i:])
            break
        out.append(text[i:lt])
        close = text.find(">", lt + 1)
        if close < 0:
            break  # unterminated tag swallows the rest
        tag = text[lt + 1:close]
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


cdef Py_ssize_t _skip_raw_text(str text, Py_ssize_t start, str element):
    """Return the index just past ``</element...>`` starting at `start`."""
    cdef str needle = "</" + element
    cdef str lowered = text.lower()
    cdef Py_ssize_t at = lowered.find(needle, start)
    if at < 0:
        return len(text)
    cdef Py_ssize_t close = text.find(">", at)
    return len(text) if close < 0 else close + 1


def split_alnum(text: str, min_len: int = 2) -> list:
    """Split `text` into maximal alphanumeric runs of at least `min_len`."""
    cdef list tokens = []
    cdef Py_ssize_t i, start = -1
    cdef Py_ssize_t n = len(text), m = min_len
    cdef Py_UCS4 ch
    for i in range(n):
        ch = text[i]
        if ch.isalnum():
            if start < 0:
                start = i
        elif start >= 0:
            if i - start >= m:
                tokens.append(text[start:i])
            start = -1
    if start >= 0 and n - start >= m:
        tokens.append(text[start:])
    return tokens
