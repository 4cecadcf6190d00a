"""Token extraction, link extraction, and the word-id inverted index.

Tokenization is deliberately regex-free and unstemmed so that the same
bytes always yield the same tokens: markup is stripped in one pass, the
remainder lowercased and split on non-alphanumerics, and tokens shorter
than two characters dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import IO, Iterable

from crawlsim._kernels import fnv1a64, split_alnum, strip_markup
from crawlsim.urls import DocId, NormalizedUrl, UrlError, normalize_url

MIN_TOKEN_LEN = 2

WordId = int


class DuplicateDocument(ValueError):
    """A doc_id was indexed twice within one crawl cycle."""


class EmptyQuery(ValueError):
    """Query with no terms, or whose terms tokenize to nothing."""


def tokenize(html: bytes) -> list[str]:
    """Extract lowercase alphanumeric tokens (length >= 2) from HTML bytes.

    Tag contents and <script>/<style> bodies are removed entirely;
    invalid UTF-8 is replaced before tokenizing.
    """
    text = html.decode("utf-8", errors="replace")
    return split_alnum(strip_markup(text).lower(), MIN_TOKEN_LEN)


class _AnchorHrefParser(HTMLParser):
    def __init__(self) -> None:
        super().__init__()
        self.hrefs: list[str] = []

    def handle_starttag(self, tag: str, attrs) -> None:
        if tag != "a":
            return
        for name, value in attrs:
            if name == "href" and value is not None:
                self.hrefs.append(value)


def extract_links(html: bytes, base: NormalizedUrl) -> list[NormalizedUrl]:
    """Resolve every ``<a href>`` against `base`, in document order.

    Unresolvable or non-http(s) hrefs are skipped; duplicates are kept
    (deduplication is the frontier's job).
    """
    parser = _AnchorHrefParser()
    parser.feed(html.decode("utf-8", errors="replace"))
    links: list[NormalizedUrl] = []
    for href in parser.hrefs:
        try:
            links.append(normalize_url(base, href))
        except UrlError:
            continue
    return links


@dataclass(frozen=True)
class PageSnapshot:
    """Record of one fetched page, as stored in the crawl report."""

    doc_id: DocId
    url: NormalizedUrl
    fetched_at: float
    content_hash: int
    out_links: tuple[NormalizedUrl, ...]
    token_count: int


def content_hash(body: bytes) -> int:
    """64-bit FNV-1a hash of the raw body bytes."""
    return fnv1a64(body)


@dataclass
class WordIndex:
    """Word-id table plus postings: word -> id, id -> {doc_id: tf}."""

    word_ids: dict[str, WordId] = field(default_factory=dict)
    postings: dict[WordId, dict[DocId, int]] = field(default_factory=dict)
    _indexed_docs: set[DocId] = field(default_factory=set)

    def index_document(self, doc_id: DocId, tokens: Iterable[str]) -> None:
        """Add one document's tokens; word ids are assigned first-seen."""
        if doc_id in self._indexed_docs:
            raise DuplicateDocument(f"doc_id {doc_id} already indexed")
        self._indexed_docs.add(doc_id)
        counts: dict[str, int] = {}
        for token in tokens:
            counts[token] = counts.get(token, 0) + 1
        for token, tf in counts.items():
            word_id = self.word_ids.get(token)
            if word_id is None:
                word_id = len(self.word_ids)
                self.word_ids[token] = word_id
                self.postings[word_id] = {}
            self.postings[word_id][doc_id] = tf

    def lookup(self, terms: list[str]) -> list[tuple[DocId, int]]:
        """Conjunctive search: documents containing every query token.

        Terms are tokenized with the indexing rules; the score is the
        sum of term frequencies, ranked descending with doc_id breaking
        ties. Any unknown token empties the result.
        """
        if not terms:
            raise EmptyQuery("no query terms")
        tokens: list[str] = []
        for term in terms:
            for token in split_alnum(term.lower(), MIN_TOKEN_LEN):
                if token not in tokens:
                    tokens.append(token)
        if not tokens:
            raise EmptyQuery(f"terms contain no indexable tokens: {terms!r}")

        per_token: list[dict[DocId, int]] = []
        for token in tokens:
            word_id = self.word_ids.get(token)
            if word_id is None:
                return []
            per_token.append(self.postings[word_id])

        docs = set(per_token[0])
        for posting in per_token[1:]:
            docs &= set(posting)
        scored = [(doc, sum(p[doc] for p in per_token)) for doc in docs]
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return scored

    def document_count(self) -> int:
        return len(self._indexed_docs)


def dump_index(index: WordIndex, fp: IO[str]) -> None:
    """Write line-delimited postings records sorted by word_id."""
    for word, word_id in sorted(index.word_ids.items(), key=lambda kv: kv[1]):
        postings = sorted(index.postings[word_id].items())
        record = {
            "word": word,
            "word_id": word_id,
            "postings": [[doc_id, tf] for doc_id, tf in postings],
        }
        fp.write(json.dumps(record, separators=(",", ":")) + "\n")


def load_index(fp: IO[str]) -> WordIndex:
    """Rebuild a WordIndex from a dump; inverse of :func:`dump_index`."""
    index = WordIndex()
    for line in fp:
        line = line.strip()
        if not line:
            continue
        record = json.loads(line)
        word_id = record["word_id"]
        index.word_ids[record["word"]] = word_id
        index.postings[word_id] = {
            doc_id: tf for doc_id, tf in record["postings"]
        }
        index._indexed_docs.update(
            doc_id for doc_id, _ in record["postings"]
        )
    return index
