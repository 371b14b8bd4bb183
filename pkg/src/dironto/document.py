"""Parsing of directive plaintext into articles, items and sentences.

The input contract is UTF-8 plaintext with an "Article N" heading on its
own line; numbered paragraphs ("1.", "2a.") open items within an article.
Itemised enumerations ("... shall adopt: (a) ...; (b) ...") are expanded
into full standalone sentences so that downstream clause extraction always
sees a complete subject and verb.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace


class NoArticlesFound(ValueError):
    """The source contains no usable 'Article N' heading."""


class MalformedHeading(ValueError):
    """An article heading was found but its number cannot be parsed."""


_HEADING_RE = re.compile(r"^[ \t]*Article[ \t]+(\S+)[ \t]*$", re.MULTILINE)
_ITEM_RE = re.compile(r"^[ \t]*(\d+[a-z]?)\.[ \t]+", re.MULTILINE)
# enumeration markers: "(a)"-"(z)" and roman "(i)"-"(x)"
_ENUM_MARKER_RE = re.compile(r"\(([a-z]|[ivx]{1,4})\)")
# tokens whose trailing dot never ends a sentence
_ABBREVIATIONS = {"no", "art", "cf", "p", "para", "e.g", "i.e", "etc"}


@dataclass(frozen=True)
class Sentence:
    text: str
    index_in_item: int = 1
    synthesized: bool = False
    span: tuple[int, int] = (0, 0)
    # item label of the enumeration a synthesized sentence was built from
    origin_label: str | None = None

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "index_in_item": self.index_in_item,
            "synthesized": self.synthesized,
            "span": list(self.span),
            "origin_label": self.origin_label,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Sentence":
        return cls(
            text=d["text"],
            index_in_item=d["index_in_item"],
            synthesized=d["synthesized"],
            span=tuple(d["span"]),
            origin_label=d.get("origin_label"),
        )


@dataclass(frozen=True)
class Item:
    label: str
    sentences: tuple[Sentence, ...]
    span: tuple[int, int] = (0, 0)
    label_span: tuple[int, int] = (0, 0)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "span": list(self.span),
            "label_span": list(self.label_span),
            "sentences": [s.to_dict() for s in self.sentences],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Item":
        return cls(
            label=d["label"],
            sentences=tuple(Sentence.from_dict(s) for s in d["sentences"]),
            span=tuple(d["span"]),
            label_span=tuple(d["label_span"]),
        )


@dataclass(frozen=True)
class Article:
    number: int
    items: tuple[Item, ...]
    title: str | None = None
    span: tuple[int, int] = (0, 0)
    title_span: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "title": self.title,
            "span": list(self.span),
            "title_span": list(self.title_span) if self.title_span else None,
            "items": [i.to_dict() for i in self.items],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Article":
        return cls(
            number=d["number"],
            items=tuple(Item.from_dict(i) for i in d["items"]),
            title=d.get("title"),
            span=tuple(d["span"]),
            title_span=tuple(d["title_span"]) if d.get("title_span") else None,
        )


@dataclass(frozen=True)
class DirectiveDocument:
    articles: tuple[Article, ...]
    source_name: str = "<directive>"

    def to_dict(self) -> dict:
        return {
            "source_name": self.source_name,
            "articles": [a.to_dict() for a in self.articles],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DirectiveDocument":
        return cls(
            articles=tuple(Article.from_dict(a) for a in d["articles"]),
            source_name=d.get("source_name", "<directive>"),
        )


def _next_nonspace(text: str, i: int) -> int | None:
    while i < len(text):
        if not text[i].isspace():
            return i
        i += 1
    return None


def _is_sentence_end(text: str, i: int, sentence_start: int, depth: int) -> bool:
    """Decide whether the full stop at text[i] terminates a sentence."""
    if depth > 0:
        return False
    nxt = _next_nonspace(text, i + 1)
    # decimal / paragraph references such as "3.1"
    if i > 0 and text[i - 1].isdigit() and nxt is not None and text[nxt].isdigit() and nxt == i + 1:
        return False
    # token carrying the dot
    tok_start = i
    while tok_start > sentence_start and not text[tok_start - 1].isspace():
        tok_start -= 1
    tok = text[tok_start:i]
    # a leading paragraph label like "5." is a marker, not a sentence
    if re.fullmatch(r"\(?\d+[a-z]?\)?", tok) and not text[sentence_start:tok_start].strip():
        return False
    if tok.lower().strip(".,;:()") in _ABBREVIATIONS:
        return False
    if nxt is None:
        return True
    return text[nxt].isupper() or text[nxt].isdigit() or text[nxt] == "("


def _collapse_ws(text: str) -> str:
    return " ".join(text.split())


def segment_sentences(item_text: str, base_offset: int = 0) -> list[Sentence]:
    """Split item text on sentence-final full stops.

    Dots inside parentheses, decimal references and paragraph labels never
    split. A trailing fragment without a final stop is still flushed as a
    sentence (its text is normalized to end with one). Spans are offsets
    into the original text, shifted by ``base_offset``.
    """
    sentences: list[Sentence] = []

    def flush(lo: int, hi: int) -> None:
        chunk = item_text[lo:hi]
        stripped = chunk.strip()
        if not stripped:
            return
        lead = lo + (len(chunk) - len(chunk.lstrip()))
        trail = hi - (len(chunk) - len(chunk.rstrip()))
        text = _collapse_ws(stripped)
        if text[-1] not in ".!?":
            text += "."
        sentences.append(Sentence(
            text=text,
            index_in_item=len(sentences) + 1,
            span=(base_offset + lead, base_offset + trail),
        ))

    start = 0
    depth = 0
    for i, ch in enumerate(item_text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        elif ch == "." and _is_sentence_end(item_text, i, start, depth):
            flush(start, i + 1)
            start = i + 1
            depth = 0
    flush(start, len(item_text))
    return sentences


def _split_top_level(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _expand_enumeration(sentence: Sentence) -> list[Sentence]:
    """Expand "<stem>: (a) ...; (b) ..." into one full sentence per item."""
    text = sentence.text
    depth = 0
    colon = -1
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        elif ch == ":" and depth == 0:
            colon = i
            break
    if colon < 0:
        return [sentence]
    rest = text[colon + 1:]
    if not _ENUM_MARKER_RE.match(rest.lstrip()):
        return [sentence]

    stem = text[:colon].rstrip().rstrip(",")
    bodies = []
    for chunk in _split_top_level(rest, ";"):
        chunk = chunk.strip()
        if chunk.lower().startswith(("and ", "or ")):
            chunk = chunk.split(" ", 1)[1].lstrip()
        m = _ENUM_MARKER_RE.match(chunk)
        if not m:
            continue
        body = chunk[m.end():].strip().rstrip(".,;").strip()
        if body:
            bodies.append(body)
    if not bodies:
        return [sentence]
    return [
        Sentence(
            text=f"{stem} {body}.",
            synthesized=True,
            span=sentence.span,
        )
        for body in bodies
    ]


def expand_items(item_text: str, base_offset: int = 0) -> list[Sentence]:
    """Segment item text and expand itemised enumerations.

    Non-enumerated sentences pass through unchanged; each labelled
    alternative of an enumeration yields one synthesized sentence made of
    the stem before the colon plus a single item body plus a full stop.
    Idempotent: re-expanding the produced texts changes nothing.
    """
    out: list[Sentence] = []
    for sent in segment_sentences(item_text, base_offset):
        out.extend(_expand_enumeration(sent))
    return [replace(s, index_in_item=i + 1) for i, s in enumerate(out)]


def _detect_title(body: str) -> tuple[str | None, int, int]:
    """Return (title, start, end) offsets relative to the body, if any."""
    for m in re.finditer(r"^[ \t]*(\S[^\n]*?)[ \t]*$", body, re.MULTILINE):
        line = m.group(1)
        if not line:
            continue
        if _ITEM_RE.match(body, m.start()):
            return None, 0, 0
        if line.endswith((".", ":", ";")):
            return None, 0, 0
        return line, m.start(1), m.end(1)
    return None, 0, 0


def _parse_article(number: int, source: str, lo: int, hi: int) -> Article:
    body = source[lo:hi]
    title, t_lo, t_hi = _detect_title(body)
    content_start = t_hi if title else 0

    markers = list(_ITEM_RE.finditer(body, content_start))
    items: list[Item] = []

    def add_item(label: str, label_span: tuple[int, int], b_lo: int, b_hi: int) -> None:
        sentences = expand_items(source[lo + b_lo:lo + b_hi], base_offset=lo + b_lo)
        sentences = [
            replace(s, origin_label=label) if s.synthesized else s
            for s in sentences
        ]
        if not sentences:
            return
        if any(it.label == label for it in items):
            raise MalformedHeading(
                f"duplicate item label {label!r} in Article {number}")
        items.append(Item(
            label=label,
            sentences=tuple(sentences),
            span=(lo + b_lo, lo + b_hi),
            label_span=(lo + label_span[0], lo + label_span[1]),
        ))

    if markers:
        lead = body[content_start:markers[0].start()]
        if lead.strip():
            add_item("0", (content_start, content_start),
                     content_start, markers[0].start())
        for k, m in enumerate(markers):
            b_hi = markers[k + 1].start() if k + 1 < len(markers) else len(body)
            add_item(m.group(1), (m.start(), m.end()), m.end(), b_hi)
    elif body[content_start:].strip():
        add_item("1", (content_start, content_start), content_start, len(body))

    return Article(
        number=number,
        items=tuple(items),
        title=title,
        span=(lo, hi),
        title_span=(lo + t_lo, lo + t_hi) if title else None,
    )


def parse_directive(
    source: str,
    article_range: tuple[int, int] = (7, 37),
    source_name: str = "<directive>",
) -> DirectiveDocument:
    """Parse directive plaintext, keeping articles within the given range.

    All text between consecutive headings is attributed to the earlier
    article. Raises NoArticlesFound when no heading matches (or none falls
    in the range) and MalformedHeading when a heading number is unusable.
    """
    low, high = article_range
    if low <= 0 or high <= 0 or low > high:
        raise ValueError(f"invalid article range {article_range!r}")

    headings = list(_HEADING_RE.finditer(source))
    if not headings:
        raise NoArticlesFound(f"no 'Article N' headings in {source_name}")

    numbers = []
    for m in headings:
        raw = m.group(1).rstrip(".")
        if not raw.isdigit() or int(raw) <= 0:
            raise MalformedHeading(f"cannot parse article number {m.group(1)!r}")
        numbers.append(int(raw))
    for prev, cur in zip(numbers, numbers[1:]):
        if cur <= prev:
            raise MalformedHeading(
                f"article numbers not strictly increasing: {prev} then {cur}")

    articles = []
    for k, (m, n) in enumerate(zip(headings, numbers)):
        if not low <= n <= high:
            continue
        hi = headings[k + 1].start() if k + 1 < len(headings) else len(source)
        articles.append(_parse_article(n, source, m.end(), hi))
    if not articles:
        raise NoArticlesFound(
            f"no articles within range {low}..{high} in {source_name}")
    return DirectiveDocument(articles=tuple(articles), source_name=source_name)
