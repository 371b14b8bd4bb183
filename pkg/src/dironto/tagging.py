"""Deterministic tokenizer and rule-based POS tagger for juridical English.

The tagger is lexicon-plus-rules: a closed-class lexicon (modals,
determiners, prepositions, conjunctions, pronouns, auxiliaries) ships as a
JSON data file; open-class words are resolved by suffix and capitalization
heuristics, with a contextual repair pass that promotes the word after a
modal to a verb. The trade-off is the usual one for rule-based taggers:
fully reproducible output, imperfect coverage.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources


class NoVerbFound(ValueError):
    """The token list contains no verb group (unextractable clause)."""


class PosTag(str, Enum):
    NOUN = "Noun"
    PROPER_NOUN = "ProperNoun"
    VERB = "Verb"
    MODAL_VERB = "ModalVerb"
    PAST_PARTICIPLE = "PastParticiple"
    ADJECTIVE = "Adjective"
    ADVERB = "Adverb"
    DETERMINER = "Determiner"
    PREPOSITION = "Preposition"
    CONJUNCTION = "Conjunction"
    PRONOUN = "Pronoun"
    NUMBER = "Number"
    PUNCTUATION = "Punctuation"
    OTHER = "Other"


@dataclass(frozen=True)
class Token:
    text: str
    lemma: str
    tag: PosTag
    span: tuple[int, int]

    @property
    def lower(self) -> str:
        return self.text.lower()


@dataclass(frozen=True)
class VerbGroup:
    tokens: tuple[Token, ...]
    head: Token
    modal: Token | None = None
    is_passive: bool = False

    @property
    def text(self) -> str:
        return " ".join(t.text for t in self.tokens)

    @property
    def start(self) -> int:
        return self.tokens[0].span[0]

    @property
    def end(self) -> int:
        return self.tokens[-1].span[1]


_CATEGORY_TAGS = {
    "modal": PosTag.MODAL_VERB,
    "auxiliary": PosTag.VERB,
    "determiner": PosTag.DETERMINER,
    "preposition": PosTag.PREPOSITION,
    "conjunction": PosTag.CONJUNCTION,
    "pronoun": PosTag.PRONOUN,
    "adverb": PosTag.ADVERB,
    "number": PosTag.NUMBER,
}

_BE_FORMS = {"be", "is", "are", "am", "was", "were", "been", "being"}

_IRREGULAR_LEMMAS = {
    "has": "have", "had": "have", "having": "have",
    "is": "be", "are": "be", "am": "be", "was": "be", "were": "be",
    "been": "be", "being": "be",
    "does": "do", "did": "do", "done": "do",
    "carried": "carry", "carries": "carry",
    "made": "make", "taken": "take", "took": "take", "given": "give",
    "laid": "lay", "held": "hold", "kept": "keep", "met": "meet",
    "set": "set", "sent": "send", "drawn": "draw", "undertaken": "undertake",
}

# ordered longest-first within each class
_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ance", "ence",
                  "ship", "ism", "ency", "ancy", "ity", "ties")
_ADJ_SUFFIXES = ("ical", "able", "ible", "ive", "ous", "ant", "ent",
                 "ary", "ful", "less", "al", "ic")


class Lexicon:
    """Closed-class word list loaded from JSON, mapping word -> PosTag."""

    def __init__(self, data: dict):
        self.tags: dict[str, PosTag] = {}
        for category, words in data.items():
            tag = _CATEGORY_TAGS.get(category)
            if tag is None:
                continue
            for w in words:
                self.tags[w.lower()] = tag
        self.auxiliaries = {w.lower() for w in data.get("auxiliary", [])}
        self.particles = {w.lower() for w in data.get("particle", [])}
        self.modals = {w.lower() for w in data.get("modal", [])}
        self.stop_words = {
            w for w, t in self.tags.items()
            if t in (PosTag.DETERMINER, PosTag.CONJUNCTION, PosTag.PRONOUN)
        } | {"that"}

    @classmethod
    def from_file(cls, path) -> "Lexicon":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def lookup(self, word: str) -> PosTag | None:
        return self.tags.get(word.lower())


@dataclass(frozen=True)
class GazetteerEntry:
    canonical: str
    name: str
    acronym: str
    surfaces: tuple[str, ...]


class Gazetteer:
    """Domain proper-noun inventory with canonical names and acronyms."""

    def __init__(self, entries: list[GazetteerEntry]):
        self.entries = list(entries)
        self.by_acronym = {e.acronym: e for e in self.entries}
        self.by_canonical = {e.canonical: e for e in self.entries}
        # longest surface first so "csirts network" wins over "csirts"
        self._surface_index = sorted(
            ((tuple(s.split()), e) for e in self.entries for s in e.surfaces),
            key=lambda it: -len(it[0]),
        )

    @classmethod
    def from_file(cls, path) -> "Gazetteer":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls([
            GazetteerEntry(
                canonical=e["canonical"],
                name=e["name"],
                acronym=e["acronym"],
                surfaces=tuple(e["surfaces"]),
            )
            for e in data["entries"]
        ])

    def match_words(self, words: list[str], start: int) -> tuple[GazetteerEntry, int] | None:
        """Longest gazetteer surface starting at words[start], if any."""
        lowered = [w.lower() for w in words[start:]]
        for surface, entry in self._surface_index:
            n = len(surface)
            if tuple(lowered[:n]) == surface:
                return entry, n
        return None

    def find_all(self, phrase: str) -> list[GazetteerEntry]:
        """All gazetteer entries appearing in the phrase, in textual order."""
        words = re.findall(r"[A-Za-z][A-Za-z-]*", phrase)
        hits: list[GazetteerEntry] = []
        i = 0
        while i < len(words):
            m = self.match_words(words, i)
            if m:
                hits.append(m[0])
                i += m[1]
            else:
                i += 1
        return hits


_DEFAULT_LEXICON: Lexicon | None = None
_DEFAULT_GAZETTEER: Gazetteer | None = None


def default_lexicon() -> Lexicon:
    global _DEFAULT_LEXICON
    if _DEFAULT_LEXICON is None:
        ref = resources.files("dironto").joinpath("data/lexicon.json")
        _DEFAULT_LEXICON = Lexicon(json.loads(ref.read_text(encoding="utf-8")))
    return _DEFAULT_LEXICON


def default_gazetteer() -> Gazetteer:
    global _DEFAULT_GAZETTEER
    if _DEFAULT_GAZETTEER is None:
        ref = resources.files("dironto").joinpath("data/gazetteer.json")
        data = json.loads(ref.read_text(encoding="utf-8"))
        _DEFAULT_GAZETTEER = Gazetteer([
            GazetteerEntry(
                canonical=e["canonical"],
                name=e["name"],
                acronym=e["acronym"],
                surfaces=tuple(e["surfaces"]),
            )
            for e in data["entries"]
        ])
    return _DEFAULT_GAZETTEER


_TOKEN_RE = re.compile(
    r"\d+(?:\(\d+\))+"             # parenthesized references: 47(1)
    r"|\d+(?:[./]\d+)*"            # numbers, dates, 2022/2554, 3.1
    r"|\([A-Za-z][A-Za-z0-9]*\)"   # short parenthesized items: (EU), (ESAs)
    r"|[A-Za-z]+(?:[-'’][A-Za-z]+)*"  # words, incl. hyphenated
    r"|\S"                         # any other single character
)


def tokenize(sentence: str) -> list[Token]:
    """Lossless tokenization: joining token spans reproduces the sentence."""
    if not sentence:
        raise ValueError("cannot tokenize an empty sentence")
    tokens = []
    for m in _TOKEN_RE.finditer(sentence):
        text = m.group(0)
        tokens.append(Token(
            text=text,
            lemma=text.lower(),
            tag=PosTag.OTHER,
            span=(m.start(), m.end()),
        ))
    return tokens


def detokenize(sentence: str, tokens: list[Token]) -> str:
    """Rebuild the sentence from token spans (identity check helper)."""
    out = []
    prev = 0
    for t in tokens:
        out.append(sentence[prev:t.span[0]])
        out.append(sentence[t.span[0]:t.span[1]])
        prev = t.span[1]
    out.append(sentence[prev:])
    return "".join(out)


def lemmatize(word: str, tag: PosTag) -> str:
    low = word.lower()
    if low in _IRREGULAR_LEMMAS:
        return _IRREGULAR_LEMMAS[low]
    if tag in (PosTag.NOUN, PosTag.PROPER_NOUN):
        if low.endswith("ies") and len(low) > 4:
            return low[:-3] + "y"
        if low.endswith(("ses", "xes", "zes", "ches", "shes")):
            return low[:-2]
        if low.endswith("s") and not low.endswith("ss") and len(low) > 3:
            return low[:-1]
    if tag in (PosTag.VERB, PosTag.PAST_PARTICIPLE):
        if low.endswith("ied") and len(low) > 4:
            return low[:-3] + "y"
        if low.endswith("ed") and len(low) > 4:
            stem = low[:-1]
            return stem if stem.endswith("e") else low[:-2]
        if low.endswith("ing") and len(low) > 5:
            return low[:-3]
        if low.endswith("s") and not low.endswith("ss") and len(low) > 3:
            return low[:-1]
    return low


def _base_tag(text: str, sentence_initial: bool, lexicon: Lexicon) -> PosTag:
    if not any(c.isalnum() for c in text):
        return PosTag.PUNCTUATION
    if text[0].isdigit():
        return PosTag.NUMBER
    if text.startswith("("):
        return PosTag.OTHER
    hit = lexicon.lookup(text)
    if hit is not None:
        return hit
    low = text.lower()
    for suf in _NOUN_SUFFIXES:
        if low.endswith(suf) and len(low) > len(suf) + 1:
            return PosTag.NOUN
    if low.endswith("ly") and len(low) > 3:
        return PosTag.ADVERB
    if low.endswith("ed") and len(low) > 3:
        return PosTag.PAST_PARTICIPLE
    for suf in _ADJ_SUFFIXES:
        if low.endswith(suf) and len(low) > len(suf) + 1:
            return PosTag.ADJECTIVE
    if text[0].isupper() and not sentence_initial:
        return PosTag.PROPER_NOUN
    return PosTag.NOUN


_VERBISH = {PosTag.VERB, PosTag.PAST_PARTICIPLE}
_PROMOTABLE = {PosTag.NOUN, PosTag.ADJECTIVE, PosTag.PROPER_NOUN, PosTag.OTHER}


def tag(tokens: list[Token], lexicon: Lexicon | None = None,
        gazetteer: Gazetteer | None = None) -> list[Token]:
    """Assign a PosTag to every token; deterministic for a given input.

    Priority: gazetteer proper nouns, then lexicon, then suffix rules,
    then capitalization, then the Noun default. A repair pass promotes
    the word following a modal (and any coordinated sibling) to Verb.
    """
    lexicon = lexicon or default_lexicon()
    gazetteer = gazetteer or default_gazetteer()

    words = [t.text for t in tokens]
    proper = [False] * len(tokens)
    i = 0
    while i < len(tokens):
        m = gazetteer.match_words(words, i)
        if m:
            for k in range(i, i + m[1]):
                proper[k] = True
            i += m[1]
        else:
            i += 1

    tagged: list[Token] = []
    for idx, tok in enumerate(tokens):
        if proper[idx] and tok.text[0].isalpha():
            t = PosTag.PROPER_NOUN
        else:
            t = _base_tag(tok.text, idx == 0, lexicon)
        tagged.append(replace(tok, tag=t))

    # contextual repair: modal (+adverbs) promotes the next content word
    # to Verb, extending over immediate "or"/"and" coordinations
    def promote(j: int) -> int:
        while j < len(tagged) and tagged[j].tag == PosTag.ADVERB:
            j += 1
        if j >= len(tagged):
            return j
        tok = tagged[j]
        if tok.tag == PosTag.VERB and tok.lower in lexicon.auxiliaries:
            k = j + 1
            while k < len(tagged) and tagged[k].tag == PosTag.ADVERB:
                k += 1
            if k < len(tagged) and tagged[k].lower in lexicon.auxiliaries:
                return promote(k)
            if k < len(tagged) and tagged[k].tag == PosTag.PAST_PARTICIPLE:
                return k
            return j
        if tok.tag in _PROMOTABLE and tok.text[0].isalpha():
            tagged[j] = replace(tok, tag=PosTag.VERB)
        return j

    i = 0
    while i < len(tagged):
        if tagged[i].tag == PosTag.MODAL_VERB:
            head = promote(i + 1)
            j = head + 1
            while (j + 1 < len(tagged)
                   and tagged[j].lower in ("or", "and")
                   and tagged[j + 1].tag in (_PROMOTABLE | _VERBISH)
                   and tagged[j + 1].text[0].isalpha()):
                if tagged[j + 1].tag in _PROMOTABLE:
                    tagged[j + 1] = replace(tagged[j + 1], tag=PosTag.VERB)
                j += 2
            i = j
        else:
            i += 1

    return [replace(t, lemma=lemmatize(t.text, t.tag)) for t in tagged]


def scan_verb_groups(tagged: list[Token], lexicon: Lexicon | None = None) -> list[VerbGroup]:
    """Collect maximal modal? + adverb* + auxiliary? + head verb runs."""
    lexicon = lexicon or default_lexicon()
    groups: list[VerbGroup] = []
    n = len(tagged)
    i = 0
    while i < n:
        tok = tagged[i]
        if tok.tag not in (PosTag.MODAL_VERB, PosTag.VERB, PosTag.PAST_PARTICIPLE):
            i += 1
            continue

        start = i
        modal = None
        j = i
        if tok.tag == PosTag.MODAL_VERB:
            modal = tok
            j += 1
        while j < n and tagged[j].tag == PosTag.ADVERB:
            j += 1

        head = None
        saw_be = False
        while j < n:
            cur = tagged[j]
            if cur.tag == PosTag.VERB and cur.lower in lexicon.auxiliaries:
                k = j + 1
                while k < n and tagged[k].tag == PosTag.ADVERB:
                    k += 1
                follows_verb = k < n and tagged[k].tag in _VERBISH
                if follows_verb:
                    saw_be = saw_be or cur.lower in _BE_FORMS
                    j = k
                    continue
                head = cur  # copula / main "have"
                break
            if cur.tag in _VERBISH:
                head = cur
                break
            break
        if head is None:
            # a modal with nothing promotable after it: skip it
            i = max(j, start + 1)
            continue

        end = j
        # trailing particles ("carry out") and coordinated heads
        k = end + 1
        while k < n:
            if tagged[k].lower in lexicon.particles:
                end = k
                k += 1
                continue
            if (tagged[k].lower in ("or", "and") and k + 1 < n
                    and tagged[k + 1].tag in _VERBISH):
                end = k + 1
                k += 2
                continue
            break

        is_passive = saw_be and head.tag == PosTag.PAST_PARTICIPLE
        groups.append(VerbGroup(
            tokens=tuple(tagged[start:end + 1]),
            head=head,
            modal=modal,
            is_passive=is_passive,
        ))
        i = end + 1
    return groups


def find_verb_groups(tagged: list[Token], lexicon: Lexicon | None = None) -> list[VerbGroup]:
    """Like scan_verb_groups but raises NoVerbFound on a verbless input."""
    groups = scan_verb_groups(tagged, lexicon)
    if not groups:
        raise NoVerbFound("no verb group in token list")
    return groups
