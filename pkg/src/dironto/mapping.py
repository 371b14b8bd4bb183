"""Mapping of tabulated rows onto the ontological pattern vocabulary.

Subjects become canonical singular entity names, verb groups become
lower-camel predicates, and object phrases become CamelCase class names
with gazetteer acronym compaction. Rows are grouped per (article, entity)
into the data dictionary that drives ontology building.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import OrderedDict
from dataclasses import dataclass, field

from .tables import HitMark, PosRow, normalize
from .tagging import (
    Gazetteer,
    Lexicon,
    PosTag,
    default_gazetteer,
    default_lexicon,
    lemmatize,
)


class UnknownEntity(ValueError):
    """Subject matches no gazetteer entry and has no usable noun head."""


class EmptyPredicate(ValueError):
    """Only a modal or marker remains after stripping the verb group."""


class EmptyObjectName(ValueError):
    """Nothing survives stop-word removal in the object phrase."""


@dataclass(frozen=True)
class EntityName:
    canonical: str
    acronym: str | None = None


@dataclass(frozen=True)
class MeasureSpec:
    article: int
    entity: EntityName
    predicate: str
    object_class: str
    passive: bool = False
    source_row: str = ""

    def to_dict(self) -> dict:
        return {
            "article": self.article,
            "entity": self.entity.canonical,
            "acronym": self.entity.acronym,
            "predicate": self.predicate,
            "object_class": self.object_class,
            "passive": self.passive,
            "source_row": self.source_row,
        }


@dataclass
class DataDictionary:
    groups: "OrderedDict[tuple[int, str], list[MeasureSpec]]" = field(
        default_factory=OrderedDict)
    review: list[dict] = field(default_factory=list)

    def add(self, measure: MeasureSpec) -> None:
        key = (measure.article, measure.entity.canonical)
        self.groups.setdefault(key, []).append(measure)

    def to_dict(self) -> dict:
        return {
            "groups": {
                f"{article}:{entity}": [m.to_dict() for m in measures]
                for (article, entity), measures in self.groups.items()
            },
            "review": list(self.review),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DataDictionary":
        dd = cls()
        for key, measures in d["groups"].items():
            article_s, entity = key.split(":", 1)
            for m in measures:
                dd.add(MeasureSpec(
                    article=int(article_s),
                    entity=EntityName(m["entity"], m.get("acronym")),
                    predicate=m["predicate"],
                    object_class=m["object_class"],
                    passive=m.get("passive", False),
                    source_row=m.get("source_row", ""),
                ))
        dd.review = list(d.get("review", []))
        return dd


_CANONICAL_RE = re.compile(r"[A-Z][A-Za-z0-9]*$")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z'’-]*|\d[\w()/.-]*")
_MULTI_ENTITY_SPLIT = re.compile(r"\s+-\s+|\s+and\s+|\s*,\s*")


def _camel(word: str) -> str:
    word = word.replace("/", "-")
    word = re.sub(r"[^A-Za-z0-9()-]", "", word)
    if not word:
        return ""
    return word[0].upper() + word[1:]


def _singularize(word: str) -> str:
    return lemmatize(word, PosTag.NOUN)


def normalize_entity(subject: str, gazetteer: Gazetteer | None = None,
                     lexicon: Lexicon | None = None) -> EntityName:
    """Canonical singular CamelCase entity name for a subject phrase.

    Gazetteer hits (by canonical name, acronym or surface form) win; in a
    coordinated subject ("ESA - CA") the first entity names the group.
    Unknown subjects fall back to CamelCasing their content words with a
    singularized head; raises UnknownEntity when nothing remains.
    """
    gazetteer = gazetteer or default_gazetteer()
    lexicon = lexicon or default_lexicon()
    raw = " ".join((subject or "").split())
    if not raw:
        raise UnknownEntity("empty subject")

    if raw in gazetteer.by_canonical:
        e = gazetteer.by_canonical[raw]
        return EntityName(e.canonical, e.acronym)
    if raw in gazetteer.by_acronym:
        e = gazetteer.by_acronym[raw]
        return EntityName(e.canonical, e.acronym)
    head = _MULTI_ENTITY_SPLIT.split(raw)[0].strip()
    if head in gazetteer.by_acronym:
        e = gazetteer.by_acronym[head]
        return EntityName(e.canonical, e.acronym)
    hits = gazetteer.find_all(raw)
    if hits:
        return EntityName(hits[0].canonical, hits[0].acronym)

    words = [
        w for w in _WORD_RE.findall(raw)
        if w.lower() not in lexicon.tags and w[0].isalpha()
    ]
    if not words:
        raise UnknownEntity(f"no noun head in subject {subject!r}")
    words[-1] = _singularize(words[-1])
    name = "".join(_camel(w) for w in words)
    if not _CANONICAL_RE.match(name):
        raise UnknownEntity(f"cannot canonicalize subject {subject!r}")
    return EntityName(name, gazetteer.by_canonical.get(name) and
                      gazetteer.by_canonical[name].acronym)


def name_predicate(verb_group_text: str, lexicon: Lexicon | None = None) -> str:
    """Lemma of the head verb: modals and auxiliaries dropped, lowercased.

    A leading "P - " passive marker is tolerated (gold files use it). An
    auxiliary survives only when it is itself the head ("shall be X").
    """
    lexicon = lexicon or default_lexicon()
    text = re.sub(r"^\s*P\s*-\s*", "", verb_group_text or "")
    words = [w.lower() for w in re.findall(r"[A-Za-z][A-Za-z'-]*", text)]
    words = [w for w in words if w not in lexicon.modals]
    words = [w for w in words
             if lexicon.lookup(w) != PosTag.ADVERB and w != "not"]
    while len(words) > 1 and words[0] in lexicon.auxiliaries:
        words = words[1:]
    if not words:
        raise EmptyPredicate(f"no head verb in {verb_group_text!r}")
    lemma = lemmatize(words[0], PosTag.VERB)
    return lemma[0].lower() + lemma[1:]


# words removed from object class names (kept: prepositions, so the name
# reads as a phrase, e.g. ...ToCarryOut...)
def _object_stop_words(lexicon: Lexicon) -> set[str]:
    stops = {w for w, t in lexicon.tags.items() if t == PosTag.DETERMINER}
    return stops | {"that", "and", "or", "which", "whose"}


def name_object(object_text: str, max_len: int = 80,
                gazetteer: Gazetteer | None = None,
                lexicon: Lexicon | None = None) -> str:
    """CamelCase class name for an object phrase.

    Gazetteer phrases compact to their acronyms and act as hyphenated
    segment boundaries; stop words drop; names longer than max_len are
    cut at a word boundary and suffixed with a 6-hex content hash so the
    result stays deterministic and collision-resistant.
    """
    gazetteer = gazetteer or default_gazetteer()
    lexicon = lexicon or default_lexicon()
    if not (object_text or "").strip():
        raise EmptyObjectName("empty object text")
    stops = _object_stop_words(lexicon)

    words = _WORD_RE.findall(object_text)
    parts: list[str] = []
    i = 0
    while i < len(words):
        m = gazetteer.match_words(words, i)
        if m:
            entry, length = m
            parts.append(entry.acronym + "-")
            i += length
            continue
        w = words[i]
        i += 1
        if w.lower() in stops:
            continue
        c = _camel(w)
        if c:
            parts.append(c)
    name = "".join(parts).strip("-")
    name = re.sub(r"-{2,}", "-", name)
    if not name:
        raise EmptyObjectName(f"nothing survives stop-word removal in "
                              f"{object_text!r}")
    if len(name) > max_len:
        digest = hashlib.sha256(name.encode("utf-8")).hexdigest()[:6]
        cut = max_len
        for j in range(max_len, 0, -1):
            if name[j - 1] == "-" or (j < len(name) and name[j].isupper()):
                cut = j
                break
        name = name[:cut].rstrip("-") + "-" + digest
    return name


def _choose(gold: str, extracted: str, hit: HitMark, prefer_gold: bool) -> str:
    # emptiness judged with sentinels mapped out on both sides: gold-side
    # "NONE" markers score as wrong but never become ontology content
    gold_empty = not normalize(gold, extracted=True)
    if prefer_gold and hit == HitMark.WRONG and not gold_empty:
        return gold
    return extracted


def build_dictionary(
    rows: list[PosRow],
    prefer_gold: bool = True,
    max_len: int = 80,
    gazetteer: Gazetteer | None = None,
    lexicon: Lexicon | None = None,
) -> DataDictionary:
    """One measure per row with usable slots, grouped by (article, entity).

    With prefer_gold, slots whose extraction scored Wrong are repaired
    from the gold value (incomplete extractions count as correct and stay
    as extracted). Rows that cannot produce a measure go to the review
    list instead of being dropped silently.
    """
    gazetteer = gazetteer or default_gazetteer()
    lexicon = lexicon or default_lexicon()
    dd = DataDictionary()
    for r in rows:
        subject = _choose(r.gold_subject, r.extracted_subject,
                          r.subject_hit, prefer_gold)
        verb = _choose(r.gold_verb, r.extracted_verb, r.verb_hit, prefer_gold)
        obj = _choose(r.gold_object, r.extracted_object,
                      r.object_hit, prefer_gold)

        def flag(reason: str) -> None:
            dd.review.append({
                "article": r.article, "row_id": r.row_id, "reason": reason,
                "subject": subject, "verb": verb, "object": obj,
            })

        if not all(normalize(v, extracted=True) for v in (subject, verb, obj)):
            flag("missing slot")
            continue
        try:
            entity = normalize_entity(subject, gazetteer, lexicon)
        except UnknownEntity as exc:
            flag(f"unknown entity: {exc}")
            continue
        try:
            predicate = name_predicate(verb, lexicon)
        except EmptyPredicate as exc:
            flag(f"empty predicate: {exc}")
            continue
        try:
            object_class = name_object(obj, max_len, gazetteer, lexicon)
        except EmptyObjectName as exc:
            flag(f"empty object name: {exc}")
            continue
        dd.add(MeasureSpec(
            article=r.article,
            entity=entity,
            predicate=predicate,
            object_class=object_class,
            passive=r.passive,
            source_row=f"{r.article}:{r.row_id}",
        ))
    return dd


def write_review_csv(dd: DataDictionary, path) -> None:
    import csv
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["article", "row_id", "reason", "subject", "verb", "object"])
        for item in dd.review:
            w.writerow([item["article"], item["row_id"], item["reason"],
                        item["subject"], item["verb"], item["object"]])


def write_dictionary_json(dd: DataDictionary, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dd.to_dict(), fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")


def read_dictionary_json(path) -> DataDictionary:
    with open(path, encoding="utf-8") as fh:
        return DataDictionary.from_dict(json.load(fh))
