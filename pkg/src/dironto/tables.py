"""Per-article POS tables pairing gold annotations with extracted values.

Each table row carries the manually annotated subject/verb/object next to
the extracted ones plus a hit mark per slot. Gold files are CSV with the
header ``article,row_id,subject,verb,object,passive``; emitted tables
mirror the ``N,Sub,I-Sub,Sub-HIT,...`` layout with marks rendered as
OK / X / PART / P.
"""

from __future__ import annotations

import csv
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .clauses import Clause
from .tagging import Gazetteer, Lexicon, default_gazetteer, default_lexicon


class DuplicateRow(ValueError):
    """A (article, row_id) key occurs more than once in the gold data."""


class HitMark(str, Enum):
    CORRECT = "Correct"
    WRONG = "Wrong"
    INCOMPLETE = "Incomplete"
    NOT_APPLICABLE = "NotApplicable"


MARK_LABELS = {
    HitMark.CORRECT: "OK",
    HitMark.WRONG: "X",
    HitMark.INCOMPLETE: "PART",
    HitMark.NOT_APPLICABLE: "P",
}
LABEL_MARKS = {v: k for k, v in MARK_LABELS.items()}

# annotator shorthands for "nothing extracted" / "slot not annotated"
_EXTRACTION_SENTINELS = {"none", "passive - none", "passive none"}
_PASSIVE_PREFIX_RE = re.compile(r"^p\s*-\s*")


@dataclass(frozen=True)
class GoldAnnotation:
    article: int
    row_id: str
    subject: str
    verb: str
    object: str
    passive: bool = False


@dataclass(frozen=True)
class ExtractedRow:
    """Extraction output aligned to one gold row by (article, row_id)."""
    article: int
    row_id: str
    subject: str
    verb: str
    object: str
    passive: bool = False


@dataclass(frozen=True)
class PosRow:
    article: int
    row_id: str
    gold_subject: str
    extracted_subject: str
    subject_hit: HitMark
    gold_verb: str
    extracted_verb: str
    verb_hit: HitMark
    gold_object: str
    extracted_object: str
    object_hit: HitMark
    passive: bool


def normalize(value: str, extracted: bool = False) -> str:
    """Case-fold, collapse whitespace, trim edge punctuation.

    Dashes and bare passive markers count as empty on both sides; the
    "NONE" family of annotator sentinels counts as empty only on the
    extracted side (gold-side "NONE" records a failed annotation of an
    existing slot, which must score as wrong, not as not-applicable).
    """
    v = " ".join((value or "").split()).casefold()
    v = v.strip(" .,;:!?\"'")
    if v in ("", "-", "–", "—", "p"):
        return ""
    v = _PASSIVE_PREFIX_RE.sub("", v).strip(" .,;:")
    if extracted and v in _EXTRACTION_SENTINELS:
        return ""
    return v


def _has_content_word(text: str, lexicon: Lexicon) -> bool:
    closed = lexicon.tags
    for tok in re.findall(r"[a-z0-9][a-z0-9()/'-]*", text):
        if tok not in closed:
            return True
    return False


def score(gold: str, extracted: str, lexicon: Lexicon | None = None) -> HitMark:
    """Hit mark for one slot: equality, substring containment, or failure.

    Equal values are Correct; an empty (or "NONE") extraction against
    non-empty gold is Wrong; containment either way with at least one
    content word is Incomplete; empty gold with empty extraction is
    NotApplicable; anything else is Wrong.
    """
    lexicon = lexicon or default_lexicon()
    g = normalize(gold)
    e = normalize(extracted, extracted=True)
    if not g and not e:
        return HitMark.NOT_APPLICABLE
    if g == e:
        return HitMark.CORRECT
    if not e or not g:
        return HitMark.WRONG
    shorter, longer = (g, e) if len(g) <= len(e) else (e, g)
    if shorter in longer and _has_content_word(shorter, lexicon):
        return HitMark.INCOMPLETE
    return HitMark.WRONG


def acronymize(phrase: str, gazetteer: Gazetteer | None = None) -> str:
    """Replace a subject phrase by its gazetteer acronyms ("ESA - CA")."""
    gazetteer = gazetteer or default_gazetteer()
    hits = gazetteer.find_all(phrase)
    seen: list[str] = []
    for e in hits:
        if e.acronym not in seen:
            seen.append(e.acronym)
    return " - ".join(seen) if seen else phrase


def extracted_row_from_clause(
    article: int,
    row_id: str,
    clause: Clause | None,
    gazetteer: Gazetteer | None = None,
) -> ExtractedRow:
    """Render the row-representative clause the way the tables record it.

    Subjects are acronymized through the gazetteer, the verb is the head
    surface form with a "P - " prefix for passives, and the object column
    takes the complement when one was extracted (object and complement
    play the same role in the tables).
    """
    if clause is None:
        return ExtractedRow(article, row_id, "", "", "")
    return ExtractedRow(
        article=article,
        row_id=row_id,
        subject=acronymize(clause.subject, gazetteer) if clause.subject else "",
        verb=clause.verb_display,
        object=clause.complement or clause.object or "",
        passive=clause.verb.is_passive,
    )


def tabulate(
    gold: list[GoldAnnotation],
    extracted: list[ExtractedRow],
    lexicon: Lexicon | None = None,
) -> list[PosRow]:
    """One PosRow per gold row; unmatched gold rows get empty extractions."""
    lexicon = lexicon or default_lexicon()
    index: dict[tuple[int, str], ExtractedRow] = {}
    for e in extracted:
        index.setdefault((e.article, e.row_id), e)

    seen: set[tuple[int, str]] = set()
    rows: list[PosRow] = []
    for g in gold:
        key = (g.article, g.row_id)
        if key in seen:
            raise DuplicateRow(f"duplicate gold row {key!r}")
        seen.add(key)
        e = index.get(key, ExtractedRow(g.article, g.row_id, "", "", ""))
        rows.append(PosRow(
            article=g.article,
            row_id=g.row_id,
            gold_subject=g.subject,
            extracted_subject=e.subject,
            subject_hit=score(g.subject, e.subject, lexicon),
            gold_verb=g.verb,
            extracted_verb=e.verb,
            verb_hit=score(g.verb, e.verb, lexicon),
            gold_object=g.object,
            extracted_object=e.object,
            object_hit=score(g.object, e.object, lexicon),
            passive=g.passive or e.passive,
        ))
    return rows


def summarize(rows: list[PosRow]) -> dict[int, dict[str, dict[HitMark, int]]]:
    """Per-article counts of each hit mark for each slot."""
    out: dict[int, dict[str, Counter]] = {}
    for r in rows:
        slots = out.setdefault(r.article, {
            "subject": Counter(), "verb": Counter(), "object": Counter(),
        })
        slots["subject"][r.subject_hit] += 1
        slots["verb"][r.verb_hit] += 1
        slots["object"][r.object_hit] += 1
    return {
        art: {slot: dict(cnt) for slot, cnt in slots.items()}
        for art, slots in out.items()
    }


def _row_sort_key(row_id: str) -> tuple:
    parts = []
    for p in row_id.split("."):
        m = re.match(r"(\d+)(.*)", p)
        parts.append((int(m.group(1)), m.group(2)) if m else (0, p))
    return tuple(parts)


def load_gold_csv(path) -> list[GoldAnnotation]:
    expected = ["article", "row_id", "subject", "verb", "object", "passive"]
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != expected:
            raise ValueError(
                f"gold CSV header must be {','.join(expected)}, "
                f"got {reader.fieldnames}")
        for rec in reader:
            out.append(GoldAnnotation(
                article=int(rec["article"]),
                row_id=rec["row_id"].strip(),
                subject=rec["subject"].strip(),
                verb=rec["verb"].strip(),
                object=rec["object"].strip(),
                passive=rec["passive"].strip().lower() in ("true", "1", "yes"),
            ))
    return out


_POS_ROW_FIELDS = [
    "article", "row_id",
    "gold_subject", "extracted_subject", "subject_hit",
    "gold_verb", "extracted_verb", "verb_hit",
    "gold_object", "extracted_object", "object_hit",
    "passive",
]


def write_pos_rows(rows: list[PosRow], path) -> None:
    rows = sorted(rows, key=lambda r: (r.article, _row_sort_key(r.row_id)))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(_POS_ROW_FIELDS)
        for r in rows:
            w.writerow([
                r.article, r.row_id,
                r.gold_subject, r.extracted_subject, r.subject_hit.value,
                r.gold_verb, r.extracted_verb, r.verb_hit.value,
                r.gold_object, r.extracted_object, r.object_hit.value,
                str(r.passive).lower(),
            ])


def read_pos_rows(path) -> list[PosRow]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            out.append(PosRow(
                article=int(rec["article"]),
                row_id=rec["row_id"],
                gold_subject=rec["gold_subject"],
                extracted_subject=rec["extracted_subject"],
                subject_hit=HitMark(rec["subject_hit"]),
                gold_verb=rec["gold_verb"],
                extracted_verb=rec["extracted_verb"],
                verb_hit=HitMark(rec["verb_hit"]),
                gold_object=rec["gold_object"],
                extracted_object=rec["extracted_object"],
                object_hit=HitMark(rec["object_hit"]),
                passive=rec["passive"] == "true",
            ))
    return out


def write_article_tables(rows: list[PosRow], out_dir) -> list[Path]:
    """One CSV per article mirroring the printed table layout."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    articles = sorted({r.article for r in rows})
    for art in articles:
        path = out_dir / f"article_{art:02d}.csv"
        art_rows = sorted(
            (r for r in rows if r.article == art),
            key=lambda r: _row_sort_key(r.row_id),
        )
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["N", "Sub", "I-Sub", "Sub-HIT",
                        "Verb", "I-Verb", "Verb-HIT",
                        "Obj", "I-Obj", "Obj-HIT"])
            for r in art_rows:
                w.writerow([
                    r.row_id,
                    r.gold_subject, r.extracted_subject,
                    MARK_LABELS[r.subject_hit],
                    r.gold_verb, r.extracted_verb,
                    MARK_LABELS[r.verb_hit],
                    r.gold_object, r.extracted_object,
                    MARK_LABELS[r.object_hit],
                ])
        written.append(path)
    return written


def write_summary_csv(summary: dict, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["article", "slot", "correct", "wrong",
                    "incomplete", "not_applicable"])
        for art in sorted(summary):
            for slot in ("subject", "verb", "object"):
                cnt = summary[art][slot]
                w.writerow([
                    art, slot,
                    cnt.get(HitMark.CORRECT, 0),
                    cnt.get(HitMark.WRONG, 0),
                    cnt.get(HitMark.INCOMPLETE, 0),
                    cnt.get(HitMark.NOT_APPLICABLE, 0),
                ])
