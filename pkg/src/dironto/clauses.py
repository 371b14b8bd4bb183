"""Clause identification over tagged sentences.

Each sentence yields one clause per main verb group, tagged with the
pattern of its populated slots (subject, verb, object, complement,
adverbials). A "that"-complement after the main verb is extracted
recursively as a nested clause; where fine-grained extraction fails, the
fallback takes the entire sentence suffix after the main verb as the
object. The rules are deliberately cheap and deterministic: failures are
surfaced later as wrong or incomplete hits, never silently dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .document import Sentence
from .tagging import (
    Gazetteer,
    Lexicon,
    PosTag,
    Token,
    VerbGroup,
    default_gazetteer,
    default_lexicon,
    scan_verb_groups,
    tag,
    tokenize,
)

CLAUSE_PATTERNS = ("SV", "SVC", "SVO", "SVA", "SVOA", "SVOC")


class Unextractable(ValueError):
    """No verb group was found; the sentence yields no clause."""


class EmptyTail(ValueError):
    """The verb group ends the sentence; the fallback yields no object."""


# prepositions that open a new clause-level adverbial
_ADVERBIAL_OPENERS = {
    "in", "as", "within", "by", "before", "after", "during", "at", "on",
    "notwithstanding", "through", "throughout",
}
# prepositions allowed inside a noun phrase while scanning backwards
_NP_PREPOSITIONS = {"of", "under"}

_NP_TAGS = {
    PosTag.NOUN, PosTag.PROPER_NOUN, PosTag.ADJECTIVE, PosTag.DETERMINER,
    PosTag.NUMBER, PosTag.PRONOUN, PosTag.OTHER, PosTag.PAST_PARTICIPLE,
}
_NP_START_TAGS = {
    PosTag.NOUN, PosTag.PROPER_NOUN, PosTag.ADJECTIVE, PosTag.DETERMINER,
    PosTag.NUMBER, PosTag.PRONOUN, PosTag.OTHER,
}


@dataclass
class Clause:
    verb: VerbGroup
    subject: str | None = None
    object: str | None = None
    complement: str | None = None
    adverbials: list[str] = field(default_factory=list)
    is_fallback_object: bool = False
    nested: list["Clause"] = field(default_factory=list)
    parent_sentence: Sentence | None = None
    obligatory_adverbial: bool = False

    @property
    def verb_text(self) -> str:
        return self.verb.text

    @property
    def verb_display(self) -> str:
        """Head verb as tabulated: surface form, 'P - ' prefix when passive."""
        head = self.verb.head.text
        return f"P - {head}" if self.verb.is_passive else head

    @property
    def pattern(self) -> str:
        letters = ""
        if self.subject:
            letters += "S"
        letters += "V"
        if self.object:
            letters += "O"
        if self.complement:
            letters += "C"
        if self.obligatory_adverbial and self.adverbials:
            letters += "A"
        return letters

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "subject": self.subject,
            "verb": self.verb_text,
            "verb_head": self.verb.head.text,
            "is_passive": self.verb.is_passive,
            "object": self.object,
            "complement": self.complement,
            "adverbials": list(self.adverbials),
            "is_fallback_object": self.is_fallback_object,
            "nested": [c.to_dict() for c in self.nested],
        }


def _collapse(text: str) -> str:
    return " ".join(text.split())


class _Extractor:
    def __init__(self, text: str, tokens: list[Token], lexicon: Lexicon):
        self.text = text
        self.tokens = tokens
        self.lexicon = lexicon
        self.groups = scan_verb_groups(tokens, lexicon)
        self._by_span = {t.span: i for i, t in enumerate(tokens)}

    def group_range(self, vg: VerbGroup) -> tuple[int, int]:
        lo = self._by_span[vg.tokens[0].span]
        hi = self._by_span[vg.tokens[-1].span]
        return lo, hi + 1

    def groups_in(self, lo: int, hi: int) -> list[VerbGroup]:
        out = []
        for g in self.groups:
            g_lo, g_hi = self.group_range(g)
            if lo <= g_lo and g_hi <= hi:
                out.append(g)
        return out

    def slice(self, tok_lo: int, tok_hi: int, trim: str = " ,;.") -> str:
        if tok_lo >= tok_hi:
            return ""
        a = self.tokens[tok_lo].span[0]
        b = self.tokens[tok_hi - 1].span[1]
        return _collapse(self.text[a:b]).strip(trim + " ")

    def trim_tail(self, lo: int, hi: int) -> tuple[int, int]:
        while hi > lo and self.tokens[hi - 1].tag == PosTag.PUNCTUATION:
            hi -= 1
        while lo < hi and self.tokens[lo].tag == PosTag.PUNCTUATION:
            lo += 1
        return lo, hi

    def subject_before(self, lo: int, v_lo: int) -> tuple[int, int]:
        """Maximal noun phrase immediately preceding the verb group."""
        j = v_lo - 1
        while j >= lo:
            tok = self.tokens[j]
            if tok.tag in _NP_TAGS and tok.tag != PosTag.PAST_PARTICIPLE:
                j -= 1
                continue
            if tok.tag == PosTag.PREPOSITION and tok.lower in _NP_PREPOSITIONS:
                j -= 1
                continue
            if tok.tag == PosTag.CONJUNCTION and tok.lower in ("and", "or"):
                j -= 1
                continue
            break
        start = j + 1
        # a subject must not open with a connective or preposition
        while start < v_lo and (
            self.tokens[start].lower in ("and", "or")
            or self.tokens[start].tag == PosTag.PREPOSITION
        ):
            start += 1
        return start, v_lo

    def comma_segments(self, lo: int, hi: int) -> list[tuple[int, int]]:
        segs = []
        depth = 0
        start = lo
        for i in range(lo, hi):
            t = self.tokens[i]
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth = max(0, depth - 1)
            elif t.text in (",", ";") and depth == 0:
                segs.append((start, i))
                start = i + 1
        segs.append((start, hi))
        return [(a, b) for a, b in segs if a < b]

    def split_adverbials(self, lo: int, hi: int) -> list[str]:
        """Split a prepositional tail at clause-level adverbial openers."""
        bounds = [lo]
        depth = 0
        for i in range(lo + 1, hi):
            t = self.tokens[i]
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth = max(0, depth - 1)
            elif (depth == 0 and t.tag == PosTag.PREPOSITION
                  and t.lower in _ADVERBIAL_OPENERS
                  and self.tokens[i - 1].tag != PosTag.PREPOSITION):
                bounds.append(i)
        bounds.append(hi)
        out = []
        for a, b in zip(bounds, bounds[1:]):
            s = self.slice(a, b)
            if s:
                out.append(s)
        return out

    def capture_object(self, lo: int, hi: int) -> tuple[str, list[str], int, tuple[int, int] | None]:
        """Object run plus trailing comma-delimited adverbials.

        Returns (object text, adverbials, consumed token end, remainder
        range). "of"-continuations straight after the object are absorbed
        into it; a non-prepositional comma segment after an adverbial
        stops the capture and becomes the remainder.
        """
        segs = self.comma_segments(lo, hi)
        obj_lo, obj_hi = segs[0]
        adverbials: list[str] = []
        consumed = obj_hi
        remainder = None
        for a, b in segs[1:]:
            first = self.tokens[a]
            second = self.tokens[a + 1] if a + 1 < b else None
            if first.tag == PosTag.PREPOSITION and first.lower in _ADVERBIAL_OPENERS:
                adverbials.append(self.slice(a, b))
                consumed = b
                continue
            of_led = (
                first.lower == "of"
                or (first.lower in ("and", "or") and second is not None
                    and second.lower == "of")
            )
            if of_led and not adverbials:
                obj_hi = b
                consumed = b
                continue
            remainder = (a, hi)
            break
        return self.slice(obj_lo, obj_hi), adverbials, consumed, remainder

    def extract(self, lo: int, hi: int, inherited_subject: str | None = None) -> Clause | None:
        groups = self.groups_in(lo, hi)
        if not groups:
            return None
        vg = groups[0]
        v_lo, v_hi = self.group_range(vg)

        s_lo, s_hi = self.subject_before(lo, v_lo)
        subject = self.slice(s_lo, s_hi) or inherited_subject or None

        clause = Clause(verb=vg, subject=subject)
        t_lo, t_hi = self.trim_tail(v_hi, hi)
        self._consumed_end = v_hi
        self._remainder = None
        if t_lo >= t_hi:
            return clause

        first = self.tokens[t_lo]

        if vg.is_passive:
            # objects of passives go undetected; keep the tail as adverbials
            clause.adverbials = self.split_adverbials(t_lo, t_hi)
            self._consumed_end = t_hi
            return clause

        if first.lower == "that" and first.tag == PosTag.CONJUNCTION:
            nested = self.extract(t_lo + 1, t_hi)
            if nested is None:
                clause.object = self.slice(t_lo, t_hi)
                clause.is_fallback_object = True
                self._consumed_end = t_hi
                return clause
            nested_end = self._consumed_end
            remainder = self._remainder
            clause.complement = self.slice(t_lo, nested_end)
            clause.nested = [nested]
            if remainder:
                clause.object = self.slice(remainder[0], remainder[1])
            self._consumed_end = t_hi
            self._remainder = None
            return clause

        if first.tag == PosTag.PREPOSITION:
            clause.adverbials = self.split_adverbials(t_lo, t_hi)
            clause.obligatory_adverbial = vg.head.lemma == "be"
            self._consumed_end = t_hi
            return clause

        if first.tag in _NP_START_TAGS:
            text, adverbials, consumed, remainder = self.capture_object(t_lo, t_hi)
            if vg.head.lemma == "be":
                clause.complement = text
            else:
                clause.object = text
            clause.adverbials = adverbials
            self._consumed_end = consumed
            self._remainder = remainder
            return clause

        if first.tag == PosTag.ADVERB:
            # adverb-led tail: consume adverbs, then retry the rest
            j = t_lo
            while j < t_hi and self.tokens[j].tag == PosTag.ADVERB:
                j += 1
            adv = self.slice(t_lo, j)
            if adv:
                clause.adverbials.append(adv)
            if j < t_hi:
                rest = self.extract_tail_into(clause, j, t_hi)
                if rest:
                    return clause
            self._consumed_end = t_hi
            return clause

        # nothing recognizable: entire tail after the verb is the object
        clause.object = self.slice(t_lo, t_hi)
        clause.is_fallback_object = True
        self._consumed_end = t_hi
        return clause

    def extract_tail_into(self, clause: Clause, lo: int, hi: int) -> bool:
        first = self.tokens[lo]
        if first.tag == PosTag.PREPOSITION:
            clause.adverbials.extend(self.split_adverbials(lo, hi))
            self._consumed_end = hi
            return True
        if first.tag in _NP_START_TAGS:
            text, adverbials, consumed, remainder = self.capture_object(lo, hi)
            if clause.verb.head.lemma == "be":
                clause.complement = text
            else:
                clause.object = text
            clause.adverbials.extend(adverbials)
            self._consumed_end = consumed
            self._remainder = remainder
            return True
        return False

    def top_segments(self) -> list[tuple[int, int]]:
        """Split coordinated main clauses on clause-level and/or/; joints."""
        n = len(self.tokens)
        if not self.groups:
            return [(0, n)]
        _, first_end = self.group_range(self.groups[0])
        modal_starts = {
            self.group_range(g)[0] for g in self.groups if g.modal is not None
        }
        bounds = [0]
        depth = 0
        seen_that = False
        for i in range(first_end, n):
            t = self.tokens[i]
            if t.text == "(":
                depth += 1
            elif t.text == ")":
                depth = max(0, depth - 1)
            elif t.lower == "that" and t.tag == PosTag.CONJUNCTION:
                seen_that = True
            elif (depth == 0 and not seen_that
                  and t.lower in ("and", "or", ";")):
                if any(j in modal_starts for j in range(i + 1, min(i + 5, n))):
                    bounds.append(i + 1)
        bounds.append(n)
        return [(a, b) for a, b in zip(bounds, bounds[1:]) if a < b]


def fallback_object(sentence: Sentence | str, vg: VerbGroup) -> str:
    """Sentence suffix strictly after the verb group, final stop trimmed."""
    text = sentence.text if isinstance(sentence, Sentence) else sentence
    tail = text[vg.end:].strip()
    tail = tail.rstrip(".").strip().lstrip(",;").strip()
    if not tail:
        raise EmptyTail(f"verb group {vg.text!r} ends the sentence")
    return _collapse(tail)


def extract_clauses(
    sentence: Sentence | str,
    lexicon: Lexicon | None = None,
    gazetteer: Gazetteer | None = None,
) -> list[Clause]:
    """Extract the clauses of one sentence, nested clauses included.

    The returned list is flat, in textual order, with nested clauses both
    attached to their parent and present in the list (mirroring one record
    per clause downstream). Raises Unextractable when no verb group exists.
    """
    sent = sentence if isinstance(sentence, Sentence) else Sentence(text=sentence)
    lexicon = lexicon or default_lexicon()
    tokens = tag(tokenize(sent.text), lexicon, gazetteer or default_gazetteer())
    ex = _Extractor(sent.text, tokens, lexicon)
    if not ex.groups:
        raise Unextractable(f"no verb group in: {sent.text!r}")

    clauses: list[Clause] = []
    prev_subject: str | None = None
    for lo, hi in ex.top_segments():
        clause = ex.extract(lo, hi, inherited_subject=prev_subject)
        if clause is None:
            continue
        prev_subject = clause.subject or prev_subject
        clauses.append(clause)

    if not clauses:
        raise Unextractable(f"no clause extracted from: {sent.text!r}")

    flat: list[Clause] = []

    def walk(c: Clause) -> None:
        c.parent_sentence = sent
        flat.append(c)
        for sub in c.nested:
            walk(sub)

    for c in clauses:
        walk(c)
    return flat
