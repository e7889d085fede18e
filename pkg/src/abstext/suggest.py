"""Rule-based text-to-content suggestions for the editor's magic input box.

Deliberately low-tech: a handful of sentence patterns whose slots are
resolved against the entity store and lexicon. A suggestion is only a
first pass for the author to refine, so precision beats coverage and an
empty result is the normal no-match signal. Suggesting never mutates
any store.
"""

import re
from dataclasses import dataclass

from .catalog import validate
from .model import Call, Content, ItemRef, ITEM_ID_RE
from .notation import serialize_content


@dataclass(frozen=True)
class Candidate:
    content: str  # notation text of the suggested skeleton
    constructor_id: str
    score: float
    diagnostics: tuple

    def to_dict(self) -> dict:
        return {"content": self.content, "constructor_id": self.constructor_id,
                "score": self.score, "diagnostics": [d.to_dict() for d in self.diagnostics]}


def _resolve_item(engine, text: str, language: str):
    word = text.strip().rstrip(".,")
    if ITEM_ID_RE.fullmatch(word):
        return ItemRef(word)
    item = engine.entities.find_by_label(word, language)
    return ItemRef(item.id) if item else None


def _resolve_noun_concept(engine, word: str, language: str):
    """A head noun is either an item (by label) or an enumeration value
    (by the lemma of a concept-linked lexeme)."""
    item = engine.entities.find_by_label(word, language)
    if item is not None:
        return ItemRef(item.id)
    concept = engine.lexicon.find_concept_by_lemma(word, language, "noun")
    if concept is not None and not ITEM_ID_RE.fullmatch(concept):
        return Call(concept)
    return None


_RANKING = re.compile(
    r"(?P<subject>.+?) is the (?P<rank>[A-Za-z]+)-most "
    r"(?P<by>[A-Za-z]+) (?P<object>[A-Za-z]+) in (?P<constraint>.+?)\.?")

_INSTANTIATION_OF = re.compile(
    r"(?P<subject>.+?) is the (?P<modifiers>.+?) (?P<object>[A-Za-z]+) of (?P<of>.+?)\.?")


def _build_ranking(engine, m, language: str):
    subject = _resolve_item(engine, m.group("subject"), language)
    rank = engine.lexicon.ordinal_value(m.group("rank").lower(), language)
    by = engine.lexicon.find_superlative_concept(m.group("by").lower(), language)
    obj = _resolve_noun_concept(engine, m.group("object").lower(), language)
    constraint = _resolve_item(engine, m.group("constraint"), language)
    if None in (subject, rank, by, obj, constraint):
        return None
    by_ref = ItemRef(by) if ITEM_ID_RE.fullmatch(by) else Call(by)
    return Call("Ranking", {
        "subject": subject, "rank": rank, "object": obj, "by": by_ref,
        "local_constraint": constraint,
    })


def _split_modifiers(text: str) -> list:
    return [w for w in re.split(r",\s*(?:and\s+)?|\s+and\s+", text.strip()) if w]


def _build_instantiation_of(engine, m, language: str):
    subject = _resolve_item(engine, m.group("subject"), language)
    obj = _resolve_noun_concept(engine, m.group("object").lower(), language)
    of = _resolve_item(engine, m.group("of"), language)
    if None in (subject, obj, of):
        return None
    conjuncts = []
    for word in _split_modifiers(m.group("modifiers")):
        concept = engine.lexicon.find_concept_by_lemma(word.lower(), language, "adjective")
        if concept is None or ITEM_ID_RE.fullmatch(concept):
            return None
        conjuncts.append(Call(concept))
    np_args = {"object": obj, "of": of}
    if conjuncts:
        np_args["modifier"] = Call("And_modifier", {"conjuncts": tuple(conjuncts)})
    return Call("Instantiation", {
        "instance": subject,
        "class": Call("Object_with_modifier_and_of", np_args),
    })


_RULES = (
    (_RANKING, _build_ranking),
    (_INSTANTIATION_OF, _build_instantiation_of),
)


def suggest(engine, text: str, language: str) -> list:
    """Return ranked candidate content skeletons for a free-text sentence.

    Every candidate parses, and carries its own validation diagnostics;
    persisting it is the caller's (and the author's) decision.
    """
    text = (text or "").strip()
    if not text:
        return []
    candidates = []
    seen = set()
    for pattern, build in _RULES:
        m = pattern.fullmatch(text)
        if not m:
            continue
        call = build(engine, m, language)
        if call is None:
            continue
        notation = serialize_content(Content(call), engine.catalog)
        if notation in seen:
            continue
        seen.add(notation)
        diagnostics = tuple(validate(Content(call), engine.catalog, engine.registry,
                                     require_article_root=False))
        # all slots resolved; specificity = share of the text the fixed
        # (non-slot) part of the pattern covers
        slot_chars = sum(len(m.group(g)) for g in pattern.groupindex)
        score = round(1.0 - slot_chars / max(len(text), 1), 3)
        candidates.append(Candidate(notation, call.name, score, diagnostics))
    candidates.sort(key=lambda c: -c.score)
    return candidates
