"""File-backed lexicon: lexemes with inflected forms keyed by feature
bundles, ordinal tables, and the morphological helpers renderers use.

Lookups never fabricate forms. When a form, gender or lexicalization is
absent the helpers return a MissingForm value describing the gap, which
rendering turns into an omitted sentence instead of a failure.
"""

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (AbstextError, INVALID_DOCUMENT, OUT_OF_TABLE, UNKNOWN_LEXEME,
                     UNSUPPORTED_LANGUAGE)
from .model import ItemRef
from .values import EnumRef, Features, MissingForm

CATEGORIES = ("verb", "noun", "adjective", "proper-noun", "preposition", "article")

#: feature dimensions a form bundle may use, per category
_CATEGORY_DIMS = {
    "verb": {"person", "number", "tense"},
    "noun": {"case", "number"},
    "proper-noun": {"case", "number"},
    "adjective": {"degree", "case", "gender", "definiteness", "number"},
    "preposition": set(),
    "article": {"case", "gender", "definiteness", "number"},
}

#: closed-class article paradigms (nominative)
_ARTICLES = {
    "en": {"definite": {None: "the"}, "indefinite": {None: "a"}},
    "de": {
        "definite": {"m": "der", "f": "die", "n": "das"},
        "indefinite": {"m": "ein", "f": "eine", "n": "ein"},
    },
}

NOMINATIVE_SG = Features(case="nominative", number="sg")


@dataclass(frozen=True)
class Lexeme:
    id: str
    language: str
    lemma: str
    category: str
    forms: dict = field(default_factory=dict)  # Features -> str
    features: Features = Features()  # static, e.g. noun gender
    concept: str | None = None  # item id or enumeration id this lexicalizes

    def __post_init__(self):
        if not self.lemma:
            raise AbstextError(INVALID_DOCUMENT, f"lexeme {self.id!r} has an empty lemma")
        if self.category not in CATEGORIES:
            raise AbstextError(INVALID_DOCUMENT,
                               f"lexeme {self.id!r} has unknown category {self.category!r}")
        allowed = _CATEGORY_DIMS[self.category]
        for bundle in self.forms:
            bad = [d for d in bundle.to_dict() if d not in allowed]
            if bad:
                raise AbstextError(
                    INVALID_DOCUMENT,
                    f"form bundle of {self.id!r} uses {bad} not valid for {self.category!r}")

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "language": self.language,
            "lemma": self.lemma,
            "category": self.category,
            "features": self.features.to_dict(),
            "concept": self.concept,
            "forms": [{"features": b.to_dict(), "text": t}
                      for b, t in sorted(self.forms.items(), key=lambda kv: str(kv[0]))],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Lexeme":
        try:
            forms = {Features(**f["features"]): f["text"] for f in doc.get("forms", [])}
            return cls(id=doc["id"], language=doc["language"], lemma=doc["lemma"],
                       category=doc["category"], forms=forms,
                       features=Features(**doc.get("features", {})),
                       concept=doc.get("concept"))
        except (KeyError, ValueError) as exc:
            raise AbstextError(INVALID_DOCUMENT, f"bad lexeme document: {exc}") from None


def _concept_key(ref) -> str:
    if isinstance(ref, ItemRef):
        return ref.qid
    if isinstance(ref, EnumRef):
        return ref.id
    return str(ref)


class Lexicon:
    """In-memory lexeme store, reloadable from one document per lexeme."""

    def __init__(self):
        self._by_id: dict[str, Lexeme] = {}
        self._by_concept: dict[tuple, str] = {}  # (concept, language) -> lexeme id
        self._ordinals: dict[str, dict[int, str]] = {}
        self._lock = threading.Lock()

    # -- loading ---------------------------------------------------------

    def add(self, lexeme: Lexeme):
        with self._lock:
            self._by_id[lexeme.id] = lexeme
            if lexeme.concept:
                self._by_concept.setdefault((lexeme.concept, lexeme.language), lexeme.id)

    def link_concept(self, concept: str, language: str, lexeme_id: str):
        """Explicit lexicalization link (items point at their noun lexemes)."""
        with self._lock:
            self._by_concept[(concept, language)] = lexeme_id

    def delete(self, lexeme_id: str):
        with self._lock:
            lex = self._by_id.pop(lexeme_id, None)
            if lex is None:
                raise AbstextError(UNKNOWN_LEXEME, f"no lexeme {lexeme_id!r}")
            self._by_concept = {k: v for k, v in self._by_concept.items() if v != lexeme_id}

    def set_ordinals(self, language: str, entries: dict):
        with self._lock:
            self._ordinals[language] = {int(k): v for k, v in entries.items()}

    def delete_ordinal(self, language: str, n: int):
        with self._lock:
            self._ordinals.get(language, {}).pop(n, None)

    @classmethod
    def load_dir(cls, directory) -> "Lexicon":
        lx = cls()
        for f in sorted(Path(directory).glob("*.json")):
            doc = json.loads(f.read_text("utf-8"))
            if doc.get("kind") == "ordinal-table":
                lx.set_ordinals(doc["language"], doc["entries"])
            else:
                lx.add(Lexeme.from_doc(doc))
        return lx

    def lexemes(self):
        return list(self._by_id.values())

    def ordinal_languages(self):
        return sorted(self._ordinals)

    def get(self, lexeme_id: str) -> Lexeme:
        lex = self._by_id.get(lexeme_id)
        if lex is None:
            raise AbstextError(UNKNOWN_LEXEME, f"no lexeme {lexeme_id!r}")
        return lex

    def concept_lexeme(self, ref, language: str) -> Lexeme | None:
        lid = self._by_concept.get((_concept_key(ref), language))
        return self._by_id.get(lid) if lid else None

    # -- morphology ------------------------------------------------------

    def lookup_form(self, lexeme_id: str, features: Features):
        """Exact-bundle lookup. Absence is a MissingForm value, not an error."""
        lex = self.get(lexeme_id)
        form = lex.forms.get(features)
        if form is None:
            return MissingForm(f"lexeme {lexeme_id} ({lex.lemma}) has no form {features.to_dict()}")
        return form

    def ordinal(self, n: int, language: str) -> str:
        if language not in self._ordinals:
            raise AbstextError(UNSUPPORTED_LANGUAGE,
                               f"no ordinal table for language {language!r}")
        table = self._ordinals[language]
        if n not in table:
            raise AbstextError(OUT_OF_TABLE,
                               f"ordinal {n} is outside the {language} table")
        return table[n]

    def ordinal_value(self, word: str, language: str) -> int | None:
        """Reverse ordinal lookup used by the suggestion rules."""
        for n, w in self._ordinals.get(language, {}).items():
            if w == word:
                return n
        return None

    def superlative(self, ref, language: str):
        """Surface superlative for a ranking property, per language."""
        lex = self.concept_lexeme(ref, language)
        if lex is None:
            return MissingForm(f"no {language} lexicalization for {_concept_key(ref)}")
        for bundle, text in lex.forms.items():
            if bundle.get("degree") == "superlative":
                return text
        return MissingForm(f"lexeme {lex.id} ({lex.lemma}) has no superlative form")

    def noun_form(self, ref, language: str):
        """Nominative singular of the noun lexicalizing a concept."""
        lex = self.concept_lexeme(ref, language)
        if lex is None:
            return MissingForm(f"no {language} lexicalization for {_concept_key(ref)}")
        return self.lookup_form(lex.id, NOMINATIVE_SG)

    def adjective_form(self, ref, language: str, features: Features):
        lex = self.concept_lexeme(ref, language)
        if lex is None:
            return MissingForm(f"no {language} lexicalization for {_concept_key(ref)}")
        return self.lookup_form(lex.id, features)

    def inflect_np(self, ref, case: str, language: str, label_fallback=None):
        """Case-inflected surface form of a noun-phrase reference.

        Proper nouns without a stored paradigm fall back to their label,
        but only in the nominative; other cases need a stored form.
        """
        lex = self.concept_lexeme(ref, language)
        if lex is not None:
            form = lex.forms.get(Features(case=case, number="sg"))
            if form is not None:
                return form
            if case != "nominative":
                return MissingForm(
                    f"lexeme {lex.id} ({lex.lemma}) has no {case} form")
        if case == "nominative" and label_fallback is not None:
            label = label_fallback(ref, language)
            if label is not None:
                return label
        return MissingForm(f"no {language} {case} form for {_concept_key(ref)}")

    def article(self, definiteness: str, gender, language: str):
        """Nominative article form; desk scale keeps one closed-class
        paradigm per language in code."""
        if language not in _ARTICLES:
            raise AbstextError(UNSUPPORTED_LANGUAGE,
                               f"no article paradigm for language {language!r}")
        paradigm = _ARTICLES[language].get(definiteness)
        if paradigm is None:
            return MissingForm(f"no {definiteness!r} article in {language}")
        if None in paradigm:  # language does not mark gender
            return paradigm[None]
        form = paradigm.get(gender)
        if form is None:
            return MissingForm(f"no {language} article for gender {gender!r}")
        return form

    def gender_of(self, ref, language: str):
        """Static gender feature of a lexeme or of a concept's noun."""
        if isinstance(ref, str) and ref in self._by_id:
            lex = self._by_id[ref]
        else:
            lex = self.concept_lexeme(ref, language)
        if lex is None:
            return MissingForm(f"no {language} lexicalization for {_concept_key(ref)}")
        gender = lex.features.get("gender")
        if gender is None:
            return MissingForm(f"lexeme {lex.id} ({lex.lemma}) carries no gender")
        return gender

    # -- search (suggestion rules) ----------------------------------------

    def find_superlative_concept(self, word: str, language: str) -> str | None:
        """Concept whose superlative surface matches or ends with `word`."""
        for lex in self._by_id.values():
            if lex.language != language or not lex.concept:
                continue
            for bundle, text in lex.forms.items():
                if bundle.get("degree") == "superlative" and (
                        text == word or text.endswith(" " + word) or text.endswith(word)):
                    return lex.concept
        return None

    def find_concept_by_lemma(self, lemma: str, language: str,
                              category: str | None = None) -> str | None:
        for lex in self._by_id.values():
            if lex.language != language or not lex.concept:
                continue
            if category is not None and lex.category != category:
                continue
            if lex.lemma.lower() == lemma.lower():
                return lex.concept
        return None

    def save(self, directory, lexeme_id: str):
        lex = self.get(lexeme_id)
        path = Path(directory) / f"{lex.id}.json"
        path.write_text(json.dumps(lex.to_doc(), indent=2, ensure_ascii=False) + "\n", "utf-8")
