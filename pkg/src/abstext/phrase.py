"""Grammatical phrases and their linearization to surface text.

Renderers do not produce strings directly; they produce Phrase trees
carrying a grammatical type and agreement features. Linearization is the
single place that decides spacing, punctuation attachment, sentence
capitalization and the terminal period, so every renderer stays
deterministic byte-for-byte.
"""

from dataclasses import dataclass

from .errors import AbstextError, INCOMPLETE_PHRASE, UNSUPPORTED_LANGUAGE
from .values import Features

GRAMMATICAL_TYPES = (
    "text-fragment", "noun-phrase", "modifier", "clause", "sentence", "article-text",
)

#: tokens that attach to the previous token without a space
_NO_SPACE_BEFORE = {",", ".", ";", ":", "!", "?"}

_CONJUNCTIONS = {"en": "and", "de": "und"}


@dataclass(frozen=True)
class MissingPart:
    """Marks a required phrase slot whose surface form is unavailable.

    A phrase containing one anywhere is incomplete, and the owning
    sentence gets omitted instead of crashing the whole render.
    """
    reason: str
    path: str | None = None


@dataclass(frozen=True)
class Phrase:
    gtype: str
    parts: tuple = ()
    features: Features = Features()
    dependency_group: str | None = None

    def __post_init__(self):
        if self.gtype not in GRAMMATICAL_TYPES:
            raise ValueError(f"unknown grammatical type {self.gtype!r}")


def phrase(gtype, *parts, features=None, dependency_group=None) -> Phrase:
    return Phrase(gtype, tuple(parts), features or Features(), dependency_group)


def missing_parts(p) -> list:
    """Collect every MissingPart in a phrase tree, left to right."""
    if isinstance(p, MissingPart):
        return [p]
    if isinstance(p, Phrase):
        out = []
        for part in p.parts:
            out.extend(missing_parts(part))
        return out
    return []


def is_complete(p) -> bool:
    return not missing_parts(p)


def _tokens(p, out):
    if isinstance(p, str):
        if p:
            out.append(p)
    elif isinstance(p, Phrase):
        for part in p.parts:
            _tokens(part, out)
    elif isinstance(p, MissingPart):
        raise AbstextError(INCOMPLETE_PHRASE,
                           f"phrase is incomplete: {p.reason}", path=p.path)
    else:
        raise AbstextError(INCOMPLETE_PHRASE, f"cannot linearize part {p!r}")


def linearize(p: Phrase, language: str | None = None) -> str:
    """Turn a complete phrase into surface text.

    Single spaces between tokens, none before punctuation; sentences get
    an initial capital and a terminal period.
    """
    gaps = missing_parts(p)
    if gaps:
        first = gaps[0]
        raise AbstextError(INCOMPLETE_PHRASE,
                           f"phrase is incomplete: {first.reason}", path=first.path)
    toks: list[str] = []
    _tokens(p, toks)
    pieces: list[str] = []
    for tok in toks:
        if pieces and tok not in _NO_SPACE_BEFORE:
            pieces.append(" ")
        pieces.append(tok)
    text = "".join(pieces)
    if p.gtype == "sentence" and text:
        text = text[0].upper() + text[1:]
        if not text.endswith((".", "!", "?")):
            text += "."
    return text


def join_list(values, language: str, style: str = "plain") -> Phrase:
    """Join phrases or words with language-appropriate conjunctions.

    style 'serial' puts a comma before the conjunction (English
    three-or-more lists); 'plain' does not. A single element is returned
    unchanged apart from the wrapping fragment.
    """
    if language not in _CONJUNCTIONS:
        raise AbstextError(UNSUPPORTED_LANGUAGE,
                           f"no list conjunction for language {language!r}")
    items = list(values)
    if not items:
        return Phrase("text-fragment")
    if len(items) == 1:
        return Phrase("text-fragment", (items[0],))
    conj = _CONJUNCTIONS[language]
    parts: list = []
    for i, item in enumerate(items):
        if i == 0:
            parts.append(item)
        elif i < len(items) - 1:
            parts += [",", item]
        else:
            if style == "serial" and len(items) > 2:
                parts.append(",")
            parts += [conj, item]
    return Phrase("text-fragment", tuple(parts))


def apply_dependency_clusters(sentences):
    """Post-process per-sentence outcomes so dependent text disappears
    together.

    `sentences` is a list of (phrase, omission_reason_or_None). Sentences
    sharing a dependency_group form one cluster: if any member is
    omitted, every member is omitted.
    """
    dead_groups = set()
    for p, reason in sentences:
        if reason is not None and p is not None and p.dependency_group:
            dead_groups.add(p.dependency_group)
    out = []
    for p, reason in sentences:
        if reason is None and p is not None and p.dependency_group in dead_groups:
            out.append((p, f"requires omitted text (group {p.dependency_group})"))
        else:
            out.append((p, reason))
    return out
