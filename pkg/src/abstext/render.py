"""Rendering: validated content to per-language text via phrase-building
renderer functions hosted in the registry.

Every lexical lookup and every renderer is an ordinary registry function,
so rendering is pure, memoized and inspectable. Missing data surfaces as
MissingPart markers inside phrases; sentences containing one are omitted
from the output with a reason, never crashing the article.
"""

from dataclasses import dataclass

from .catalog import validate
from .errors import (AbstextError, NO_RENDERER, OUT_OF_TABLE, PRECONDITION_FAILED,
                     UNKNOWN_CONSTRUCTOR, UNKNOWN_ITEM, UNKNOWN_LEXEME,
                     UNSUPPORTED_LANGUAGE, VALIDATION_FAILED)
from .model import Call, Content, ItemRef
from .phrase import (GRAMMATICAL_TYPES, MissingPart, Phrase, apply_dependency_clusters,
                     join_list, linearize, missing_parts)
from .registry import FunctionDef, Implementation, Param, Registry, SemanticType
from .values import Absent, EnumRef, Features, MissingForm

#: error codes that mean "data gap", converted to MissingForm during rendering
_GAP_CODES = {OUT_OF_TABLE, UNKNOWN_ITEM, UNKNOWN_LEXEME, PRECONDITION_FAILED}

_PHRASE_TYPES = {"phrase"} | set(GRAMMATICAL_TYPES)


@dataclass(frozen=True)
class LanguagePack:
    """Renderer set manifest for one language: constructor id to renderer
    function id, plus the closed-class bits agreement needs."""
    language: str
    renderers: dict
    copula_lexeme: str | None = None
    pronoun: str | None = None  # neuter third person, for repeated subjects

    def to_doc(self) -> dict:
        return {"kind": "renderer-set", "language": self.language,
                "renderers": dict(self.renderers),
                "copula_lexeme": self.copula_lexeme, "pronoun": self.pronoun}

    @classmethod
    def from_doc(cls, doc: dict) -> "LanguagePack":
        return cls(language=doc["language"], renderers=dict(doc.get("renderers", {})),
                   copula_lexeme=doc.get("copula_lexeme"), pronoun=doc.get("pronoun"))


@dataclass(frozen=True)
class Omission:
    path: str
    reason: str

    def to_dict(self) -> dict:
        return {"path": self.path, "reason": self.reason}


@dataclass(frozen=True)
class RenderOutcome:
    text: str
    omissions: tuple = ()
    complete: bool = True

    def to_dict(self) -> dict:
        return {"text": self.text, "omissions": [o.to_dict() for o in self.omissions],
                "complete": self.complete}


# -- small helpers ---------------------------------------------------------

def _form(ctx, fn_id, *args):
    """Call a lexical function, turning data-gap errors into MissingForm."""
    try:
        return ctx.call(fn_id, *args)
    except AbstextError as exc:
        if exc.code in _GAP_CODES:
            return MissingForm(exc.message)
        raise


def _part(x):
    """Make a value usable as a phrase part."""
    if isinstance(x, MissingForm):
        return MissingPart(x.reason)
    return x


def _pack(ctx, language: str) -> LanguagePack:
    pack = ctx.services.manifests.get(language)
    if pack is None or not pack.renderers:
        raise AbstextError(UNSUPPORTED_LANGUAGE,
                           f"no renderer set for language {language!r}")
    return pack


# -- lexical and phrase builtins --------------------------------------------

def _bi_label(ctx, item, language):
    return ctx.services.entities.get_label(item.qid, language).text


def _bi_lookup_form(ctx, lexeme_id, features):
    return ctx.services.lexicon.lookup_form(lexeme_id, features)


def _bi_ordinal(ctx, n, language):
    return ctx.services.lexicon.ordinal(n, language)


def _bi_superlative(ctx, concept, language):
    return ctx.services.lexicon.superlative(concept, language)


def _bi_inflect_np(ctx, ref, case, language):
    entities = ctx.services.entities

    def fallback(r, lang):
        if isinstance(r, ItemRef) and entities.has(r.qid):
            return entities.get_label(r.qid, lang).text
        return None

    return ctx.services.lexicon.inflect_np(ref, case, language, label_fallback=fallback)


def _bi_article_form(ctx, definiteness, gender, language):
    return ctx.services.lexicon.article(definiteness, gender, language)


def _bi_gender_of(ctx, ref, language):
    return ctx.services.lexicon.gender_of(ref, language)


def _bi_noun_of(ctx, concept, language):
    return ctx.services.lexicon.noun_form(concept, language)


#: attributive adjective slots are desk-scale fixed per language:
#: English positives, German weak declension after a definite article
_ADJECTIVE_BUNDLES = {
    "en": Features(degree="positive"),
    "de": Features(case="nominative", definiteness="definite"),
}


def _bi_attributive_adjective(ctx, concept, language):
    bundle = _ADJECTIVE_BUNDLES.get(language)
    if bundle is None:
        raise AbstextError(UNSUPPORTED_LANGUAGE,
                           f"no adjective declension rule for {language!r}")
    return ctx.services.lexicon.adjective_form(concept, language, bundle)


def _bi_pronoun_or_name(ctx, subject, prior, language):
    """Within one article, a subject repeated from the previous sentence
    becomes the language's neuter third-person pronoun."""
    feats = Features(person=3, number="sg")
    if prior is not Absent and prior == subject:
        word = _pack(ctx, language).pronoun
        part = word if word else MissingPart(f"no pronoun configured for {language}")
    else:
        part = _part(_form(ctx, "label", subject, language))
    return Phrase("noun-phrase", (part,), features=feats)


def _bi_copula_agree(ctx, subject_phrase, language):
    """Copula inflected to agree with the subject phrase's features."""
    pack = _pack(ctx, language)
    bundle = Features(person=subject_phrase.features.get("person", 3),
                      number=subject_phrase.features.get("number", "sg"),
                      tense="present")
    if not pack.copula_lexeme:
        part = MissingPart(f"no copula lexeme configured for {language}")
    else:
        part = _part(_form(ctx, "lookup_form", pack.copula_lexeme, bundle))
    return Phrase("text-fragment", (part,), features=bundle)


def _bi_list_join(ctx, items, language, style):
    return join_list(items, language, style)


def _bi_sentence_phrase(ctx, parts):
    return Phrase("sentence", tuple(parts))


def _bi_make_phrase(ctx, gtype, parts):
    return Phrase(gtype, tuple(parts))


# -- renderer builtins -------------------------------------------------------

def _ordinal_superlative(ctx, rank, by, language, joiner):
    ordw = _form(ctx, "ordinal", rank, language)
    sup = _form(ctx, "superlative", by, language)
    if isinstance(ordw, MissingForm):
        return MissingPart(ordw.reason)
    if isinstance(sup, MissingForm):
        return MissingPart(sup.reason)
    return f"{ordw}{joiner}{sup}"


def _labels(ctx, items, language):
    return [_part(_form(ctx, "label", it, language)) for it in items]


def _bi_ranking_en(ctx, subject, rank, object_ref, by, local_constraint, after,
                   prior_subject):
    subj = ctx.call("pronoun_or_name", subject, prior_subject, "en")
    cop = ctx.call("copula_agree", subj, "en")
    parts = [subj, cop, "the",
             _ordinal_superlative(ctx, rank, by, "en", "-"),
             _part(_form(ctx, "noun_of", object_ref, "en"))]
    if local_constraint is not Absent:
        parts += ["in", _part(_form(ctx, "label", local_constraint, "en"))]
    if after is not Absent and after:
        parts += [",", "after",
                  ctx.call("list_join", _labels(ctx, after, "en"), "en", "plain")]
    return Phrase("sentence", tuple(parts))


def _bi_ranking_de(ctx, subject, rank, object_ref, by, local_constraint, after,
                   prior_subject):
    subj = ctx.call("pronoun_or_name", subject, prior_subject, "de")
    cop = ctx.call("copula_agree", subj, "de")
    parts = [subj, cop]
    if after is not Absent and after:
        parts += [",", "nach",
                  ctx.call("list_join", _labels(ctx, after, "de"), "de", "plain"), ","]
    gender = _form(ctx, "gender_of", object_ref, "de")
    if isinstance(gender, MissingForm):
        article = MissingPart(gender.reason)
    else:
        article = _part(_form(ctx, "article_form", "definite", gender, "de"))
    parts += [article,
              _ordinal_superlative(ctx, rank, by, "de", ""),
              _part(_form(ctx, "noun_of", object_ref, "de"))]
    if local_constraint is not Absent:
        parts += ["in", _part(_form(ctx, "inflect_np", local_constraint, "dative", "de"))]
    return Phrase("sentence", tuple(parts))


def _bi_np_with_modifier_and_of_en(ctx, object_ref, modifier, of):
    parts = ["the"]
    if modifier is not Absent:
        parts.append(modifier)
    parts.append(_part(_form(ctx, "noun_of", object_ref, "en")))
    if of is not Absent:
        parts += ["of", _part(_form(ctx, "label", of, "en"))]
    return Phrase("noun-phrase", tuple(parts), features=Features(person=3, number="sg"))


def _bi_np_with_modifier_and_of_de(ctx, object_ref, modifier, of):
    gender = _form(ctx, "gender_of", object_ref, "de")
    if isinstance(gender, MissingForm):
        article = MissingPart(gender.reason)
        feats = Features(person=3, number="sg")
    else:
        article = _part(_form(ctx, "article_form", "definite", gender, "de"))
        feats = Features(person=3, number="sg", gender=gender)
    parts = [article]
    if modifier is not Absent:
        parts.append(modifier)
    parts.append(_part(_form(ctx, "noun_of", object_ref, "de")))
    if of is not Absent:
        parts.append(_part(_form(ctx, "inflect_np", of, "genitive", "de")))
    return Phrase("noun-phrase", tuple(parts), features=feats)


def _modifier_conjunction(ctx, conjuncts, language, style):
    words = [_part(_form(ctx, "attributive_adjective", c, language)) for c in conjuncts]
    return Phrase("modifier", (join_list(words, language, style),))


def _bi_modifier_conjunction_en(ctx, conjuncts):
    # the serial comma: "cultural, commercial, and financial"
    return _modifier_conjunction(ctx, conjuncts, "en", "serial")


def _bi_modifier_conjunction_de(ctx, conjuncts):
    return _modifier_conjunction(ctx, conjuncts, "de", "plain")


# -- render pipeline -----------------------------------------------------------

def _default_enum_phrase(ctx, spec, language):
    """Zero-key constructors render through their lexicalization when no
    renderer is listed for them."""
    ref = EnumRef(spec.id)
    if spec.result_type == "modifier":
        part = _part(_form(ctx, "attributive_adjective", ref, language))
    else:
        part = _part(_form(ctx, "noun_of", ref, language))
    gtype = spec.result_type if spec.result_type in GRAMMATICAL_TYPES else "text-fragment"
    return Phrase(gtype, (part,))


def _to_phrase(ctx, value, language):
    """Coerce an argument value into a Phrase for phrase-typed renderer
    parameters; failures become incomplete phrases, not exceptions."""
    if isinstance(value, Phrase):
        return value
    if isinstance(value, str):
        return Phrase("text-fragment", (value,))
    if isinstance(value, int) and not isinstance(value, bool):
        return Phrase("text-fragment", (str(value),))
    if isinstance(value, ItemRef):
        part = _part(_form(ctx, "label", value, language))
        return Phrase("noun-phrase", (part,), features=Features(person=3, number="sg"))
    if isinstance(value, Call):
        spec = ctx.services.catalog.get(value.name)
        if spec is not None:
            gtype = spec.result_type if spec.result_type in GRAMMATICAL_TYPES else "text-fragment"
            try:
                return ctx.call("render_constructor", value, language, Absent)
            except AbstextError as exc:
                if exc.code in (NO_RENDERER, UNKNOWN_CONSTRUCTOR):
                    return Phrase(gtype, (MissingPart(exc.message),))
                raise
        result = ctx.registry._eval_expr(value, {}, ctx)
        return _to_phrase(ctx, result, language)
    return Phrase("text-fragment", (MissingPart(f"cannot phrase {value!r}"),))


def _prep_arg(ctx, value, param, language):
    if param.type in _PHRASE_TYPES:
        return _to_phrase(ctx, value, language)
    if isinstance(value, Call):
        spec = ctx.services.catalog.get(value.name)
        if spec is not None:
            if spec.is_enum:
                return EnumRef(value.name)
            return _to_phrase(ctx, value, language)
        # function-call values are executed and replaced by their result
        return ctx.registry._eval_expr(value, {}, ctx)
    if isinstance(value, tuple):
        return tuple(_prep_arg(ctx, v, param, language) for v in value)
    return value


def _bi_render_constructor(ctx, node, language, prior_subject):
    catalog = ctx.services.catalog
    pack = _pack(ctx, language)
    spec = catalog.get(node.name)
    if spec is None:
        raise AbstextError(UNKNOWN_CONSTRUCTOR, f"no constructor {node.name!r}")
    fn_id = pack.renderers.get(node.name)
    if fn_id is None:
        if spec.is_enum:
            return _default_enum_phrase(ctx, spec, language)
        raise AbstextError(NO_RENDERER,
                           f"no {language} renderer for constructor {node.name!r}")
    fn = ctx.registry.get(fn_id)
    args = []
    for p in fn.params:
        if p.name == "prior_subject":
            args.append(prior_subject)
        elif p.name == "language":
            args.append(language)
        elif p.name in node.args:
            args.append(_prep_arg(ctx, node.args[p.name], p, language))
        else:
            args.append(Absent)
    result = ctx.call(fn_id, *args)
    if not isinstance(result, Phrase):
        raise AbstextError(NO_RENDERER,
                           f"renderer {fn_id!r} did not produce a phrase")
    return result


def _subject_of(call: Call):
    for key in ("instance", "subject"):
        value = call.args.get(key)
        if isinstance(value, ItemRef):
            return value
    return None


def _bi_render(ctx, root, language):
    catalog = ctx.services.catalog
    _pack(ctx, language)  # UNSUPPORTED_LANGUAGE before anything else
    diagnostics = validate(Content(root), catalog, ctx.registry)
    if diagnostics:
        raise AbstextError(VALIDATION_FAILED,
                           f"content has {len(diagnostics)} validation problem(s)",
                           details={"diagnostics": [d.to_dict() for d in diagnostics]})
    spec = catalog.get(root.name)
    sentence_key, sentences = None, ()
    for key in spec.keys:
        value = root.args.get(key.id)
        if isinstance(value, tuple):
            sentence_key, sentences = key.id, value
            break
    rendered: list = []  # (phrase | None, reason | None)
    prior_subject = None
    for node in sentences:
        try:
            p = ctx.call("render_constructor", node, language,
                         prior_subject if prior_subject is not None else Absent)
        except AbstextError as exc:
            if exc.code in (NO_RENDERER, UNKNOWN_CONSTRUCTOR):
                rendered.append((None, exc.message))
                continue
            raise
        gaps = missing_parts(p)
        if gaps:
            rendered.append((p, gaps[0].reason))
        else:
            rendered.append((p, None))
            subject = _subject_of(node) if isinstance(node, Call) else None
            if subject is not None:
                prior_subject = subject
    rendered = apply_dependency_clusters(rendered)
    texts, omissions = [], []
    for i, (p, reason) in enumerate(rendered):
        path = f"{sentence_key}[{i}]"
        if reason is not None:
            omissions.append(Omission(path, reason))
        else:
            texts.append(linearize(p, language))
    return RenderOutcome(" ".join(texts), tuple(omissions), not omissions)


# -- registration ----------------------------------------------------------------

_HELPER_BUILTINS = {
    "label": _bi_label,
    "lookup_form": _bi_lookup_form,
    "ordinal": _bi_ordinal,
    "superlative": _bi_superlative,
    "inflect_np": _bi_inflect_np,
    "article_form": _bi_article_form,
    "gender_of": _bi_gender_of,
    "noun_of": _bi_noun_of,
    "attributive_adjective": _bi_attributive_adjective,
    "pronoun_or_name": _bi_pronoun_or_name,
    "copula_agree": _bi_copula_agree,
    "list_join": _bi_list_join,
    "sentence_phrase": _bi_sentence_phrase,
    "make_phrase": _bi_make_phrase,
    "render_constructor": _bi_render_constructor,
    "render": _bi_render,
    "ranking_sentence_en": _bi_ranking_en,
    "ranking_sentence_de": _bi_ranking_de,
    "np_with_modifier_and_of_en": _bi_np_with_modifier_and_of_en,
    "np_with_modifier_and_of_de": _bi_np_with_modifier_and_of_de,
    "modifier_conjunction_en": _bi_modifier_conjunction_en,
    "modifier_conjunction_de": _bi_modifier_conjunction_de,
}


def _native(fn_id: str) -> list:
    return [Implementation("native", "builtin", builtin=fn_id)]


def _helper_defs():
    from .notation import parse_value_text
    ranking_params = (
        Param("subject", "item"), Param("rank", "positive_integer"),
        Param("object", "ref"), Param("by", "ref"),
        Param("local_constraint", "item", optional=True),
        Param("after", "list", optional=True),
        Param("prior_subject", "item", optional=True),
    )
    nmo_params = (
        Param("object", "ref"), Param("modifier", "modifier", optional=True),
        Param("of", "item", optional=True),
    )
    instantiation_params = (
        Param("instance", "item"), Param("class", "phrase"),
        Param("prior_subject", "item", optional=True),
    )

    def instantiation_composition(language: str) -> Implementation:
        expr = parse_value_text(
            'sentence_phrase(parts: ['
            f'pronoun_or_name(instance, prior_subject, "{language}"), '
            f'copula_agree(pronoun_or_name(instance, prior_subject, "{language}"), '
            f'"{language}"), '
            'class])')
        return Implementation("composed", "composition", expr=expr)

    return [
        FunctionDef("label", params=(Param("item", "item"), Param("language", "text")),
                    return_type="text", implementations=_native("label")),
        FunctionDef("lookup_form",
                    params=(Param("lexeme", "text"), Param("features", "bundle")),
                    return_type="form", implementations=_native("lookup_form")),
        FunctionDef("ordinal",
                    params=(Param("n", "positive_integer"), Param("language", "text")),
                    return_type="text",
                    preconditions=(parse_value_text("greater_equal(n, 1)"),),
                    implementations=_native("ordinal")),
        FunctionDef("superlative",
                    params=(Param("concept", "ref"), Param("language", "text")),
                    return_type="form", implementations=_native("superlative")),
        FunctionDef("inflect_np",
                    params=(Param("ref", "ref"), Param("case", "text"),
                            Param("language", "text")),
                    return_type="form", implementations=_native("inflect_np")),
        FunctionDef("article_form",
                    params=(Param("definiteness", "text"), Param("gender", "text"),
                            Param("language", "text")),
                    return_type="form", implementations=_native("article_form")),
        FunctionDef("gender_of",
                    params=(Param("ref", "ref"), Param("language", "text")),
                    return_type="form", implementations=_native("gender_of")),
        FunctionDef("noun_of",
                    params=(Param("concept", "ref"), Param("language", "text")),
                    return_type="form", implementations=_native("noun_of")),
        FunctionDef("attributive_adjective",
                    params=(Param("concept", "ref"), Param("language", "text")),
                    return_type="form", implementations=_native("attributive_adjective")),
        FunctionDef("pronoun_or_name",
                    params=(Param("subject", "item"),
                            Param("prior", "item", optional=True),
                            Param("language", "text")),
                    return_type="noun-phrase", implementations=_native("pronoun_or_name")),
        FunctionDef("copula_agree",
                    params=(Param("subject", "phrase"), Param("language", "text")),
                    return_type="phrase", implementations=_native("copula_agree")),
        FunctionDef("list_join",
                    params=(Param("items", "list"), Param("language", "text"),
                            Param("style", "text")),
                    return_type="phrase", implementations=_native("list_join")),
        FunctionDef("sentence_phrase", params=(Param("parts", "list"),),
                    return_type="sentence", implementations=_native("sentence_phrase")),
        FunctionDef("make_phrase",
                    params=(Param("gtype", "text"), Param("parts", "list")),
                    return_type="phrase", implementations=_native("make_phrase")),
        FunctionDef("render_constructor",
                    params=(Param("node", "content"), Param("language", "text"),
                            Param("prior_subject", "item", optional=True)),
                    return_type="phrase",
                    implementations=_native("render_constructor")),
        FunctionDef("render",
                    params=(Param("content", "content"), Param("language", "text")),
                    return_type="outcome", implementations=_native("render")),
        # renderer functions referenced by the shipped manifests
        FunctionDef("ranking_sentence_en", params=ranking_params,
                    return_type="sentence", implementations=_native("ranking_sentence_en")),
        FunctionDef("ranking_sentence_de", params=ranking_params,
                    return_type="sentence", implementations=_native("ranking_sentence_de")),
        FunctionDef("np_with_modifier_and_of_en", params=nmo_params,
                    return_type="noun-phrase",
                    implementations=_native("np_with_modifier_and_of_en")),
        FunctionDef("np_with_modifier_and_of_de", params=nmo_params,
                    return_type="noun-phrase",
                    implementations=_native("np_with_modifier_and_of_de")),
        FunctionDef("modifier_conjunction_en", params=(Param("conjuncts", "list"),),
                    return_type="modifier",
                    implementations=_native("modifier_conjunction_en")),
        FunctionDef("modifier_conjunction_de", params=(Param("conjuncts", "list"),),
                    return_type="modifier",
                    implementations=_native("modifier_conjunction_de")),
        # instantiation sentences are plain compositions over the helpers
        FunctionDef("instantiation_sentence_en", params=instantiation_params,
                    return_type="sentence",
                    implementations=[instantiation_composition("en")]),
        FunctionDef("instantiation_sentence_de", params=instantiation_params,
                    return_type="sentence",
                    implementations=[instantiation_composition("de")]),
    ]


def install_rendering(registry: Registry):
    """Register phrase types, lexical helpers and renderer functions."""
    for gtype in GRAMMATICAL_TYPES:
        registry.register_type(SemanticType(
            gtype, lambda v, g=gtype: isinstance(v, Phrase) and v.gtype == g))
    registry.register_type(SemanticType("phrase", lambda v: isinstance(v, Phrase)))
    registry.register_type(SemanticType("content", lambda v: isinstance(v, Call)))
    registry.register_type(SemanticType("outcome", lambda v: isinstance(v, RenderOutcome)))
    for name, fn in _HELPER_BUILTINS.items():
        registry.register_builtin(name, fn)
    for fn_def in _helper_defs():
        registry.register(fn_def)
