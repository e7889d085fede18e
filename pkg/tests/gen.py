"""Seeded random generators for round-trip and fuzz testing."""

import random

from abstext.model import Call, Content, ItemRef

_ITEMS = ["Q62", "Q65", "Q99", "Q515", "Q1066807", "Q1613416", "Q16552", "Q16553",
          "Q1", "Q42", "Q777", "Q123456789"]
_MODIFIERS = ["cultural", "commercial", "financial"]
_NOUNS = ["center"]


def _item(rng):
    return ItemRef(rng.choice(_ITEMS))


def _modifier_call(rng):
    return Call("And_modifier", {
        "conjuncts": tuple(Call(m) for m in
                           rng.sample(_MODIFIERS, rng.randint(1, len(_MODIFIERS))))})


def _np_call(rng):
    args = {"object": rng.choice([Call(rng.choice(_NOUNS)), _item(rng)])}
    if rng.random() < 0.7:
        args["modifier"] = _modifier_call(rng)
    if rng.random() < 0.7:
        args["of"] = _item(rng)
    return Call("Object_with_modifier_and_of", args)


def _instantiation(rng):
    return Call("Instantiation", {"instance": _item(rng), "class": _np_call(rng)})


def _ranking(rng):
    args = {
        "subject": _item(rng),
        "rank": rng.randint(1, 20),
        "object": rng.choice([ItemRef("Q515"), Call("center")]),
        "by": ItemRef("Q1613416"),
    }
    if rng.random() < 0.8:
        args["local_constraint"] = _item(rng)
    if rng.random() < 0.8:
        args["after"] = tuple(_item(rng) for _ in range(rng.randint(1, 4)))
    return Call("Ranking", args)


def random_valid_content(rng: random.Random) -> Content:
    """A content tree that validates against the shipped catalog."""
    sentences = tuple(rng.choice([_instantiation, _ranking])(rng)
                      for _ in range(rng.randint(1, 4)))
    return Content(Call("Article", {"content": sentences}))


# -- arbitrary value trees (parser/serializer round-trip beyond the catalog) --

_NAME_CHARS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_"
_TEXT_POOL = "abc ÄÖüß€→ \t\"\\\n,:()[]0129المدينة城市"


def _random_name(rng):
    # never Q<digits>, which would lex as an item id
    name = rng.choice(_NAME_CHARS)
    name += "".join(rng.choice(_NAME_CHARS + "0123456789")
                    for _ in range(rng.randint(0, 8)))
    if name[0] == "Q" and name[1:].isdigit():
        name += "x"
    return name


def random_value(rng: random.Random, depth: int = 0):
    roll = rng.random()
    if depth >= 4 or roll < 0.35:
        return rng.choice([
            rng.randint(0, 10**9),
            "".join(rng.choice(_TEXT_POOL) for _ in range(rng.randint(0, 12))),
            ItemRef(rng.choice(_ITEMS)),
        ])
    if roll < 0.55:
        return tuple(random_value(rng, depth + 1) for _ in range(rng.randint(0, 4)))
    named = {_random_name(rng): random_value(rng, depth + 1)
             for _ in range(rng.randint(0, 3))}
    positional = tuple(random_value(rng, depth + 1) for _ in range(rng.randint(0, 2)))
    return Call(_random_name(rng), named, positional)


def random_garbage(rng: random.Random) -> str:
    """Random byte strings decoded leniently, plus token soup."""
    kind = rng.random()
    if kind < 0.5:
        raw = bytes(rng.randrange(256) for _ in range(rng.randint(0, 64)))
        return raw.decode("utf-8", "replace")
    tokens = ["(", ")", "[", "]", ",", ":", '"', "Q62", "123", "name", "Article",
              '"text', "\\", "\n", " ", "ü", "-", "?", "content:"]
    return "".join(rng.choice(tokens) for _ in range(rng.randint(0, 24)))
