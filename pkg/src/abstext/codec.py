"""JSON encoding of runtime values.

Used for three things: memoization cache keys (canonical, sorted-keys
JSON), the HTTP evaluate endpoint, and test fixtures. Scalars and lists
map to plain JSON; everything else gets a single `$`-tagged wrapper.
"""

import json

from .errors import AbstextError, TYPE_ERROR
from .model import Call, Content, ItemRef
from .notation import parse_value_text, serialize_value
from .phrase import MissingPart, Phrase
from .values import Absent, EnumRef, Features, MissingForm


def to_jsonable(value):
    if value is Absent:
        return {"$absent": True}
    if isinstance(value, bool) or isinstance(value, int) or isinstance(value, str):
        return value
    if value is None:
        return {"$absent": True}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, ItemRef):
        return {"$item": value.qid}
    if isinstance(value, EnumRef):
        return {"$enum": value.id}
    if isinstance(value, MissingForm):
        return {"$missing": value.reason}
    if isinstance(value, Features):
        return {"$features": value.to_dict()}
    if isinstance(value, MissingPart):
        return {"$missing_part": {"reason": value.reason, "path": value.path}}
    if isinstance(value, Phrase):
        return {"$phrase": {
            "gtype": value.gtype,
            "features": value.features.to_dict(),
            "parts": [to_jsonable(p) for p in value.parts],
            "dependency_group": value.dependency_group,
        }}
    if isinstance(value, (Call, Content)):
        node = value.root if isinstance(value, Content) else value
        return {"$content": serialize_value(node)}
    if hasattr(value, "to_dict"):
        return {"$object": value.to_dict()}
    raise AbstextError(TYPE_ERROR, f"value {value!r} is not encodable")


def from_jsonable(data):
    if isinstance(data, bool) or isinstance(data, int) or isinstance(data, str):
        return data
    if isinstance(data, list):
        return tuple(from_jsonable(v) for v in data)
    if isinstance(data, dict):
        if "$absent" in data:
            return Absent
        if "$item" in data:
            return ItemRef(data["$item"])
        if "$enum" in data:
            return EnumRef(data["$enum"])
        if "$missing" in data:
            return MissingForm(data["$missing"])
        if "$features" in data:
            return Features(**data["$features"])
        if "$missing_part" in data:
            raw = data["$missing_part"]
            return MissingPart(raw["reason"], raw.get("path"))
        if "$phrase" in data:
            raw = data["$phrase"]
            return Phrase(raw["gtype"], tuple(from_jsonable(p) for p in raw["parts"]),
                          Features(**raw.get("features", {})), raw.get("dependency_group"))
        if "$content" in data:
            return parse_value_text(data["$content"])
    raise AbstextError(TYPE_ERROR, f"cannot decode value {data!r}")


def canonical_key(fn_id: str, args) -> str:
    """Stable cache key for a function call."""
    return json.dumps([fn_id, [to_jsonable(a) for a in args]],
                      sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def value_tree(value) -> dict:
    """Structural read model of a content value for UI clients.

    Unlike to_jsonable (which round-trips through the notation), this
    exposes the tree shape directly so a form can be built from it."""
    if isinstance(value, bool):
        raise AbstextError(TYPE_ERROR, "booleans do not occur in content")
    if isinstance(value, int):
        return {"kind": "integer", "value": value}
    if isinstance(value, str):
        return {"kind": "text", "value": value}
    if isinstance(value, ItemRef):
        return {"kind": "item", "id": value.qid}
    if isinstance(value, tuple):
        return {"kind": "list", "items": [value_tree(v) for v in value]}
    if isinstance(value, (Call, Content)):
        node = value.root if isinstance(value, Content) else value
        return {"kind": "call", "constructor": node.name,
                "arguments": {k: value_tree(v) for k, v in node.args.items()}}
    raise AbstextError(TYPE_ERROR, f"value {value!r} has no tree form")
