"""Constructor catalog: schemas for content nodes, plus validation.

Each constructor spec lists its keys, whether they are required, which
value types each key accepts, and the grammatical type its rendering
produces. Zero-key constructors double as enumeration values.

Validation never throws on bad content; it reports every problem as a
Diagnostic with a path into the tree.
"""

import json
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .errors import AbstextError, DUPLICATE_ID, INVALID_DOCUMENT
from .model import Call, Content, ItemRef, format_path, iter_item_refs

GRAMMATICAL_TYPES = (
    "text-fragment", "noun-phrase", "modifier", "clause", "sentence", "article-text",
)

# diagnostic codes
UNKNOWN_CONSTRUCTOR = "UNKNOWN_CONSTRUCTOR"
UNKNOWN_KEY = "UNKNOWN_KEY"
MISSING_REQUIRED_KEY = "MISSING_REQUIRED_KEY"
TYPE_MISMATCH = "TYPE_MISMATCH"
POSITIONAL_ARGS = "POSITIONAL_ARGS"
INVALID_ROOT = "INVALID_ROOT"


@dataclass(frozen=True)
class TypeDesc:
    """One accepted-value descriptor for a key.

    kind: integer | text | item | enum-of | list-of | constructor
    arg:  grammatical type id for enum-of/constructor, nested TypeDesc
          for list-of, None otherwise.
    """
    kind: str
    arg: "TypeDesc | str | None" = None

    def __str__(self):
        if self.kind == "list-of":
            return f"list-of({self.arg})"
        if self.kind == "enum-of":
            return f"enum-of({self.arg})"
        if self.kind == "constructor":
            return f"constructor({self.arg})"
        return self.kind


_DESC_RE = re.compile(r"(enum-of|list-of|constructor)\((.+)\)")


def parse_type_desc(text: str) -> TypeDesc:
    text = text.strip()
    if text in ("integer", "text", "item"):
        return TypeDesc(text)
    m = _DESC_RE.fullmatch(text)
    if not m:
        raise AbstextError(INVALID_DOCUMENT, f"bad type descriptor {text!r}")
    kind, inner = m.group(1), m.group(2)
    if kind == "list-of":
        return TypeDesc(kind, parse_type_desc(inner))
    if inner not in GRAMMATICAL_TYPES:
        raise AbstextError(INVALID_DOCUMENT,
                           f"{kind} wants a grammatical type, got {inner!r}")
    return TypeDesc(kind, inner)


@dataclass(frozen=True)
class KeySpec:
    id: str
    required: bool
    accepted: tuple  # of TypeDesc, non-empty
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.accepted:
            raise AbstextError(INVALID_DOCUMENT, f"key {self.id!r} accepts no types")


@dataclass(frozen=True)
class ConstructorSpec:
    id: str
    result_type: str
    keys: tuple = ()
    labels: dict = field(default_factory=dict)
    doc: str = ""

    def __post_init__(self):
        ids = [k.id for k in self.keys]
        if len(ids) != len(set(ids)):
            raise AbstextError(INVALID_DOCUMENT, f"duplicate key ids in {self.id!r}")
        if self.result_type not in GRAMMATICAL_TYPES:
            raise AbstextError(INVALID_DOCUMENT,
                               f"{self.id!r} has unknown result type {self.result_type!r}")

    @property
    def is_enum(self) -> bool:
        return not self.keys

    def key(self, key_id: str):
        for k in self.keys:
            if k.id == key_id:
                return k
        return None

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "labels": dict(self.labels),
            "doc": self.doc,
            "result_type": self.result_type,
            "keys": [
                {"id": k.id, "labels": dict(k.labels), "required": k.required,
                 "accepted": [str(d) for d in k.accepted]}
                for k in self.keys
            ],
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ConstructorSpec":
        try:
            keys = tuple(
                KeySpec(
                    id=k["id"],
                    required=bool(k.get("required", False)),
                    accepted=tuple(parse_type_desc(d) for d in k["accepted"]),
                    labels=dict(k.get("labels", {})),
                )
                for k in doc.get("keys", [])
            )
            return cls(id=doc["id"], result_type=doc["result_type"], keys=keys,
                       labels=dict(doc.get("labels", {})), doc=doc.get("doc", ""))
        except KeyError as exc:
            raise AbstextError(INVALID_DOCUMENT,
                               f"constructor document missing field {exc}") from None


@dataclass(frozen=True)
class Diagnostic:
    path: tuple
    code: str
    message: str

    @property
    def where(self) -> str:
        return format_path(self.path)

    def to_dict(self) -> dict:
        return {"path": self.where, "code": self.code, "message": self.message}


class Catalog:
    """The mutable set of constructor specs. Reads are lock-free; writes
    are serialized so live editing stays safe."""

    def __init__(self, specs=()):
        self._specs: dict[str, ConstructorSpec] = {}
        self._lock = threading.Lock()
        for spec in specs:
            self.add(spec)

    def __contains__(self, constructor_id: str) -> bool:
        return constructor_id in self._specs

    def __iter__(self):
        return iter(self._specs.values())

    def __len__(self):
        return len(self._specs)

    def get(self, constructor_id: str):
        return self._specs.get(constructor_id)

    def add(self, spec: ConstructorSpec):
        with self._lock:
            if spec.id in self._specs:
                raise AbstextError(DUPLICATE_ID, f"constructor {spec.id!r} already defined")
            self._specs[spec.id] = spec

    def replace(self, spec: ConstructorSpec):
        with self._lock:
            self._specs[spec.id] = spec

    def article_constructors(self):
        return [s for s in self._specs.values() if s.result_type == "article-text"]

    @classmethod
    def load_dir(cls, directory) -> "Catalog":
        cat = cls()
        for f in sorted(Path(directory).glob("*.json")):
            cat.add(ConstructorSpec.from_doc(json.loads(f.read_text("utf-8"))))
        return cat

    def save(self, directory, constructor_id: str):
        spec = self._specs[constructor_id]
        path = Path(directory) / f"{spec.id}.json"
        path.write_text(json.dumps(spec.to_doc(), indent=2, ensure_ascii=False) + "\n", "utf-8")


def _matches(value, desc: TypeDesc, catalog: Catalog, registry) -> bool:
    if isinstance(value, Call):
        spec = catalog.get(value.name)
        if spec is not None:
            if desc.kind == "enum-of":
                return spec.is_enum and spec.result_type == desc.arg
            if desc.kind == "constructor":
                return spec.result_type == desc.arg
            return False
        # function call: executed before rendering, so accept it wherever
        # its declared return type fits
        if registry is not None and value.name in registry:
            rt = registry.get(value.name).return_type
            return registry.type_satisfies_descriptor(rt, desc)
        return False
    if desc.kind == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if desc.kind == "text":
        return isinstance(value, str)
    if desc.kind == "item":
        return isinstance(value, ItemRef)
    if desc.kind == "list-of":
        return isinstance(value, tuple) and all(
            _matches(el, desc.arg, catalog, registry) for el in value)
    return False


def validate(content: Content, catalog: Catalog, registry=None, *,
             require_article_root: bool = True) -> list:
    """Validate a content tree against the catalog.

    Returns a (possibly empty) list of Diagnostics; never raises on bad
    content, so an editor can show every problem at once.
    """
    diagnostics: list[Diagnostic] = []
    root = content.root if isinstance(content, Content) else content

    if require_article_root:
        root_spec = catalog.get(root.name)
        if root_spec is not None and root_spec.result_type != "article-text":
            diagnostics.append(Diagnostic(
                (), INVALID_ROOT,
                f"root constructor {root.name!r} renders {root_spec.result_type!r}, "
                f"not an article"))

    def visit(value, path):
        if isinstance(value, tuple):
            for i, el in enumerate(value):
                visit(el, path + (i,))
            return
        if not isinstance(value, Call):
            return
        spec = catalog.get(value.name)
        if spec is None:
            if registry is not None and value.name in registry:
                for i, arg in enumerate(value.positional):
                    visit(arg, path + (i,))
                for key, arg in value.args.items():
                    visit(arg, path + (key,))
                return
            diagnostics.append(Diagnostic(
                path, UNKNOWN_CONSTRUCTOR,
                f"{value.name!r} is neither a constructor nor a function"))
            return
        if value.positional:
            diagnostics.append(Diagnostic(
                path, POSITIONAL_ARGS,
                f"constructor {value.name!r} takes named arguments only"))
        for key in spec.keys:
            if key.required and key.id not in value.args:
                diagnostics.append(Diagnostic(
                    path + (key.id,), MISSING_REQUIRED_KEY,
                    f"{value.name!r} requires key {key.id!r}"))
        for key_id, arg in value.args.items():
            key = spec.key(key_id)
            if key is None:
                diagnostics.append(Diagnostic(
                    path + (key_id,), UNKNOWN_KEY,
                    f"{value.name!r} has no key {key_id!r}"))
            elif not any(_matches(arg, d, catalog, registry) for d in key.accepted):
                wanted = " | ".join(str(d) for d in key.accepted)
                diagnostics.append(Diagnostic(
                    path + (key_id,), TYPE_MISMATCH,
                    f"value for {key_id!r} does not match accepted types ({wanted})"))
            visit(arg, path + (key_id,))

    visit(root, ())
    return diagnostics


def check_item_refs(content: Content, store) -> list:
    """List every item reference not present in the entity store."""
    missing = []
    for path, ref in iter_item_refs(content):
        if not store.has(ref.qid):
            missing.append(Diagnostic(path, "UNKNOWN_ITEM",
                                      f"item {ref.qid} is not in the entity store"))
    return missing
