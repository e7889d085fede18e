"""Entity store: item identifiers resolved to per-language labels.

Stands in for the external knowledge base. Backed by one JSON document
per item; an optional remote client can fetch entities from a live
endpoint, but everything here runs offline on fixtures by default.
"""

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (AbstextError, INVALID_DOCUMENT, NETWORK_ERROR, PARSE_ERROR,
                     UNKNOWN_ITEM)
from .model import ITEM_ID_RE


@dataclass(frozen=True)
class Item:
    id: str
    labels: dict  # language -> text
    lexemes: dict = field(default_factory=dict)  # language -> lexeme id

    def __post_init__(self):
        if not ITEM_ID_RE.fullmatch(self.id):
            raise AbstextError(INVALID_DOCUMENT, f"invalid item id {self.id!r}")
        if not self.labels:
            raise AbstextError(INVALID_DOCUMENT, f"item {self.id} has no labels")

    def to_doc(self) -> dict:
        doc = {"id": self.id, "labels": dict(self.labels)}
        if self.lexemes:
            doc["lexemes"] = dict(self.lexemes)
        return doc

    @classmethod
    def from_doc(cls, doc: dict) -> "Item":
        if not isinstance(doc, dict) or "id" not in doc or "labels" not in doc:
            raise AbstextError(PARSE_ERROR, "item document needs 'id' and 'labels'")
        return cls(id=doc["id"], labels=dict(doc["labels"]),
                   lexemes=dict(doc.get("lexemes", {})))


@dataclass(frozen=True)
class Label:
    text: str
    language: str
    fallback: bool  # true when the requested language had no label


class EntityStore:
    """Items by id; concurrent reads, serialized writes."""

    def __init__(self):
        self._items: dict[str, Item] = {}
        self._lock = threading.Lock()

    def __len__(self):
        return len(self._items)

    def __iter__(self):
        return iter(self._items.values())

    def has(self, item_id: str) -> bool:
        return item_id in self._items

    def get(self, item_id: str) -> Item:
        item = self._items.get(item_id)
        if item is None:
            raise AbstextError(UNKNOWN_ITEM, f"no item {item_id!r}")
        return item

    def upsert(self, item: Item):
        with self._lock:
            self._items[item.id] = item

    def get_label(self, item_id: str, language: str) -> Label:
        """Label with fallback chain: requested language, then en, then
        any labeled language; fallback use is flagged."""
        item = self.get(item_id)
        if language in item.labels:
            return Label(item.labels[language], language, False)
        if "en" in item.labels:
            return Label(item.labels["en"], "en", True)
        lang = sorted(item.labels)[0]
        return Label(item.labels[lang], lang, True)

    def find_by_label(self, text: str, language: str) -> Item | None:
        """Reverse lookup, used by the suggestion rules and autocomplete."""
        wanted = text.strip().lower()
        for item in self._items.values():
            for lang in (language, "en"):
                if item.labels.get(lang, "").lower() == wanted:
                    return item
        return None

    def search(self, query: str, language: str, limit: int = 10) -> list:
        q = query.strip().lower()
        out = []
        if not q:
            return out
        for item in sorted(self._items.values(), key=lambda it: it.id):
            label = item.labels.get(language) or item.labels.get("en") or ""
            if q in label.lower():
                out.append(item)
            if len(out) >= limit:
                break
        return out

    def import_items(self, source) -> int:
        """Idempotent upsert from a parsed document (one item or a list).

        The whole document is checked before anything is applied, so a
        malformed entry leaves the store untouched.
        """
        if isinstance(source, dict):
            source = [source]
        if not isinstance(source, list):
            raise AbstextError(PARSE_ERROR, "item import wants an object or a list")
        parsed = [Item.from_doc(doc) for doc in source]
        for item in parsed:
            self.upsert(item)
        return len(parsed)

    def import_file(self, path) -> int:
        try:
            data = json.loads(Path(path).read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise AbstextError(PARSE_ERROR, f"cannot read item document: {exc}") from None
        return self.import_items(data)

    @classmethod
    def load_dir(cls, directory) -> "EntityStore":
        store = cls()
        for f in sorted(Path(directory).glob("*.json")):
            store.import_file(f)
        return store

    def save(self, directory, item_id: str):
        item = self.get(item_id)
        path = Path(directory) / f"{item.id}.json"
        path.write_text(json.dumps(item.to_doc(), indent=2, ensure_ascii=False) + "\n", "utf-8")


class EntityClient:
    """Optional remote fetcher mapping a public entity API response onto
    Item. Disabled unless configured; tests inject a fake transport."""

    def __init__(self, base_url: str = "", enabled: bool = False, transport=None):
        self.base_url = base_url.rstrip("/")
        self.enabled = enabled
        self._transport = transport or self._default_transport

    def _default_transport(self, url: str) -> dict:
        import urllib.request
        try:
            with urllib.request.urlopen(url, timeout=10) as resp:
                return json.loads(resp.read().decode("utf-8"))
        except Exception as exc:
            raise AbstextError(NETWORK_ERROR, f"entity fetch failed: {exc}") from None

    def fetch_remote(self, item_id: str) -> Item:
        if not self.enabled or not self.base_url:
            raise AbstextError(NETWORK_ERROR, "remote entity fetch is disabled")
        data = self._transport(f"{self.base_url}/{item_id}.json")
        entity = (data.get("entities") or {}).get(item_id)
        if entity is None:
            raise AbstextError(UNKNOWN_ITEM, f"remote has no entity {item_id!r}")
        labels = {lang: v.get("value", "") for lang, v in (entity.get("labels") or {}).items()}
        labels = {k: v for k, v in labels.items() if v}
        if not labels:
            raise AbstextError(PARSE_ERROR, f"remote entity {item_id!r} carries no labels")
        return Item(id=item_id, labels=labels)
