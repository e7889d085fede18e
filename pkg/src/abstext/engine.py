"""Engine: loads a data directory and wires the pipeline together.

Data directory layout (all documents are plain JSON, content is the
abstract notation):

    constructors/*.json     one constructor spec per file
    functions/*.json        function documents and renderer-set manifests
    lexemes/*.json          lexeme documents and ordinal tables
    items/*.json            entity items
    content/*.abstract      stored abstract content, one article per file

Any mutation clears the evaluation cache, since renderers are pure only
relative to the loaded catalog, lexicon and entity data.
"""

import json
import threading
import uuid
from dataclasses import dataclass
from pathlib import Path

from .catalog import Catalog, ConstructorSpec, check_item_refs, validate
from .config import Config
from .entities import EntityClient, EntityStore, Item
from .errors import AbstextError, CONTENT_NOT_FOUND, INVALID_DOCUMENT
from .funclib import install_core
from .lexicon import Lexeme, Lexicon
from .model import Content, ItemRef, edit_value
from .notation import parse_content, serialize_content
from .registry import Registry
from .render import LanguagePack, RenderOutcome, install_rendering


@dataclass
class Services:
    """What builtins can reach during evaluation."""
    catalog: Catalog
    lexicon: Lexicon
    entities: EntityStore
    manifests: dict  # language -> LanguagePack


def default_data_dir() -> Path:
    from importlib.resources import files
    return Path(str(files("abstext") / "data"))


class Engine:
    """One loaded workspace: catalog, lexicon, entities, functions and
    stored content, with rendering and evaluation on top."""

    def __init__(self, data_dir=None, config: Config | None = None):
        self.config = config or Config()
        raw = data_dir or self.config.data_dir
        self.data_dir = Path(raw) if raw else default_data_dir()
        self._lock = threading.RLock()
        self.reload()

    # -- loading ---------------------------------------------------------

    def reload(self):
        with self._lock:
            base = self.data_dir
            self.catalog = Catalog.load_dir(base / "constructors")
            self.lexicon = Lexicon.load_dir(base / "lexemes")
            self.entities = EntityStore.load_dir(base / "items")
            self.remote = EntityClient(self.config.remote_base_url,
                                       self.config.remote_fetch)
            # items may carry explicit noun lexicalization links
            for item in self.entities:
                for language, lexeme_id in item.lexemes.items():
                    self.lexicon.link_concept(item.id, language, lexeme_id)
            registry = Registry(cache_capacity=self.config.cache_capacity,
                                depth_limit=self.config.depth_limit,
                                check_postconditions=self.config.check_postconditions)
            install_core(registry)
            install_rendering(registry)
            manifests: dict[str, LanguagePack] = {}
            deferred = []
            for f in sorted((base / "functions").glob("*.json")):
                doc = json.loads(f.read_text("utf-8"))
                if doc.get("kind") == "renderer-set":
                    pack = LanguagePack.from_doc(doc)
                    manifests[pack.language] = pack
                else:
                    deferred.append(registry.load_doc(doc, defer_implementations=True))
            # second pass so compositions may reference any documented function
            for fn_id, impls in deferred:
                for impl in impls:
                    registry.add_implementation(fn_id, impl)
            registry.services = Services(self.catalog, self.lexicon,
                                         self.entities, manifests)
            self.registry = registry
            self.manifests = manifests
            self._content: dict[str, str] = {}
            self._parsed: dict[str, Content] = {}
            content_dir = base / "content"
            if content_dir.is_dir():
                for f in sorted(content_dir.glob("*.abstract")):
                    self._content[f.stem] = f.read_text("utf-8")

    def invalidate(self):
        """Drop memoized results after any data mutation."""
        self.registry.clear_cache()
        self._parsed.clear()

    # -- content ------------------------------------------------------------

    def languages(self) -> list:
        return sorted(self.manifests)

    def content_ids(self) -> list:
        return sorted(self._content)

    def get_content_text(self, content_id: str) -> str:
        text = self._content.get(content_id)
        if text is None:
            raise AbstextError(CONTENT_NOT_FOUND, f"no content {content_id!r}")
        return text

    def get_content(self, content_id: str) -> Content:
        cached = self._parsed.get(content_id)
        if cached is None:
            cached = parse_content(self.get_content_text(content_id))
            self._parsed[content_id] = cached
        return cached

    def derive_content_id(self, content: Content) -> str:
        """One article per item: the first sentence's subject item names
        the content; anything else gets a scratch id."""
        spec = self.catalog.get(content.root.name)
        if spec is not None and spec.result_type == "article-text":
            for value in content.root.args.values():
                if isinstance(value, tuple):
                    for node in value:
                        if hasattr(node, "args"):
                            for key in ("instance", "subject"):
                                ref = node.args.get(key)
                                if isinstance(ref, ItemRef):
                                    return ref.qid
        return f"scratch-{uuid.uuid4().hex[:12]}"

    def put_content(self, text: str, content_id: str | None = None,
                    persist: bool = True):
        """Parse, store and validate a content document.

        Returns (id, diagnostics). Diagnostics do not block storage: the
        editor keeps drafts server-side while the author fixes them.
        """
        content = parse_content(text)  # syntax errors propagate
        cid = content_id or self.derive_content_id(content)
        with self._lock:
            self._content[cid] = text
            self._parsed[cid] = content
            if persist and not cid.startswith("scratch-"):
                directory = self.data_dir / "content"
                if directory.is_dir():
                    (directory / f"{cid}.abstract").write_text(text, "utf-8")
        self.registry.clear_cache()
        return cid, self.validate(content)

    def edit_content(self, content_id: str, path, new_value):
        """Non-destructive edit: stores the result as a scratch document
        and returns (new_id, text, diagnostics). The original stays, so a
        client can undo by switching back."""
        content = self.get_content(content_id)
        edited = edit_value(content, path, new_value)
        text = serialize_content(edited, self.catalog)
        cid = f"scratch-{uuid.uuid4().hex[:12]}"
        with self._lock:
            self._content[cid] = text
            self._parsed[cid] = edited
        return cid, text, self.validate(edited)

    # -- pipeline operations ---------------------------------------------------

    def validate(self, content: Content, *, require_article_root: bool = True) -> list:
        return validate(content, self.catalog, self.registry,
                        require_article_root=require_article_root)

    def missing_items(self, content: Content) -> list:
        return check_item_refs(content, self.entities)

    def render(self, content, language: str) -> RenderOutcome:
        """Render stored content (by id) or a Content tree."""
        if isinstance(content, str):
            content = self.get_content(content)
        return self.registry.evaluate("render", [content.root, language])

    def evaluate(self, fn_id: str, args, **kw):
        return self.registry.evaluate(fn_id, args, **kw)

    def suggest(self, text: str, language: str) -> list:
        from .suggest import suggest
        return suggest(self, text, language)

    # -- catalog mutation --------------------------------------------------------

    def _write_doc(self, subdir: str, name: str, doc: dict):
        directory = self.data_dir / subdir
        if directory.is_dir():
            path = directory / f"{name}.json"
            path.write_text(json.dumps(doc, indent=2, ensure_ascii=False) + "\n", "utf-8")

    def put_constructor(self, doc: dict) -> str:
        spec = ConstructorSpec.from_doc(doc)
        self.catalog.replace(spec)
        self._write_doc("constructors", spec.id, doc)
        self.invalidate()
        return spec.id

    def put_lexeme(self, doc: dict) -> str:
        lexeme = Lexeme.from_doc(doc)
        self.lexicon.add(lexeme)
        self._write_doc("lexemes", lexeme.id, doc)
        self.invalidate()
        return lexeme.id

    def delete_lexeme(self, lexeme_id: str):
        self.lexicon.delete(lexeme_id)
        path = self.data_dir / "lexemes" / f"{lexeme_id}.json"
        if path.exists():
            path.unlink()
        self.invalidate()

    def fetch_item(self, item_id: str) -> Item:
        """Pull one entity from the configured remote endpoint and upsert
        it locally. Disabled unless the config enables remote fetch."""
        item = self.remote.fetch_remote(item_id)
        self.put_item(item.to_doc())
        return item

    def put_item(self, doc: dict) -> str:
        item = Item.from_doc(doc)
        self.entities.upsert(item)
        for language, lexeme_id in item.lexemes.items():
            self.lexicon.link_concept(item.id, language, lexeme_id)
        self._write_doc("items", item.id, doc)
        self.invalidate()
        return item.id

    def put_function(self, doc: dict) -> str:
        if doc.get("kind") == "renderer-set":
            pack = LanguagePack.from_doc(doc)
            self.manifests[pack.language] = pack
            self._write_doc("functions", f"renderers-{pack.language}", doc)
            self.invalidate()
            return pack.language
        fn_id = doc.get("id")
        if not fn_id:
            raise AbstextError(INVALID_DOCUMENT, "function document needs an id")
        self._write_doc("functions", fn_id, doc)
        self.reload()  # re-registration is simpler and safer than patching
        return fn_id

    def get_constructor_doc(self, constructor_id: str) -> dict | None:
        spec = self.catalog.get(constructor_id)
        return spec.to_doc() if spec else None

    def get_function_doc(self, fn_id: str) -> dict | None:
        if fn_id in self.registry:
            return self.registry.to_doc(fn_id)
        return None

    def get_lexeme_doc(self, lexeme_id: str) -> dict | None:
        try:
            return self.lexicon.get(lexeme_id).to_doc()
        except AbstextError:
            return None

    def get_item_doc(self, item_id: str) -> dict | None:
        if self.entities.has(item_id):
            return self.entities.get(item_id).to_doc()
        return None
