"""HTTP API over the engine.

Every 4xx carries a structured body {code, message, path?}; validation
problems additionally list their diagnostics. The editor UI is a thin
client of exactly these endpoints.
"""

from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .codec import from_jsonable, to_jsonable, value_tree
from .engine import Engine
from .errors import (AbstextError, CONTENT_NOT_FOUND, NETWORK_ERROR,
                     UNKNOWN_CONSTRUCTOR, UNKNOWN_FUNCTION, UNKNOWN_ITEM,
                     UNKNOWN_LEXEME, UNSUPPORTED_LANGUAGE)
from .model import parse_path

_NOT_FOUND = {CONTENT_NOT_FOUND, UNKNOWN_FUNCTION, UNKNOWN_ITEM, UNKNOWN_LEXEME,
              UNKNOWN_CONSTRUCTOR}


def _status_for(code: str) -> int:
    if code in _NOT_FOUND:
        return 404
    if code == UNSUPPORTED_LANGUAGE:
        return 400
    if code == NETWORK_ERROR:
        return 502
    return 422


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="abstext", docs_url="/docs")
    # the editor is served as static files from another origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(AbstextError)
    async def _abstext_error(_request: Request, exc: AbstextError):
        return JSONResponse(status_code=_status_for(exc.code), content=exc.to_dict())

    # -- rendering ---------------------------------------------------------

    @app.get("/render")
    def render(content_id: str, lang: str):
        outcome = engine.render(content_id, lang)
        return outcome.to_dict()

    @app.get("/languages")
    def languages():
        return {"languages": engine.languages()}

    # -- content -------------------------------------------------------------

    @app.get("/content")
    def list_content():
        return {"ids": engine.content_ids()}

    @app.get("/content/{content_id}")
    def get_content(content_id: str):
        text = engine.get_content_text(content_id)
        content = engine.get_content(content_id)
        diagnostics = engine.validate(content)
        return {"id": content_id, "text": text, "tree": value_tree(content),
                "diagnostics": [d.to_dict() for d in diagnostics]}

    @app.post("/content")
    async def post_content(request: Request, content_id: str | None = None):
        text = (await request.body()).decode("utf-8")
        cid, diagnostics = engine.put_content(text, content_id)
        return {"id": cid, "diagnostics": [d.to_dict() for d in diagnostics]}

    @app.post("/content/{content_id}/edit")
    def edit_content(content_id: str, payload: dict = Body(...)):
        path = parse_path(payload["path"])
        value = from_jsonable(payload["value"])
        new_id, text, diagnostics = engine.edit_content(content_id, path, value)
        return {"id": new_id, "text": text,
                "tree": value_tree(engine.get_content(new_id)),
                "diagnostics": [d.to_dict() for d in diagnostics]}

    # -- catalog CRUD ------------------------------------------------------------

    @app.get("/constructors")
    def list_constructors():
        return {"constructors": [spec.to_doc() for spec in sorted(
            engine.catalog, key=lambda s: s.id)]}

    def _get_or_404(doc, kind: str, code: str, name: str):
        if doc is None:
            raise AbstextError(code, f"no {kind} {name!r}")
        return doc

    @app.get("/constructors/{constructor_id}")
    def get_constructor(constructor_id: str):
        return _get_or_404(engine.get_constructor_doc(constructor_id),
                           "constructor", UNKNOWN_CONSTRUCTOR, constructor_id)

    @app.put("/constructors/{constructor_id}")
    def put_constructor(constructor_id: str, doc: dict = Body(...)):
        doc = dict(doc, id=constructor_id)
        return {"id": engine.put_constructor(doc)}

    @app.get("/functions/{fn_id}")
    def get_function(fn_id: str):
        return _get_or_404(engine.get_function_doc(fn_id),
                           "function", UNKNOWN_FUNCTION, fn_id)

    @app.put("/functions/{fn_id}")
    def put_function(fn_id: str, doc: dict = Body(...)):
        if doc.get("kind") != "renderer-set":
            doc = dict(doc, id=fn_id)
        return {"id": engine.put_function(doc)}

    @app.get("/lexemes/{lexeme_id}")
    def get_lexeme(lexeme_id: str):
        return _get_or_404(engine.get_lexeme_doc(lexeme_id),
                           "lexeme", UNKNOWN_LEXEME, lexeme_id)

    @app.put("/lexemes/{lexeme_id}")
    def put_lexeme(lexeme_id: str, doc: dict = Body(...)):
        doc = dict(doc, id=lexeme_id)
        return {"id": engine.put_lexeme(doc)}

    @app.get("/items")
    def search_items(q: str = "", lang: str = "en"):
        found = engine.entities.search(q, lang)
        return {"items": [
            {"id": it.id, "label": engine.entities.get_label(it.id, lang).text}
            for it in found]}

    @app.get("/items/{item_id}")
    def get_item(item_id: str):
        return _get_or_404(engine.get_item_doc(item_id), "item", UNKNOWN_ITEM, item_id)

    @app.put("/items/{item_id}")
    def put_item(item_id: str, doc: dict = Body(...)):
        doc = dict(doc, id=item_id)
        return {"id": engine.put_item(doc)}

    # -- functions ------------------------------------------------------------------

    @app.post("/evaluate")
    def evaluate(payload: dict = Body(...)):
        fn_id = payload.get("fn")
        if not fn_id:
            raise AbstextError(UNKNOWN_FUNCTION, "evaluate needs a 'fn' field")
        args = [from_jsonable(a) for a in payload.get("args", [])]
        kw = {}
        if payload.get("impl"):
            kw["impl_id"] = payload["impl"]
        result = engine.evaluate(fn_id, args, **kw)
        return {"value": to_jsonable(result)}

    @app.post("/suggest")
    def suggest(payload: dict = Body(...)):
        candidates = engine.suggest(payload.get("text", ""), payload.get("lang", "en"))
        return {"candidates": [c.to_dict() for c in candidates]}

    @app.get("/", response_class=PlainTextResponse)
    def index():
        return "abstext service; see /docs for the API.\n"

    return app
