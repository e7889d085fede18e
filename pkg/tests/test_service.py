import pytest
from fastapi.testclient import TestClient

from abstext.service import create_app

from golden import DE_TEXT, EN_SENTENCE_1, EN_TEXT


@pytest.fixture()
def client(fresh_engine):
    return TestClient(create_app(fresh_engine))


class TestRenderEndpoint:
    def test_golden_renders(self, client):
        for lang, expected in (("en", EN_TEXT), ("de", DE_TEXT)):
            resp = client.get("/render", params={"content_id": "Q62", "lang": lang})
            assert resp.status_code == 200
            body = resp.json()
            assert body["text"] == expected
            assert body["complete"] is True and body["omissions"] == []

    def test_unknown_content_is_404(self, client):
        resp = client.get("/render", params={"content_id": "Q9999", "lang": "en"})
        assert resp.status_code == 404
        body = resp.json()
        assert body["code"] == "CONTENT_NOT_FOUND" and body["message"]

    def test_unsupported_language_is_400(self, client):
        resp = client.get("/render", params={"content_id": "Q62", "lang": "tlh"})
        assert resp.status_code == 400
        assert resp.json()["code"] == "UNSUPPORTED_LANGUAGE"

    def test_invalid_content_is_422_with_diagnostics(self, client):
        resp = client.post("/content", params={"content_id": "scratch-bad"},
                           content="Article(content: [Ranking(rank: 4, object: Q515, "
                                   "by: Q1613416)])")
        assert resp.status_code == 200
        assert resp.json()["diagnostics"]
        resp = client.get("/render", params={"content_id": "scratch-bad", "lang": "en"})
        assert resp.status_code == 422
        body = resp.json()
        assert body["code"] == "VALIDATION_FAILED"
        assert body["details"]["diagnostics"]

    def test_languages(self, client):
        assert client.get("/languages").json()["languages"] == ["de", "en"]


class TestContentEndpoints:
    def test_post_parse_error_is_422_with_position(self, client):
        resp = client.post("/content", content="Ranking(subject Q62)")
        assert resp.status_code == 422
        body = resp.json()
        assert body["code"] == "SYNTAX_ERROR"
        assert body["details"]["line"] == 1

    def test_post_derives_item_id(self, client):
        text = ("Article(content: [Instantiation(instance: Q65, class: center)])")
        resp = client.post("/content", content=text)
        assert resp.status_code == 200
        assert resp.json()["id"] == "Q65"

    def test_get_content(self, client):
        resp = client.get("/content/Q62")
        assert resp.status_code == 200
        assert "Ranking" in resp.json()["text"]
        assert resp.json()["diagnostics"] == []

    def test_edit_endpoint_round_trip(self, client):
        resp = client.post("/content/Q62/edit",
                           json={"path": "content[1].rank", "value": 3})
        assert resp.status_code == 200
        body = resp.json()
        new_id = body["id"]
        assert new_id.startswith("scratch-")
        rendered = client.get("/render", params={"content_id": new_id, "lang": "en"})
        assert "third-most populous" in rendered.json()["text"]
        # the original is untouched, which is what makes undo trivial
        original = client.get("/render", params={"content_id": "Q62", "lang": "en"})
        assert "fourth-most populous" in original.json()["text"]

    def test_edit_bad_path_is_422(self, client):
        resp = client.post("/content/Q62/edit",
                           json={"path": "content[9].rank", "value": 3})
        assert resp.status_code == 422
        assert resp.json()["code"] == "PATH_NOT_FOUND"


class TestCatalogCrud:
    def test_constructor_get_put_additive_key(self, client):
        doc = client.get("/constructors/Ranking").json()
        doc["keys"].append({"id": "as_of", "labels": {}, "required": False,
                            "accepted": ["integer"]})
        put = client.put("/constructors/Ranking", json=doc)
        assert put.status_code == 200
        # previously stored content still validates and renders
        resp = client.get("/render", params={"content_id": "Q62", "lang": "en"})
        assert resp.status_code == 200 and resp.json()["text"] == EN_TEXT

    def test_constructor_unknown_404(self, client):
        assert client.get("/constructors/Nope").status_code == 404

    def test_bad_constructor_doc_422(self, client):
        resp = client.put("/constructors/Bad", json={"keys": []})
        assert resp.status_code == 422
        assert resp.json()["code"] == "INVALID_DOCUMENT"

    def test_lexeme_get_put(self, client):
        doc = client.get("/lexemes/L2010").json()
        doc["forms"].append({"features": {"case": "genitive", "number": "sg"},
                             "text": "city's"})
        assert client.put("/lexemes/L2010", json=doc).status_code == 200
        again = client.get("/lexemes/L2010").json()
        assert any(f["text"] == "city's" for f in again["forms"])

    def test_item_get_put_and_search(self, client):
        assert client.get("/items/Q62").json()["labels"]["en"] == "San Francisco"
        new = {"labels": {"en": "Oakland"}}
        assert client.put("/items/Q2722", json=new).status_code == 200
        hits = client.get("/items", params={"q": "oak", "lang": "en"}).json()["items"]
        assert hits == [{"id": "Q2722", "label": "Oakland"}]

    def test_function_get(self, client):
        doc = client.get("/functions/multiply").json()
        assert doc["id"] == "multiply"
        assert {i["id"] for i in doc["implementations"]} == {"native", "recursive"}


class TestEvaluateEndpoint:
    def test_multiply(self, client):
        resp = client.post("/evaluate", json={"fn": "multiply", "args": [3, 4]})
        assert resp.status_code == 200 and resp.json()["value"] == 12

    def test_typed_errors(self, client):
        resp = client.post("/evaluate", json={"fn": "multiply", "args": ["x", 4]})
        assert resp.status_code == 422 and resp.json()["code"] == "TYPE_ERROR"
        resp = client.post("/evaluate", json={"fn": "nope", "args": []})
        assert resp.status_code == 404 and resp.json()["code"] == "UNKNOWN_FUNCTION"

    def test_item_args_codec(self, client):
        resp = client.post("/evaluate", json={
            "fn": "label", "args": [{"$item": "Q62"}, "en"]})
        assert resp.json()["value"] == "San Francisco"


class TestSuggestEndpoint:
    def test_pattern_sentence(self, client):
        resp = client.post("/suggest", json={
            "text": "Q62 is the fourth-most populous city in Q99", "lang": "en"})
        assert resp.status_code == 200
        cands = resp.json()["candidates"]
        assert cands and cands[0]["constructor_id"] == "Ranking"
        assert cands[0]["content"].startswith("Ranking(subject: Q62, rank: 4")

    def test_no_match_is_empty(self, client):
        resp = client.post("/suggest", json={"text": "hello there", "lang": "en"})
        assert resp.json()["candidates"] == []


def test_editor_loop_over_http_only(client):
    """The full edit cycle the UI performs: load, edit, re-render, undo."""
    langs = client.get("/languages").json()["languages"]
    before = {lang: client.get("/render", params={"content_id": "Q62", "lang": lang}
                               ).json()["text"] for lang in langs}
    edited = client.post("/content/Q62/edit",
                         json={"path": "content[1].rank", "value": 3}).json()
    after_list = client.get("/content/" + edited["id"]).json()["text"]
    removed = client.post(
        f"/content/{edited['id']}/edit",
        json={"path": "content[1].after",
              "value": [{"$item": "Q65"}, {"$item": "Q16552"}]}).json()
    final = {lang: client.get("/render", params={"content_id": removed["id"],
                                                 "lang": lang}).json()["text"]
             for lang in langs}
    assert "third-most populous" in final["en"]
    assert "drittgrößte" in final["de"]
    assert final["en"].startswith(EN_SENTENCE_1)
    assert before["en"] == client.get(
        "/render", params={"content_id": "Q62", "lang": "en"}).json()["text"]
    assert "after" in after_list


def test_content_tree_read_model(client):
    tree = client.get("/content/Q62").json()["tree"]
    assert tree["kind"] == "call" and tree["constructor"] == "Article"
    sentences = tree["arguments"]["content"]
    assert sentences["kind"] == "list" and len(sentences["items"]) == 2
    ranking = sentences["items"][1]
    assert ranking["arguments"]["rank"] == {"kind": "integer", "value": 4}
    assert ranking["arguments"]["subject"] == {"kind": "item", "id": "Q62"}
    enum_node = sentences["items"][0]["arguments"]["class"]["arguments"]["object"]
    assert enum_node == {"kind": "call", "constructor": "center", "arguments": {}}


def test_edit_response_carries_tree(client):
    resp = client.post("/content/Q62/edit",
                       json={"path": "content[1].rank", "value": 3}).json()
    sentences = resp["tree"]["arguments"]["content"]["items"]
    assert sentences[1]["arguments"]["rank"]["value"] == 3


def test_function_put_registers_new_function(client):
    doc = {
        "labels": {"en": "square"},
        "params": [{"name": "x", "type": "positive_integer"}],
        "return_type": "positive_integer",
        "tests": [{"args": [5], "expected": 25}],
        "implementations": [{
            "id": "composed", "kind": "composition", "expr": "multiply(x, x)"}],
    }
    assert client.put("/functions/square", json=doc).status_code == 200
    resp = client.post("/evaluate", json={"fn": "square", "args": [9]})
    assert resp.json()["value"] == 81
    stored = client.get("/functions/square").json()
    assert stored["implementations"][0]["expr"] == "multiply(x, x)"
