import json

import pytest

from abstext import AbstextError, EntityClient, EntityStore, Item


class TestLabels:
    def test_paper_labels(self, engine):
        assert engine.entities.get_label("Q62", "en").text == "San Francisco"
        assert engine.entities.get_label("Q16552", "en").text == "San Diego"
        assert engine.entities.get_label("Q99", "de").text == "Kalifornien"

    def test_fallback_chain_flags(self, engine):
        label = engine.entities.get_label("Q62", "tlh")
        assert label.text == "San Francisco"
        assert label.fallback is True and label.language == "en"
        direct = engine.entities.get_label("Q62", "en")
        assert direct.fallback is False

    def test_fallback_to_any_language(self):
        store = EntityStore()
        store.upsert(Item("Q7", {"de": "Sieben"}))
        label = store.get_label("Q7", "en")
        assert label.text == "Sieben" and label.fallback is True

    def test_unknown_item(self, engine):
        with pytest.raises(AbstextError) as err:
            engine.entities.get_label("Q424242", "en")
        assert err.value.code == "UNKNOWN_ITEM"


class TestImport:
    def _doc(self):
        return [
            {"id": "Q62", "labels": {"en": "San Francisco"}},
            {"id": "Q65", "labels": {"en": "Los Angeles"}},
            {"id": "Q99", "labels": {"en": "California"}},
            {"id": "Q1066807", "labels": {"en": "Northern California"}},
            {"id": "Q16552", "labels": {"en": "San Diego"}},
            {"id": "Q16553", "labels": {"en": "San Jose"}},
            {"id": "Q515", "labels": {"en": "city"}},
        ]

    def test_import_counts(self):
        store = EntityStore()
        assert store.import_items(self._doc()) == 7
        assert len(store) == 7

    def test_idempotent(self):
        store = EntityStore()
        store.import_items(self._doc())
        snapshot = {it.id: it for it in store}
        store.import_items(self._doc())
        assert {it.id: it for it in store} == snapshot

    def test_malformed_leaves_store_unchanged(self):
        store = EntityStore()
        store.import_items(self._doc())
        bad = self._doc() + [{"labels": {"en": "missing id"}}]
        with pytest.raises(AbstextError) as err:
            store.import_items(bad)
        assert err.value.code == "PARSE_ERROR"
        assert len(store) == 7

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "items.json"
        path.write_text("{not json", "utf-8")
        store = EntityStore()
        with pytest.raises(AbstextError) as err:
            store.import_file(path)
        assert err.value.code == "PARSE_ERROR"
        assert len(store) == 0


class TestRemote:
    def _payload(self):
        return {"entities": {"Q62": {"labels": {
            "en": {"language": "en", "value": "San Francisco"},
            "de": {"language": "de", "value": "San Francisco"}}}}}

    def test_fetch_maps_entity_response(self):
        calls = []

        def fake(url):
            calls.append(url)
            return self._payload()

        client = EntityClient("https://kb.example/entity", enabled=True, transport=fake)
        item = client.fetch_remote("Q62")
        assert item.labels["en"] == "San Francisco"
        assert calls == ["https://kb.example/entity/Q62.json"]

    def test_disabled_by_default(self):
        client = EntityClient("https://kb.example/entity")
        with pytest.raises(AbstextError) as err:
            client.fetch_remote("Q62")
        assert err.value.code == "NETWORK_ERROR"

    def test_missing_entity_in_response(self):
        client = EntityClient("https://kb.example/entity", enabled=True,
                              transport=lambda url: {"entities": {}})
        with pytest.raises(AbstextError) as err:
            client.fetch_remote("Q62")
        assert err.value.code == "UNKNOWN_ITEM"


def test_search(engine):
    hits = engine.entities.search("san", "en")
    ids = [it.id for it in hits]
    assert "Q62" in ids and "Q16552" in ids and "Q16553" in ids
    assert engine.entities.search("", "en") == []


def test_find_by_label(engine):
    assert engine.entities.find_by_label("san francisco", "en").id == "Q62"
    assert engine.entities.find_by_label("Stadt", "de").id == "Q515"
    assert engine.entities.find_by_label("nothing", "en") is None


def test_item_requires_label():
    with pytest.raises(AbstextError):
        Item("Q5", {})
    with pytest.raises(AbstextError):
        Item("banana", {"en": "banana"})


def test_engine_fetch_item_upserts(fresh_engine):
    from abstext import EntityClient
    payload = {"entities": {"Q90": {"labels": {
        "en": {"language": "en", "value": "Paris"},
        "de": {"language": "de", "value": "Paris"}}}}}
    fresh_engine.remote = EntityClient("https://kb.example/entity", enabled=True,
                                       transport=lambda url: payload)
    item = fresh_engine.fetch_item("Q90")
    assert item.labels["en"] == "Paris"
    assert fresh_engine.entities.get_label("Q90", "de").text == "Paris"
