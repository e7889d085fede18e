"""Acceptance suite: one test per shipping criterion, each printing a
PASS/FAIL line. Tolerances are exact where the contract is byte equality
or exhaustive equality; the only numeric threshold is the cold-render
time budget."""

import random
import time

import pytest

from abstext import AbstextError, Engine, edit_value, parse_content, remove_list_element
from abstext.notation import SyntaxParseError, serialize_content

from gen import random_garbage, random_valid_content
from golden import (DE_SENTENCE_1, DE_SENTENCE_2_LEXEMES, DE_TEXT, EN_SENTENCE_1,
                    EN_TEXT)

COLD_RENDER_BUDGET_S = 1.0
GRID = range(0, 21)
ROUND_TRIPS = 1_000
FUZZ_CASES = 10_000


@pytest.fixture()
def cold_engine(tmp_path):
    import shutil

    from abstext.engine import default_data_dir
    dst = tmp_path / "data"
    shutil.copytree(default_data_dir(), dst)
    return Engine(data_dir=dst)


def _report(criterion: str, detail: str = ""):
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {criterion}: PASS{suffix}")


def test_c1_golden_english_render_cold(cold_engine):
    start = time.perf_counter()
    outcome = cold_engine.render("Q62", "en")
    elapsed = time.perf_counter() - start
    assert outcome.text == EN_TEXT  # byte equality
    assert outcome.complete is True
    assert elapsed < COLD_RENDER_BUDGET_S
    _report("1 golden English render", f"cold {elapsed * 1000:.0f} ms")


def test_c2_golden_german_render(cold_engine):
    outcome = cold_engine.render("Q62", "de")
    assert outcome.text == DE_TEXT  # byte equality
    assert outcome.complete is True
    _report("2 golden German render")


def test_c3_composition_correctness(cold_engine):
    reg = cold_engine.registry
    reg.clear_cache()
    for x in GRID:
        for y in GRID:
            native = reg.evaluate("multiply", [x, y], impl_id="native", use_cache=False)
            composed = reg.evaluate("multiply", [x, y], impl_id="recursive",
                                    use_cache=False)
            assert native == composed, f"multiply disagrees at ({x}, {y})"
            assert reg.evaluate("subtract", [x, y], use_cache=False) == max(x - y, 0)
    reg.clear_cache()
    with pytest.raises(AbstextError) as err:
        reg.evaluate("multiply", [reg.depth_limit + 1, 1], impl_id="recursive")
    assert err.value.code == "DEPTH_EXCEEDED"
    _report("3 composition correctness", f"{len(GRID) ** 2} pairs per function")


def test_c4_grammar_round_trip_and_fuzz(engine):
    rng = random.Random(0xABC1)
    for _ in range(ROUND_TRIPS):
        content = random_valid_content(rng)
        assert parse_content(serialize_content(content, engine.catalog)) == content
    fuzz_rng = random.Random(0xF022)
    parsed = 0
    for _ in range(FUZZ_CASES):
        text = random_garbage(fuzz_rng)
        try:
            parse_content(text)
            parsed += 1
        except SyntaxParseError as exc:
            assert exc.line >= 1 and exc.col >= 1 and exc.expected
        # any other exception fails the test
    _report("4 grammar round-trip and fuzz",
            f"{ROUND_TRIPS} round-trips, {FUZZ_CASES} fuzz inputs, {parsed} parsed")


def test_c5_graceful_degradation(tmp_path):
    import shutil

    from abstext.engine import default_data_dir
    deletions = [("lexeme", lexeme_id) for lexeme_id in sorted(DE_SENTENCE_2_LEXEMES)]
    deletions.append(("ordinal", 4))
    for kind, target in deletions:
        dst = tmp_path / f"data-{kind}-{target}"
        shutil.copytree(default_data_dir(), dst)
        engine = Engine(data_dir=dst)
        if kind == "lexeme":
            engine.delete_lexeme(target)
        else:
            engine.lexicon.delete_ordinal("de", target)
            engine.invalidate()
        outcome = engine.render("Q62", "de")  # must not raise
        assert outcome.complete is False
        assert len(outcome.omissions) == 1, (kind, target, outcome.omissions)
        assert outcome.omissions[0].path == "content[1]"
        assert outcome.text == DE_SENTENCE_1, (kind, target)
    _report("5 graceful degradation", f"{len(deletions)} deletions, sentence 1 intact")


def test_c6_purity_and_caching(cold_engine):
    reg = cold_engine.registry
    reg.clear_cache()
    first = cold_engine.render("Q62", "en")
    hits_before = reg.cache_stats()[0]
    second = cold_engine.render("Q62", "en")
    hits_after = reg.cache_stats()[0]
    assert hits_after - hits_before >= 1
    assert first.text == second.text and first.text == EN_TEXT
    entries_before = reg.cache_stats()[2]
    hits_before = reg.cache_stats()[0]
    cold_engine.evaluate("now_ms", [])
    cold_engine.evaluate("now_ms", [])
    assert reg.cache_stats()[0] == hits_before  # impure: zero hits
    assert reg.cache_stats()[2] == entries_before  # and nothing stored
    _report("6 purity and caching")


def test_c7_edit_scenario(cold_engine):
    content = cold_engine.get_content("Q62")
    edited = edit_value(content, ("content", 1, "rank"), 3)
    edited = remove_list_element(edited, ("content", 1, "after"), 2)
    before = {lang: cold_engine.render("Q62", lang).text for lang in ("en", "de")}
    after = {lang: cold_engine.render(edited, lang).text for lang in ("en", "de")}
    assert after["en"].startswith(EN_SENTENCE_1)  # sentence 1 byte-identical
    assert after["de"].startswith(DE_SENTENCE_1)
    assert before["en"].startswith(EN_SENTENCE_1)
    assert "third-most populous" in after["en"]
    assert "drittgrößte" in after["de"]
    assert "San Jose" not in after["en"] and "San Jose" not in after["de"]
    assert after["en"] != before["en"] and after["de"] != before["de"]
    _report("7 edit scenario", "rank 3, San Jose removed; only sentence 2 changed")


def test_c8_implementation_selection_deterministic(cold_engine):
    choices = [cold_engine.registry.select_implementation("multiply")
               for _ in range(5)]
    assert choices == ["native"] * 5
    _report("8 implementation selection", "native chosen 5/5")
