import json

import pytest
from hypothesis import given, strategies as st

from abstext import AbstextError, FunctionDef, Implementation, Param, Registry
from abstext import TestCase as FnTest
from abstext.engine import default_data_dir
from abstext.funclib import install_core
from abstext.notation import parse_value_text


def make_registry(**kw) -> Registry:
    """Core builtins plus the documented arithmetic functions."""
    reg = Registry(**kw)
    install_core(reg)
    deferred = []
    for f in sorted((default_data_dir() / "functions").glob("*.json")):
        doc = json.loads(f.read_text("utf-8"))
        if doc.get("kind") == "renderer-set":
            continue
        deferred.append(reg.load_doc(doc, defer_implementations=True))
    for fn_id, impls in deferred:
        for impl in impls:
            reg.add_implementation(fn_id, impl)
    return reg


@pytest.fixture()
def reg() -> Registry:
    return make_registry()


class TestRegistration:
    def test_register_and_duplicate(self, reg):
        fn = FunctionDef("double", params=(Param("x", "positive_integer"),),
                         return_type="positive_integer")
        assert reg.register(fn) == "double"
        with pytest.raises(AbstextError) as err:
            reg.register(FunctionDef("double"))
        assert err.value.code == "DUPLICATE_ID"

    def test_add_implementation_unknown_function(self, reg):
        with pytest.raises(AbstextError) as err:
            reg.add_implementation("nonexistent", Implementation("i", "builtin", builtin="add"))
        assert err.value.code == "UNKNOWN_FUNCTION"

    def test_composition_referencing_unregistered_function(self, reg):
        reg.register(FunctionDef("wrapped", params=(Param("x", "integer"),),
                                 return_type="integer"))
        bad = Implementation("c", "composition", expr=parse_value_text("froz(x)"))
        with pytest.raises(AbstextError) as err:
            reg.add_implementation("wrapped", bad)
        assert err.value.code == "UNKNOWN_FUNCTION"

    def test_duplicate_implementation_id(self, reg):
        with pytest.raises(AbstextError) as err:
            reg.add_implementation("add", Implementation("native", "builtin", builtin="add"))
        assert err.value.code == "DUPLICATE_ID"

    def test_bare_name_must_be_param_or_function(self, reg):
        reg.register(FunctionDef("f2", params=(Param("x", "integer"),),
                                 return_type="integer"))
        with pytest.raises(AbstextError):
            reg.add_implementation(
                "f2", Implementation("c", "composition", expr=parse_value_text("add(x, y)")))

    def test_zero_implementations_is_legal(self, reg):
        reg.register(FunctionDef("iface_only", params=(), return_type="integer"))
        report = reg.run_tests("iface_only")
        assert report.results == {}
        with pytest.raises(AbstextError) as err:
            reg.evaluate("iface_only", [])
        assert err.value.code == "NO_IMPLEMENTATION"


class TestEvaluation:
    def test_multiply_base_case_via_composition(self, reg):
        assert reg.evaluate("multiply", [0, 7], impl_id="recursive", use_cache=False) == 0

    def test_natural_subtraction(self, reg):
        assert reg.evaluate("subtract", [1, 2]) == 0
        assert reg.evaluate("subtract", [5, 2]) == 3

    def test_composition_equals_builtin_on_grid(self, reg):
        # brute-force oracle: Python's own arithmetic over the full grid
        for x in range(0, 21):
            for y in range(0, 21):
                via_builtin = reg.evaluate("multiply", [x, y], impl_id="native",
                                           use_cache=False)
                via_composition = reg.evaluate("multiply", [x, y], impl_id="recursive",
                                               use_cache=False)
                assert via_builtin == via_composition == x * y

    def test_subtraction_clamps_on_grid(self, reg):
        for x in range(0, 21):
            for y in range(0, 21):
                assert reg.evaluate("subtract", [x, y], use_cache=False) == max(x - y, 0)

    def test_type_errors(self, reg):
        with pytest.raises(AbstextError) as err:
            reg.evaluate("multiply", ["three", 4])
        assert err.value.code == "TYPE_ERROR"
        with pytest.raises(AbstextError) as err:
            reg.evaluate("multiply", [1])
        assert err.value.code == "TYPE_ERROR"
        with pytest.raises(AbstextError) as err:
            reg.evaluate("multiply", [True, 4])
        assert err.value.code == "TYPE_ERROR"

    def test_unknown_function(self, reg):
        with pytest.raises(AbstextError) as err:
            reg.evaluate("frobnicate", [])
        assert err.value.code == "UNKNOWN_FUNCTION"

    def test_return_type_enforced(self, reg):
        reg.register_builtin("lie", lambda ctx: "not a number")
        reg.register(FunctionDef("liar", params=(), return_type="integer",
                                 implementations=[Implementation("native", "builtin",
                                                                 builtin="lie")]))
        with pytest.raises(AbstextError) as err:
            reg.evaluate("liar", [])
        assert err.value.code == "TYPE_ERROR"

    def test_lazy_if_permits_recursion(self, reg):
        # the eager branch would diverge if both arms were evaluated
        assert reg.evaluate("multiply", [3, 4], impl_id="recursive", use_cache=False) == 12

    def test_depth_limit(self):
        reg = make_registry(depth_limit=30)
        with pytest.raises(AbstextError) as err:
            reg.evaluate("multiply", [31, 1], impl_id="recursive", use_cache=False)
        assert err.value.code == "DEPTH_EXCEEDED"

    def test_default_depth_limit_errors_without_stack_fault(self):
        reg = make_registry()
        with pytest.raises(AbstextError) as err:
            reg.evaluate("multiply", [reg.depth_limit + 1, 1], impl_id="recursive",
                         use_cache=False)
        assert err.value.code == "DEPTH_EXCEEDED"

    def test_precondition_failure(self, reg):
        reg.register_builtin("half_host", lambda ctx, x: x // 2)
        reg.register(FunctionDef(
            "half_even", params=(Param("x", "positive_integer"),),
            return_type="positive_integer",
            preconditions=(parse_value_text("is_zero(subtract(x, multiply(2, 1)))"),),
            implementations=[Implementation("native", "builtin", builtin="half_host")]))
        assert reg.evaluate("half_even", [2]) == 1
        with pytest.raises(AbstextError) as err:
            reg.evaluate("half_even", [5])
        assert err.value.code == "PRECONDITION_FAILED"


class TestCacheAndPurity:
    def test_hit_on_second_identical_call(self, reg):
        reg.clear_cache()
        first = reg.evaluate("multiply", [6, 7])
        hits0 = reg.cache_stats()[0]
        second = reg.evaluate("multiply", [6, 7])
        hits1, _, entries = reg.cache_stats()
        assert first == second == 42
        assert hits1 == hits0 + 1
        assert entries >= 1

    def test_clear_then_miss_then_hit(self, reg):
        reg.evaluate("add", [1, 1])
        reg.clear_cache()
        assert reg.cache_stats() == (0, 0, 0)
        reg.evaluate("add", [1, 1])
        hits, misses, _ = reg.cache_stats()
        assert (hits, misses) == (0, 1)
        reg.evaluate("add", [1, 1])
        assert reg.cache_stats()[0] == 1

    def test_impure_function_bypasses_cache(self, reg):
        reg.clear_cache()
        reg.evaluate("now_ms", [])
        reg.evaluate("now_ms", [])
        hits, misses, entries = reg.cache_stats()
        assert hits == 0 and entries == 0

    def test_purity_bitwise_stable_across_clear(self, reg):
        results = set()
        for _ in range(3):
            results.add(reg.evaluate("multiply", [12, 12]))
            reg.clear_cache()
        assert results == {144}

    def test_lru_bound_per_function(self):
        reg = make_registry(cache_capacity=5)
        for i in range(50):
            reg.evaluate("add", [i, i])
        assert reg.cache_stats()[2] == 5

    def test_stats_monotone_between_clears(self, reg):
        reg.clear_cache()
        seen = []
        for i in range(6):
            reg.evaluate("add", [i % 2, 0])
            seen.append(reg.cache_stats()[:2])
        for (h0, m0), (h1, m1) in zip(seen, seen[1:]):
            assert h1 >= h0 and m1 >= m0


class TestReportsAndSelection:
    def test_all_shipped_impls_pass(self, reg):
        report = reg.run_tests("multiply")
        assert set(report.passing()) == {"native", "recursive"}
        assert report.agreement[("native", "recursive")] is True
        assert report.agreement[("recursive", "native")] is True

    def test_intentionally_wrong_impl_fails(self, reg):
        reg.add_implementation("multiply",
                               Implementation("broken", "composition",
                                              expr=parse_value_text("add(x, y)")))
        report = reg.run_tests("multiply")
        rows = report.results["broken"]
        assert rows[0].passed is False and rows[0].actual == 5  # 2+3 != 6
        assert rows[1].passed is False and rows[1].actual == 9  # 0+9 != 0
        assert "broken" not in report.passing()
        assert report.agreement[("native", "broken")] is False

    def test_agreement_matrix_symmetric(self, reg):
        report = reg.run_tests("multiply")
        for (a, b), agree in report.agreement.items():
            assert report.agreement[(b, a)] == agree

    def test_selection_prefers_fast_builtin(self, reg):
        assert reg.select_implementation("multiply") == "native"
        # selection becomes the default strategy
        assert reg.get("multiply").selected == "native"

    def test_selection_single_implementation(self, reg):
        assert reg.select_implementation("add") == "native"

    def test_selection_requires_a_passing_impl(self, reg):
        reg.register_builtin("never_right", lambda ctx, x: x + 1)
        reg.register(FunctionDef(
            "hopeless", params=(Param("x", "positive_integer"),),
            return_type="positive_integer",
            tests=(FnTest((1,), 1),),
            implementations=[Implementation("native", "builtin", builtin="never_right")]))
        with pytest.raises(AbstextError) as err:
            reg.select_implementation("hopeless")
        assert err.value.code == "NO_PASSING_IMPLEMENTATION"

    def test_deterministic_selection_across_runs(self, reg):
        assert all(reg.select_implementation("multiply") == "native" for _ in range(5))


class TestPostconditions:
    def _register(self, reg):
        reg.register_builtin("ident_host", lambda ctx, x: x)
        reg.register(FunctionDef(
            "claims_zero", params=(Param("x", "positive_integer"),),
            return_type="positive_integer",
            postconditions=(parse_value_text("is_zero(result)"),),
            tests=(FnTest((5,), 5),),
            implementations=[Implementation("native", "builtin", builtin="ident_host")]))

    def test_default_runs_postconditions_under_test_only(self, reg):
        self._register(reg)
        assert reg.evaluate("claims_zero", [5]) == 5  # not enforced live
        report = reg.run_tests("claims_zero")
        assert report.results["native"][0].passed is False
        assert "POSTCONDITION_FAILED" in report.results["native"][0].error

    def test_always_mode_enforces_on_evaluate(self):
        reg = make_registry(check_postconditions="always")
        self._register(reg)
        with pytest.raises(AbstextError) as err:
            reg.evaluate("claims_zero", [5])
        assert err.value.code == "POSTCONDITION_FAILED"


class TestTypeSafetyProperty:
    @given(st.integers(min_value=0, max_value=60), st.integers(min_value=0, max_value=60),
           st.sampled_from(["add", "subtract", "multiply"]))
    def test_random_well_typed_calls_respect_return_type(self, x, y, fn_id):
        reg = _SHARED
        result = reg.evaluate(fn_id, [x, y])
        assert reg.get_type("positive_integer").valid(result)

    @given(st.integers(min_value=0, max_value=40))
    def test_is_zero_returns_boolean(self, x):
        result = _SHARED.evaluate("is_zero", [x])
        assert isinstance(result, bool) and result == (x == 0)


_SHARED = make_registry()
