"""Function registry: typed interfaces, multiple implementations, tests.

A function has a stable id and one or more implementations, either
builtin (a host Python callable) or a composition: an expression tree in
the call notation over other registered functions and the parameters,
e.g.

    if(condition: is_zero(x), then: 0, else: add(y, multiply(subtract(x, 1), y)))

Pure calls are memoized per function in a bounded LRU keyed by the
canonical serialization of the arguments. `if` is lazy inside
compositions: only the taken branch is evaluated.
"""

import statistics
import sys
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field

from .codec import canonical_key, from_jsonable, to_jsonable
from .errors import (AbstextError, DEPTH_EXCEEDED, DUPLICATE_ID, INVALID_DOCUMENT,
                     NO_IMPLEMENTATION, NO_PASSING_IMPLEMENTATION, POSTCONDITION_FAILED,
                     PRECONDITION_FAILED, TYPE_ERROR, UNKNOWN_FUNCTION)
from .model import Call, ItemRef
from .notation import parse_value_text, serialize_value
from .values import Absent, EnumRef, Features, MissingForm

DEFAULT_CACHE_CAPACITY = 10_000
DEFAULT_DEPTH_LIMIT = 256

TIMING_RUNS = 5


@dataclass(frozen=True)
class SemanticType:
    """A value type with a validity predicate; either primitive or
    registry-defined (positive_integer, grammatical types, ...)."""
    id: str
    predicate: object
    doc: str = ""

    def valid(self, value) -> bool:
        return bool(self.predicate(value))


@dataclass(frozen=True)
class Param:
    name: str
    type: str
    optional: bool = False


@dataclass(frozen=True)
class TestCase:
    args: tuple
    expected: object


@dataclass(frozen=True)
class Implementation:
    id: str
    kind: str  # "builtin" | "composition"
    builtin: str | None = None
    expr: Call | None = None


@dataclass
class FunctionDef:
    id: str
    params: tuple = ()
    return_type: str = "any"
    pure: bool = True
    labels: dict = field(default_factory=dict)
    doc: str = ""
    tests: tuple = ()
    preconditions: tuple = ()
    postconditions: tuple = ()
    implementations: list = field(default_factory=list)
    selected: str | None = None

    def __post_init__(self):
        names = [p.name for p in self.params]
        if len(names) != len(set(names)):
            raise AbstextError(INVALID_DOCUMENT, f"duplicate parameter names in {self.id!r}")
        for case in self.tests:
            if len(case.args) != len(self.params):
                raise AbstextError(INVALID_DOCUMENT,
                                   f"test arity mismatch in {self.id!r}")

    def implementation(self, impl_id: str):
        for impl in self.implementations:
            if impl.id == impl_id:
                return impl
        return None


@dataclass
class TestResult:
    index: int
    passed: bool
    expected: object
    actual: object = None
    error: str | None = None
    wall_time: float = 0.0


@dataclass
class EvalReport:
    """Per-implementation outcomes of running every declared test."""
    function_id: str
    results: dict  # impl_id -> list[TestResult]
    agreement: dict  # (impl_id, impl_id) -> bool, symmetric

    def passing(self) -> list:
        return [impl for impl, res in self.results.items()
                if all(r.passed for r in res)]

    def mean_time(self, impl_id: str) -> float:
        res = self.results[impl_id]
        if not res:
            return 0.0
        return sum(r.wall_time for r in res) / len(res)

    def to_dict(self) -> dict:
        return {
            "function": self.function_id,
            "implementations": {
                impl: [{"test": r.index, "passed": r.passed,
                        "expected": to_jsonable(r.expected),
                        "actual": None if r.actual is None else to_jsonable(r.actual),
                        "error": r.error, "wall_time": r.wall_time}
                       for r in res]
                for impl, res in self.results.items()
            },
            "agreement": {f"{a}|{b}": v for (a, b), v in self.agreement.items()},
        }


class _Cache:
    """Bounded per-function LRU with shared hit/miss counters."""

    def __init__(self, capacity: int):
        self.capacity = capacity
        self._maps: dict[str, OrderedDict] = {}
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    def lookup(self, fn_id: str, key: str):
        with self._lock:
            store = self._maps.get(fn_id)
            if store is not None and key in store:
                store.move_to_end(key)
                self.hits += 1
                return True, store[key]
            self.misses += 1
            return False, None

    def store(self, fn_id: str, key: str, value):
        with self._lock:
            store = self._maps.setdefault(fn_id, OrderedDict())
            store[key] = value
            store.move_to_end(key)
            while len(store) > self.capacity:
                store.popitem(last=False)

    def clear(self):
        with self._lock:
            self._maps.clear()
            self.hits = 0
            self.misses = 0

    @property
    def entries(self) -> int:
        with self._lock:
            return sum(len(m) for m in self._maps.values())


class _EvalContext:
    """Per-evaluation state threaded through builtins and compositions."""

    __slots__ = ("registry", "depth", "use_cache", "under_test", "services")

    def __init__(self, registry, use_cache=True, under_test=False):
        self.registry = registry
        self.depth = 0
        self.use_cache = use_cache
        self.under_test = under_test
        self.services = registry.services

    def call(self, fn_id: str, *args):
        return self.registry._evaluate(fn_id, list(args), self)


class Registry:
    """The function store plus its evaluator and memoization cache."""

    def __init__(self, cache_capacity: int = DEFAULT_CACHE_CAPACITY,
                 depth_limit: int = DEFAULT_DEPTH_LIMIT,
                 check_postconditions: str = "tests"):
        self._defs: dict[str, FunctionDef] = {}
        self._types: dict[str, SemanticType] = {}
        self._builtins: dict[str, object] = {}
        self._cache = _Cache(cache_capacity)
        self._lock = threading.Lock()
        self.depth_limit = depth_limit
        self.check_postconditions = check_postconditions
        self.services = None  # wired by the engine
        self._install_base_types()
        # compositions recurse through several Python frames per call
        needed = depth_limit * 12 + 2000
        if sys.getrecursionlimit() < needed:
            sys.setrecursionlimit(needed)

    # -- types ---------------------------------------------------------

    def _install_base_types(self):
        base = [
            SemanticType("any", lambda v: True),
            SemanticType("integer", lambda v: isinstance(v, int) and not isinstance(v, bool)),
            SemanticType("text", lambda v: isinstance(v, str)),
            SemanticType("boolean", lambda v: isinstance(v, bool)),
            SemanticType("item", lambda v: isinstance(v, ItemRef)),
            SemanticType("list", lambda v: isinstance(v, (list, tuple))),
            SemanticType("positive_integer",
                         lambda v: isinstance(v, int) and not isinstance(v, bool) and v >= 0,
                         "a natural number; subtraction on these clamps at zero"),
            SemanticType("form", lambda v: isinstance(v, (str, MissingForm)),
                         "surface text, or an explicit lexical gap"),
            SemanticType("ref", lambda v: isinstance(v, (ItemRef, EnumRef, str)),
                         "an item, an enumeration value, or a lexeme id"),
            SemanticType("bundle", lambda v: isinstance(v, Features)),
        ]
        for t in base:
            self._types[t.id] = t

    def register_type(self, semantic_type: SemanticType):
        with self._lock:
            if semantic_type.id in self._types:
                raise AbstextError(DUPLICATE_ID, f"type {semantic_type.id!r} already defined")
            self._types[semantic_type.id] = semantic_type

    def get_type(self, type_id: str) -> SemanticType:
        t = self._types.get(type_id)
        if t is None:
            raise AbstextError(INVALID_DOCUMENT, f"unknown semantic type {type_id!r}")
        return t

    def type_satisfies_descriptor(self, type_id: str, desc) -> bool:
        """Whether a function's declared return type can fill a catalog
        key with the given accepted-type descriptor."""
        if desc.kind == "integer":
            return type_id in ("integer", "positive_integer")
        if desc.kind == "text":
            return type_id in ("text", "form")
        if desc.kind == "item":
            return type_id == "item"
        if desc.kind == "list-of":
            return type_id == "list"
        if desc.kind == "constructor":
            return type_id == desc.arg or type_id == "phrase"
        return False

    # -- registration ---------------------------------------------------

    def register_builtin(self, name: str, fn):
        with self._lock:
            if name in self._builtins:
                raise AbstextError(DUPLICATE_ID, f"builtin {name!r} already registered")
            self._builtins[name] = fn

    def register(self, fn_def: FunctionDef) -> str:
        if fn_def.id in self._defs:
            raise AbstextError(DUPLICATE_ID, f"function {fn_def.id!r} already registered")
        for p in fn_def.params:
            self.get_type(p.type)
        self.get_type(fn_def.return_type)
        for impl in fn_def.implementations:
            self._check_implementation(fn_def, impl)
        with self._lock:
            if fn_def.id in self._defs:
                raise AbstextError(DUPLICATE_ID, f"function {fn_def.id!r} already registered")
            self._defs[fn_def.id] = fn_def
        return fn_def.id

    def add_implementation(self, fn_id: str, impl: Implementation) -> str:
        fn = self.get(fn_id)
        self._check_implementation(fn, impl)
        with self._lock:
            if fn.implementation(impl.id) is not None:
                raise AbstextError(DUPLICATE_ID,
                                   f"implementation {impl.id!r} already on {fn_id!r}")
            fn.implementations.append(impl)
        return impl.id

    def _check_implementation(self, fn: FunctionDef, impl: Implementation):
        if impl.kind == "builtin":
            if impl.builtin not in self._builtins:
                raise AbstextError(UNKNOWN_FUNCTION,
                                   f"no builtin named {impl.builtin!r}")
            return
        if impl.kind != "composition" or impl.expr is None:
            raise AbstextError(INVALID_DOCUMENT,
                               f"implementation {impl.id!r} is neither builtin nor composition")
        params = {p.name for p in fn.params}
        self._check_expr(impl.expr, params, fn.id)

    def _check_expr(self, expr, params: set, owner: str):
        if isinstance(expr, tuple):
            for el in expr:
                self._check_expr(el, params, owner)
            return
        if not isinstance(expr, Call):
            return
        if expr.is_bare():
            if expr.name in params or expr.name in self._defs:
                return
            raise AbstextError(UNKNOWN_FUNCTION,
                               f"{expr.name!r} in {owner!r} is neither a parameter "
                               f"nor a registered function")
        if expr.name != "if" and expr.name not in self._defs and expr.name != owner:
            raise AbstextError(UNKNOWN_FUNCTION,
                               f"composition in {owner!r} calls unregistered {expr.name!r}")
        for sub in expr.positional:
            self._check_expr(sub, params, owner)
        for sub in expr.args.values():
            self._check_expr(sub, params, owner)

    # -- lookup ----------------------------------------------------------

    def __contains__(self, fn_id: str) -> bool:
        return fn_id in self._defs

    def __iter__(self):
        return iter(self._defs.values())

    def get(self, fn_id: str) -> FunctionDef:
        fn = self._defs.get(fn_id)
        if fn is None:
            raise AbstextError(UNKNOWN_FUNCTION, f"no function {fn_id!r}")
        return fn

    # -- evaluation -------------------------------------------------------

    def evaluate(self, fn_id: str, args, *, impl_id: str | None = None,
                 use_cache: bool = True, under_test: bool = False):
        """Evaluate a call. Type-checks arguments, enforces preconditions,
        memoizes pure calls, and bounds composition recursion."""
        ctx = _EvalContext(self, use_cache=use_cache, under_test=under_test)
        try:
            return self._evaluate(fn_id, list(args), ctx, impl_id)
        except RecursionError:
            raise AbstextError(DEPTH_EXCEEDED,
                               f"evaluation of {fn_id!r} exceeded the host stack") from None

    def _evaluate(self, fn_id: str, args: list, ctx: _EvalContext,
                  impl_id: str | None = None):
        ctx.depth += 1
        try:
            if ctx.depth > self.depth_limit:
                raise AbstextError(DEPTH_EXCEEDED,
                                   f"call depth exceeded {self.depth_limit} in {fn_id!r}")
            fn = self.get(fn_id)
            self._check_args(fn, args)
            for pred in fn.preconditions:
                if self._eval_predicate(pred, fn, args, ctx) is not True:
                    raise AbstextError(PRECONDITION_FAILED,
                                       f"precondition failed for {fn_id!r}")
            default_impl = fn.selected or (fn.implementations[0].id
                                           if fn.implementations else None)
            cacheable = fn.pure and ctx.use_cache and (
                impl_id is None or impl_id == default_impl)
            if cacheable:
                key = canonical_key(fn_id, args)
                hit, value = self._cache.lookup(fn_id, key)
                if hit:
                    return value
            impl = self._pick_implementation(fn, impl_id)
            if impl.kind == "builtin":
                result = self._builtins[impl.builtin](ctx, *args)
            else:
                env = {p.name: a for p, a in zip(fn.params, args)}
                # recursive self-calls stay inside this implementation, so
                # a composition is measured (and depth-bounded) as itself
                result = self._eval_expr(impl.expr, env, ctx, owner=(fn.id, impl.id))
            if isinstance(result, list):
                result = tuple(result)
            if self.check_postconditions == "always" or ctx.under_test:
                for pred in fn.postconditions:
                    if self._eval_predicate(pred, fn, args, ctx, result) is not True:
                        raise AbstextError(POSTCONDITION_FAILED,
                                           f"postcondition failed for {fn_id!r}")
            if not self.get_type(fn.return_type).valid(result):
                raise AbstextError(TYPE_ERROR,
                                   f"{fn_id!r} returned a value outside {fn.return_type!r}")
            if cacheable:
                self._cache.store(fn_id, key, result)
            return result
        finally:
            ctx.depth -= 1

    def _check_args(self, fn: FunctionDef, args: list):
        if len(args) != len(fn.params):
            raise AbstextError(TYPE_ERROR,
                               f"{fn.id!r} takes {len(fn.params)} arguments, got {len(args)}")
        for p, a in zip(fn.params, args):
            if a is Absent:
                if not p.optional:
                    raise AbstextError(TYPE_ERROR,
                                       f"argument {p.name!r} of {fn.id!r} is required")
                continue
            if not self.get_type(p.type).valid(a):
                raise AbstextError(TYPE_ERROR,
                                   f"argument {p.name!r} of {fn.id!r} is not a {p.type!r}")

    def _pick_implementation(self, fn: FunctionDef, impl_id: str | None):
        if impl_id is not None:
            impl = fn.implementation(impl_id)
            if impl is None:
                raise AbstextError(NO_IMPLEMENTATION,
                                   f"{fn.id!r} has no implementation {impl_id!r}")
            return impl
        if fn.selected:
            impl = fn.implementation(fn.selected)
            if impl is not None:
                return impl
        if not fn.implementations:
            raise AbstextError(NO_IMPLEMENTATION, f"{fn.id!r} has no implementations")
        return fn.implementations[0]

    def _eval_predicate(self, pred, fn: FunctionDef, args: list, ctx, result=None):
        env = {p.name: a for p, a in zip(fn.params, args)}
        if result is not None:
            env["result"] = result
        return self._eval_expr(pred, env, ctx)

    def _eval_expr(self, expr, env: dict, ctx: _EvalContext, owner=None):
        if isinstance(expr, tuple):
            return tuple(self._eval_expr(e, env, ctx, owner) for e in expr)
        if not isinstance(expr, Call):
            return expr
        if expr.is_bare():
            if expr.name in env:
                return env[expr.name]
            if expr.name in self._defs:
                return self._evaluate(expr.name, [], ctx)
            raise AbstextError(UNKNOWN_FUNCTION,
                               f"{expr.name!r} is neither a parameter nor a function")
        if expr.name == "if":
            return self._eval_if(expr, env, ctx, owner)
        fn = self.get(expr.name)
        call_args = self._bind_args(fn, expr, env, ctx, owner)
        impl_id = owner[1] if owner is not None and expr.name == owner[0] else None
        return self._evaluate(expr.name, call_args, ctx, impl_id)

    def _eval_if(self, expr: Call, env: dict, ctx: _EvalContext, owner=None):
        # lazy: only the taken branch is evaluated, so recursive
        # compositions can terminate
        slots = {"condition": None, "then": None, "else": None}
        for i, sub in enumerate(expr.positional):
            slots[("condition", "then", "else")[i]] = sub
        for key, sub in expr.args.items():
            if key not in slots:
                raise AbstextError(TYPE_ERROR, f"if() has no argument {key!r}")
            slots[key] = sub
        if any(v is None for v in slots.values()):
            raise AbstextError(TYPE_ERROR, "if() needs condition, then and else")
        cond = self._eval_expr(slots["condition"], env, ctx, owner)
        if not isinstance(cond, bool):
            raise AbstextError(TYPE_ERROR, "if() condition must be boolean")
        return self._eval_expr(slots["then"] if cond else slots["else"], env, ctx, owner)

    def _bind_args(self, fn: FunctionDef, expr: Call, env: dict, ctx, owner=None) -> list:
        by_name: dict[str, object] = {}
        for i, sub in enumerate(expr.positional):
            if i >= len(fn.params):
                raise AbstextError(TYPE_ERROR,
                                   f"{fn.id!r} takes {len(fn.params)} arguments")
            by_name[fn.params[i].name] = self._eval_expr(sub, env, ctx, owner)
        for key, sub in expr.args.items():
            if key in by_name:
                raise AbstextError(TYPE_ERROR, f"duplicate argument {key!r} for {fn.id!r}")
            if not any(p.name == key for p in fn.params):
                raise AbstextError(TYPE_ERROR, f"{fn.id!r} has no parameter {key!r}")
            by_name[key] = self._eval_expr(sub, env, ctx, owner)
        out = []
        for p in fn.params:
            if p.name in by_name:
                out.append(by_name[p.name])
            elif p.optional:
                out.append(Absent)
            else:
                raise AbstextError(TYPE_ERROR,
                                   f"missing argument {p.name!r} for {fn.id!r}")
        return out

    # -- testing and selection ---------------------------------------------

    def run_tests(self, fn_id: str) -> EvalReport:
        """Run every implementation against every declared test case,
        recording pass/fail and a median-of-five wall time."""
        fn = self.get(fn_id)
        results: dict[str, list] = {}
        for impl in fn.implementations:
            rows = []
            for i, case in enumerate(fn.tests):
                row = TestResult(index=i, passed=False, expected=case.expected)
                timings = []
                for _ in range(TIMING_RUNS):
                    start = time.perf_counter()
                    try:
                        actual = self.evaluate(fn_id, list(case.args), impl_id=impl.id,
                                               use_cache=False, under_test=True)
                        timings.append(time.perf_counter() - start)
                        row.actual = actual
                        row.error = None
                    except AbstextError as exc:
                        timings.append(time.perf_counter() - start)
                        row.error = f"{exc.code}: {exc.message}"
                        break
                row.wall_time = statistics.median(timings)
                row.passed = row.error is None and row.actual == case.expected
                rows.append(row)
            results[impl.id] = rows
        agreement = {}
        impl_ids = list(results)
        for a in impl_ids:
            for b in impl_ids:
                agreement[(a, b)] = all(
                    ra.actual == rb.actual
                    for ra, rb in zip(results[a], results[b])
                    if ra.error is None and rb.error is None)
        return EvalReport(fn_id, results, agreement)

    def select_implementation(self, fn_id: str) -> str:
        """Pick the fastest all-tests-passing implementation; ties break
        on the lexicographically smallest id. The choice becomes the
        default for plain evaluate() calls."""
        fn = self.get(fn_id)
        report = self.run_tests(fn_id)
        passing = report.passing()
        if not passing:
            raise AbstextError(NO_PASSING_IMPLEMENTATION,
                               f"{fn_id!r} has no implementation passing all tests")
        best = min(passing, key=lambda impl: (report.mean_time(impl), impl))
        fn.selected = best
        return best

    # -- cache --------------------------------------------------------------

    def clear_cache(self):
        self._cache.clear()

    def cache_stats(self) -> tuple:
        """(hits, misses, entries) since the last clear."""
        return (self._cache.hits, self._cache.misses, self._cache.entries)

    # -- documents ------------------------------------------------------------

    def load_doc(self, doc: dict, *, defer_implementations: bool = False):
        """Register one function document. With defer_implementations the
        interface is registered bare and (fn_id, impls) is returned so
        cross-referencing compositions can be attached in a second pass."""
        try:
            params = tuple(Param(p["name"], p.get("type", "any"),
                                 bool(p.get("optional", False)))
                           for p in doc.get("params", []))
            tests = tuple(TestCase(tuple(from_jsonable(a) for a in t["args"]),
                                   from_jsonable(t["expected"]))
                          for t in doc.get("tests", []))
            pre = tuple(parse_value_text(e) for e in doc.get("preconditions", []))
            post = tuple(parse_value_text(e) for e in doc.get("postconditions", []))
            impls = []
            for raw in doc.get("implementations", []):
                if raw.get("kind") == "builtin":
                    impls.append(Implementation(raw["id"], "builtin", builtin=raw["name"]))
                else:
                    expr = parse_value_text(raw["expr"])
                    if not isinstance(expr, Call):
                        raise AbstextError(INVALID_DOCUMENT,
                                           f"composition {raw['id']!r} is not a call")
                    impls.append(Implementation(raw["id"], "composition", expr=expr))
            fn = FunctionDef(
                id=doc["id"], params=params, return_type=doc.get("return_type", "any"),
                pure=bool(doc.get("pure", True)), labels=dict(doc.get("labels", {})),
                doc=doc.get("doc", ""), tests=tests, preconditions=pre,
                postconditions=post,
            )
        except KeyError as exc:
            raise AbstextError(INVALID_DOCUMENT,
                               f"function document missing field {exc}") from None
        self.register(fn)
        if defer_implementations:
            return fn.id, impls
        for impl in impls:
            self.add_implementation(fn.id, impl)
        return fn.id, []

    def to_doc(self, fn_id: str) -> dict:
        fn = self.get(fn_id)
        return {
            "id": fn.id,
            "labels": dict(fn.labels),
            "doc": fn.doc,
            "params": [{"name": p.name, "type": p.type,
                        **({"optional": True} if p.optional else {})}
                       for p in fn.params],
            "return_type": fn.return_type,
            "pure": fn.pure,
            "preconditions": [serialize_value(e) for e in fn.preconditions],
            "postconditions": [serialize_value(e) for e in fn.postconditions],
            "tests": [{"args": [to_jsonable(a) for a in t.args],
                       "expected": to_jsonable(t.expected)} for t in fn.tests],
            "implementations": [
                {"id": i.id, "kind": "builtin", "name": i.builtin}
                if i.kind == "builtin" else
                {"id": i.id, "kind": "composition", "expr": serialize_value(i.expr)}
                for i in fn.implementations
            ],
        }
