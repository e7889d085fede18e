"""Core function library installed into every registry.

Host callables for the arithmetic primitives (their public interfaces
ship as editable function documents), plus code-registered interfaces
for the infrastructure functions compositions rely on: lazy `if`,
equality, comparisons and list plumbing.
"""

import time

from .registry import FunctionDef, Implementation, Param, Registry


def _is_zero(ctx, x):
    return x == 0


def _add(ctx, x, y):
    return x + y


def _subtract(ctx, x, y):
    # natural subtraction: clamps at zero so the result stays a natural
    return max(x - y, 0)


def _multiply(ctx, x, y):
    return x * y


def _if(ctx, condition, then, otherwise):
    # eager fallback; composition evaluation short-circuits before this
    return then if condition else otherwise


def _equals(ctx, x, y):
    return x == y


def _greater_equal(ctx, x, y):
    return x >= y


def _list_concat(ctx, a, b):
    return tuple(a) + tuple(b)


def _list_map(ctx, fn_id, items):
    return tuple(ctx.call(fn_id, item) for item in items)


def _now_ms(ctx):
    return int(time.time() * 1000)


_BUILTINS = {
    "is_zero": _is_zero,
    "add": _add,
    "subtract": _subtract,
    "multiply": _multiply,
    "if": _if,
    "equals": _equals,
    "greater_equal": _greater_equal,
    "list_concat": _list_concat,
    "list_map": _list_map,
    "now_ms": _now_ms,
}


def _native(fn_id: str) -> list:
    return [Implementation("native", "builtin", builtin=fn_id)]


_CORE_DEFS = [
    FunctionDef("if",
                params=(Param("condition", "boolean"), Param("then", "any"),
                        Param("else", "any")),
                return_type="any", doc="lazy inside compositions",
                implementations=_native("if")),
    FunctionDef("equals",
                params=(Param("x", "any"), Param("y", "any")),
                return_type="boolean", labels={"en": "equality"},
                implementations=_native("equals")),
    FunctionDef("greater_equal",
                params=(Param("x", "integer"), Param("y", "integer")),
                return_type="boolean", implementations=_native("greater_equal")),
    FunctionDef("list_concat",
                params=(Param("a", "list"), Param("b", "list")),
                return_type="list", implementations=_native("list_concat")),
    FunctionDef("list_map",
                params=(Param("fn", "text"), Param("items", "list")),
                return_type="list", implementations=_native("list_map")),
    FunctionDef("now_ms", params=(), return_type="integer", pure=False,
                doc="wall clock; impure, so never cached",
                implementations=_native("now_ms")),
]


def install_core(registry: Registry):
    for name, fn in _BUILTINS.items():
        registry.register_builtin(name, fn)
    for fn_def in _CORE_DEFS:
        registry.register(fn_def)
