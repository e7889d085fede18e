"""Abstract content trees: constructor calls with typed key-value arguments.

A value in a tree is one of:
  int              integer literal
  str              text literal
  ItemRef          knowledge-base item reference (Q-id)
  tuple            ordered list of values
  Call             constructor instantiation, enumeration value, or
                   function call -- which of the three is decided against
                   the catalog/registry, not at parse time

Trees are immutable by convention: edits go through edit_value, which
returns a new tree and leaves the original untouched.
"""

import re
from dataclasses import dataclass, field

from .errors import AbstextError, PATH_NOT_FOUND

ITEM_ID_RE = re.compile(r"Q[1-9][0-9]*")


@dataclass(frozen=True)
class ItemRef:
    qid: str

    def __post_init__(self):
        if not ITEM_ID_RE.fullmatch(self.qid):
            raise ValueError(f"invalid item id {self.qid!r}")

    def __repr__(self):
        return f"ItemRef({self.qid})"


@dataclass(frozen=True, eq=True)
class Call:
    """A named node: `Name(key: value, ...)` or bare `Name`.

    Constructor instantiations carry named arguments only; function-call
    values may also carry positional arguments.
    """
    name: str
    args: dict = field(default_factory=dict)
    positional: tuple = ()

    __hash__ = None

    def is_bare(self) -> bool:
        return not self.args and not self.positional


@dataclass(frozen=True, eq=True)
class Content:
    """A whole document: one root constructor instantiation."""
    root: Call

    __hash__ = None


Value = "int | str | ItemRef | tuple | Call"

Path = "tuple[str | int, ...]"


def freeze_value(v):
    """Normalize a value built by hand: lists become tuples, recursively."""
    if isinstance(v, (list, tuple)):
        return tuple(freeze_value(e) for e in v)
    if isinstance(v, Call):
        return Call(v.name, {k: freeze_value(a) for k, a in v.args.items()},
                    tuple(freeze_value(p) for p in v.positional))
    return v


def format_path(path) -> str:
    out = []
    for part in path:
        if isinstance(part, int):
            out.append(f"[{part}]")
        else:
            out.append(("." if out else "") + part)
    return "".join(out)


_PATH_TOKEN = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)|\[([0-9]+)\]|\.")


def parse_path(text: str):
    """Parse `content[1].rank` into ('content', 1, 'rank')."""
    path, pos = [], 0
    while pos < len(text):
        m = _PATH_TOKEN.match(text, pos)
        if not m:
            raise AbstextError(PATH_NOT_FOUND, f"malformed path {text!r}")
        if m.group(1) is not None:
            path.append(m.group(1))
        elif m.group(2) is not None:
            path.append(int(m.group(2)))
        pos = m.end()
    if not path:
        raise AbstextError(PATH_NOT_FOUND, "empty path")
    return tuple(path)


def _step(value, part, prefix):
    at = format_path(prefix) or "<root>"
    if isinstance(value, Call):
        if isinstance(part, str):
            if part in value.args:
                return value.args[part]
            raise AbstextError(PATH_NOT_FOUND, f"no key {part!r} at {at}",
                               path=format_path(prefix + (part,)))
        if 0 <= part < len(value.positional):
            return value.positional[part]
        raise AbstextError(PATH_NOT_FOUND, f"no positional argument {part} at {at}",
                           path=format_path(prefix + (part,)))
    if isinstance(value, tuple):
        if isinstance(part, int) and 0 <= part < len(value):
            return value[part]
        raise AbstextError(PATH_NOT_FOUND, f"no element {part!r} at {at}",
                           path=format_path(prefix + (part,)))
    raise AbstextError(PATH_NOT_FOUND, f"cannot descend into scalar at {at}",
                       path=format_path(prefix + (part,)))


def resolve_path(content: Content, path):
    """Return the value at `path` (a tuple of key ids / list indices)."""
    value = content.root
    for i, part in enumerate(path):
        value = _step(value, part, tuple(path[:i]))
    return value


def _rebuild(value, path, new, prefix):
    if not path:
        return freeze_value(new)
    part = path[0]
    child = _step(value, part, prefix)  # raises PATH_NOT_FOUND
    rebuilt = _rebuild(child, path[1:], new, prefix + (part,))
    if isinstance(value, Call):
        if isinstance(part, str):
            args = dict(value.args)
            args[part] = rebuilt
            return Call(value.name, args, value.positional)
        positional = list(value.positional)
        positional[part] = rebuilt
        return Call(value.name, dict(value.args), tuple(positional))
    out = list(value)
    out[part] = rebuilt
    return tuple(out)


def edit_value(content: Content, path, new) -> Content:
    """Return a copy of `content` with the value at `path` replaced.

    The input tree is never modified, so callers can keep it for undo.
    """
    if not path:
        root = freeze_value(new)
        if not isinstance(root, Call):
            raise AbstextError(PATH_NOT_FOUND, "root replacement must be a constructor")
        return Content(root)
    return Content(_rebuild(content.root, tuple(path), new, ()))


def remove_list_element(content: Content, path, index: int) -> Content:
    """Drop one element from the list at `path` (non-destructive)."""
    current = resolve_path(content, path)
    if not isinstance(current, tuple) or not (0 <= index < len(current)):
        raise AbstextError(PATH_NOT_FOUND,
                           f"no list element {index} at {format_path(path)}")
    return edit_value(content, path, current[:index] + current[index + 1:])


def iter_calls(value, path=()):
    """Yield (path, Call) for every call node in a tree, depth first."""
    if isinstance(value, Content):
        value = value.root
    if isinstance(value, Call):
        yield path, value
        for key, arg in value.args.items():
            yield from iter_calls(arg, path + (key,))
        for i, arg in enumerate(value.positional):
            yield from iter_calls(arg, path + (i,))
    elif isinstance(value, tuple):
        for i, el in enumerate(value):
            yield from iter_calls(el, path + (i,))


def iter_item_refs(value, path=()):
    """Yield (path, ItemRef) for every item reference in a tree."""
    if isinstance(value, Content):
        value = value.root
    if isinstance(value, ItemRef):
        yield path, value
    elif isinstance(value, Call):
        for key, arg in value.args.items():
            yield from iter_item_refs(arg, path + (key,))
        for i, arg in enumerate(value.positional):
            yield from iter_item_refs(arg, path + (i,))
    elif isinstance(value, tuple):
        for i, el in enumerate(value):
            yield from iter_item_refs(el, path + (i,))
