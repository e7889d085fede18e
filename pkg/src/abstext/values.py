"""Runtime values shared across the registry, lexicon and renderers.

The evaluator's value domain is: int, str, bool, ItemRef (from model),
EnumRef, list, Features, MissingForm, Absent, plus Phrase / content nodes
defined elsewhere. Everything in the domain is immutable and serializable
(see codec) so values can be used as cache keys.
"""

from dataclasses import dataclass


#: allowed grammatical dimensions and their values
DIMENSIONS = {
    "person": (1, 2, 3),
    "number": ("sg", "pl"),
    "tense": ("present", "past"),
    "case": ("nominative", "genitive", "dative", "accusative"),
    "gender": ("m", "f", "n"),
    "degree": ("positive", "comparative", "superlative"),
    "definiteness": ("definite", "indefinite"),
}


class Features:
    """An immutable, hashable bundle of grammatical features.

    At most one value per dimension; unknown dimensions or values are
    rejected at construction time.
    """

    __slots__ = ("_items",)

    def __init__(self, **kw):
        for dim, val in kw.items():
            if dim not in DIMENSIONS:
                raise ValueError(f"unknown feature dimension {dim!r}")
            if val not in DIMENSIONS[dim]:
                raise ValueError(f"invalid value {val!r} for feature {dim!r}")
        object.__setattr__(self, "_items", frozenset(kw.items()))

    @classmethod
    def from_dict(cls, d: dict) -> "Features":
        return cls(**d)

    def get(self, dim: str, default=None):
        for k, v in self._items:
            if k == dim:
                return v
        return default

    def replace(self, **kw) -> "Features":
        d = self.to_dict()
        d.update(kw)
        return Features(**d)

    def to_dict(self) -> dict:
        return dict(sorted(self._items))

    def __contains__(self, dim: str) -> bool:
        return any(k == dim for k, _ in self._items)

    def __eq__(self, other) -> bool:
        return isinstance(other, Features) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in sorted(self._items, key=lambda p: p[0]))
        return f"Features({inner})"


@dataclass(frozen=True)
class EnumRef:
    """Reference to a zero-key constructor used as an enumeration value."""
    id: str


@dataclass(frozen=True)
class MissingForm:
    """A lexical gap. Returned as a value, never raised, so rendering can
    degrade instead of failing."""
    reason: str


class _Absent:
    """Singleton marking an optional argument that was not provided."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Absent"

    def __bool__(self):
        return False


Absent = _Absent()
