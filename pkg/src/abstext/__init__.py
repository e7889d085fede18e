"""abstext: abstract encyclopedic content rendered into natural language.

Content is a tree of constructor instantiations validated against a
community-editable catalog; per-language renderer functions hosted in a
typed function registry turn it into text, degrading gracefully when
lexical data is missing.
"""

__version__ = "0.1.0"

from .catalog import Catalog, ConstructorSpec, Diagnostic, KeySpec, validate
from .config import Config, load_config
from .engine import Engine
from .entities import EntityClient, EntityStore, Item
from .errors import AbstextError
from .lexicon import Lexeme, Lexicon
from .model import (Call, Content, ItemRef, edit_value, format_path, parse_path,
                    remove_list_element, resolve_path)
from .notation import SyntaxParseError, parse_content, parse_value_text, serialize_content
from .phrase import MissingPart, Phrase, join_list, linearize
from .registry import (EvalReport, FunctionDef, Implementation, Param, Registry,
                       SemanticType, TestCase)
from .render import LanguagePack, Omission, RenderOutcome
from .suggest import Candidate, suggest
from .values import Absent, EnumRef, Features, MissingForm

__all__ = [
    "AbstextError", "Absent", "Call", "Candidate", "Catalog", "Config",
    "ConstructorSpec", "Content", "Diagnostic", "Engine", "EntityClient",
    "EntityStore", "EnumRef", "EvalReport", "Features", "FunctionDef",
    "Implementation", "Item", "ItemRef", "KeySpec", "LanguagePack", "Lexeme",
    "Lexicon", "MissingForm", "MissingPart", "Omission", "Param", "Phrase",
    "Registry", "RenderOutcome", "SemanticType", "SyntaxParseError", "TestCase",
    "edit_value", "format_path", "join_list", "linearize", "load_config",
    "parse_content", "parse_path", "parse_value_text", "remove_list_element",
    "resolve_path", "serialize_content", "suggest", "validate",
]
