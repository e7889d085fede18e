"""Runtime configuration: one optional JSON file plus environment
overrides (ABSTEXT_* variables win over the file)."""

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import AbstextError, INVALID_DOCUMENT

ENV_PREFIX = "ABSTEXT_"


@dataclass
class Config:
    host: str = "127.0.0.1"
    port: int = 8000
    data_dir: str | None = None
    cache_capacity: int = 10_000
    depth_limit: int = 256
    remote_fetch: bool = False
    remote_base_url: str = ""
    check_postconditions: str = "tests"  # "tests" | "always"


_FIELDS = {
    "host": str,
    "port": int,
    "data_dir": str,
    "cache_capacity": int,
    "depth_limit": int,
    "remote_fetch": bool,
    "remote_base_url": str,
    "check_postconditions": str,
}


def _coerce(name: str, raw: str):
    kind = _FIELDS[name]
    if kind is bool:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    return kind(raw)


def load_config(path: str | None = None, env: dict | None = None) -> Config:
    env = os.environ if env is None else env
    config = Config()
    file_path = path or env.get(ENV_PREFIX + "CONFIG")
    if file_path:
        try:
            data = json.loads(Path(file_path).read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise AbstextError(INVALID_DOCUMENT, f"cannot read config: {exc}") from None
        for name, value in data.items():
            if name not in _FIELDS:
                raise AbstextError(INVALID_DOCUMENT, f"unknown config field {name!r}")
            setattr(config, name, value)
    for name in _FIELDS:
        raw = env.get(ENV_PREFIX + name.upper())
        if raw is not None:
            setattr(config, name, _coerce(name, raw))
    if config.check_postconditions not in ("tests", "always"):
        raise AbstextError(INVALID_DOCUMENT,
                           "check_postconditions must be 'tests' or 'always'")
    return config
