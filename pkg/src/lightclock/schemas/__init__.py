"""JSON Schemas for the machine-readable CLI outputs."""

import json
from importlib.resources import files

_NAMES = ("radar_records", "derive_report", "decay_report")


def load_schema(name: str) -> dict:
    """Load one of the shipped schemas by name (without the suffix)."""
    if name not in _NAMES:
        raise KeyError(f"unknown schema {name!r}; available: {', '.join(_NAMES)}")
    path = files(__package__).joinpath(f"{name}.schema.json")
    return json.loads(path.read_text(encoding="utf-8"))
