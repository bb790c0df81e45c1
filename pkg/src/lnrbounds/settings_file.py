"""JSON settings files.

Format::

    {"category": "I" | "II",
     "a":  [[x, y, z], [x, y, z], [x, y, z]],
     "b":  [[x, y, z], [x, y, z], [x, y, z]],
     "b2": [[x, y, z], [x, y, z], [x, y, z]]}   # category I only

Vectors are normalized on load.
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any

from .bounds import Settings, SettingsCategoryI, SettingsCategoryII
from .geometry import UnitVec3

log = logging.getLogger(__name__)

NORM_WARN_TOL = 1e-6


class SettingsFormatError(ValueError):
    """Structurally malformed settings (wrong arity, keys, or category)."""


def _vectors(raw: Any, key: str) -> tuple[UnitVec3, UnitVec3, UnitVec3]:
    if not isinstance(raw, list) or len(raw) != 3:
        raise SettingsFormatError(f"'{key}' must be a list of exactly 3 vectors")
    out = []
    for i, v in enumerate(raw):
        if not isinstance(v, (list, tuple)) or len(v) != 3:
            raise SettingsFormatError(f"'{key}[{i}]' must have 3 components")
        try:
            comps = [float(c) for c in v]
        except (TypeError, ValueError) as exc:
            raise SettingsFormatError(f"'{key}[{i}]' has a non-numeric component") from exc
        norm = math.sqrt(sum(c * c for c in comps))
        if norm > 0 and abs(norm - 1.0) > NORM_WARN_TOL:
            log.warning("%s[%d] has norm %.9g; normalizing", key, i, norm)
        out.append(UnitVec3.of(comps))
    return tuple(out)


def settings_from_dict(data: dict[str, Any]) -> Settings:
    if not isinstance(data, dict):
        raise SettingsFormatError("settings must be a JSON object")
    category = data.get("category")
    if category == "I":
        if "b2" not in data:
            raise SettingsFormatError("category I settings need 'b2'")
        return SettingsCategoryI(
            a=_vectors(data.get("a"), "a"), b=_vectors(data.get("b"), "b"), b2=_vectors(data["b2"], "b2")
        )
    if category == "II":
        if "b2" in data:
            raise SettingsFormatError("category II settings take no 'b2'")
        return SettingsCategoryII(a=_vectors(data.get("a"), "a"), b=_vectors(data.get("b"), "b"))
    raise SettingsFormatError(f"unknown category {category!r}; expected 'I' or 'II'")


def settings_to_dict(s: Settings) -> dict[str, Any]:
    out: dict[str, Any] = {"category": s.category}
    for key, arr in s.as_arrays().items():
        out[key] = [[float(c) for c in row] for row in arr]
    return out


def load_settings(path: str | Path) -> Settings:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SettingsFormatError(f"{path}: invalid JSON ({exc})") from exc
    return settings_from_dict(data)


def dump_settings(s: Settings, path: str | Path) -> None:
    Path(path).write_text(json.dumps(settings_to_dict(s), indent=2) + "\n")
