"""Conditions, life records and condition-variable resolution.

A condition is a plain mapping from column name to value.  Column names may
carry a unit suffix (temp_C, voltstress_V_per_mm, rh_frac); model formulas
refer to variables by their base name and resolution handles the suffix.
Temperature variables must carry an explicit _C or _K suffix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import DataError, MissingVariableError, UnitMismatchError
from .units import Temperature, to_kelvin

FAILED = "failed"
CENSORED = "censored"
STATUSES = (FAILED, CENSORED)

# Variables that can be computed from others when not supplied directly.
# Writing a model in terms of the ratio rather than its components avoids
# induced interactions, so the ratio is resolvable either way.
_DERIVED = {
    "voltstress": ("voltage", "thickness", lambda v, th: v / th),
}


@dataclass(frozen=True)
class LifeRecord:
    """One observation: a time, failed/censored status, and its condition."""

    time: float
    status: str
    condition: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.time > 0.0:
            raise DataError(f"lifetime must be > 0, got {self.time}")
        if self.status not in STATUSES:
            raise DataError(f"status must be one of {STATUSES}, got {self.status!r}")

    @property
    def failed(self) -> bool:
        return self.status == FAILED


def _prefix_matches(condition: Mapping[str, float], name: str) -> list[str]:
    prefix = name + "_"
    return [key for key in condition if key.startswith(prefix)]


def resolve_variable(condition: Mapping[str, float], name: str) -> float:
    """Look up a variable by base name, tolerating a unit-suffixed column.

    Falls back to the derived-variable table (for example voltstress =
    voltage / thickness) when no column matches.
    """
    if name in condition:
        return float(condition[name])
    matches = _prefix_matches(condition, name)
    if len(matches) == 1:
        return float(condition[matches[0]])
    if len(matches) > 1:
        raise MissingVariableError(
            f"variable {name!r} is ambiguous: columns {sorted(matches)}"
        )
    if name in _DERIVED:
        left, right, combine = _DERIVED[name]
        try:
            return combine(resolve_variable(condition, left), resolve_variable(condition, right))
        except MissingVariableError:
            pass
    raise MissingVariableError(f"condition has no variable {name!r}")


def resolve_kelvin(condition: Mapping[str, float], name: str) -> float:
    """Resolve a temperature variable to kelvin; the column must end in _C or _K."""
    candidates = []
    for suffix in ("_C", "_K"):
        if name.endswith(suffix):
            if name in condition:
                candidates.append(name)
            break
    else:
        for suffix in ("_C", "_K"):
            key = name + suffix
            if key in condition:
                candidates.append(key)
    if not candidates:
        if name in condition or _prefix_matches(condition, name):
            raise UnitMismatchError(
                f"temperature variable {name!r} needs an explicit _C or _K column suffix"
            )
        raise MissingVariableError(f"condition has no temperature variable {name!r}")
    if len(candidates) > 1:
        raise UnitMismatchError(f"temperature {name!r} supplied in both _C and _K")
    key = candidates[0]
    unit = "celsius" if key.endswith("_C") else "kelvin"
    return to_kelvin(Temperature(float(condition[key]), unit))
