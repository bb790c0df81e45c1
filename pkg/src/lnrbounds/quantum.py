"""Singlet-state correlations with finite visibility and the resulting violation S."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import (
    BoundReport,
    Settings,
    SettingsCategoryI,
    SettingsCategoryII,
    bound_category_I,
    bound_category_II,
)
from .errors import AngleRangeError
from .geometry import UnitVec3

LHS_FLOOR = 1e-12


@dataclass(frozen=True)
class CorrelationModel:
    """Singlet state mixed with white noise: <AB> = -V a.b."""

    visibility: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.visibility <= 1.0:
            raise AngleRangeError(f"visibility {self.visibility} outside [0, 1]")


@dataclass(frozen=True)
class ViolationReport:
    lhs: float
    bound: float
    S: float
    ratio: float | None
    bound_report: BoundReport


def correlation(model: CorrelationModel, a: UnitVec3, b: UnitVec3) -> float:
    return -model.visibility * a.dot(b)


def lhs_category_I(model: CorrelationModel, s: SettingsCategoryI) -> float:
    """(1/3) sum_i |<A_i B_i> + <A_i B2_i>|."""
    total = 0.0
    for a, b, b2 in zip(s.a, s.b, s.b2):
        total += abs(correlation(model, a, b) + correlation(model, a, b2))
    return total / 3.0


def lhs_category_II(model: CorrelationModel, s: SettingsCategoryII) -> float:
    """(1/3) sum_i |<A_i B_i> - <A_i B_{i+1}>|."""
    total = 0.0
    for i in range(3):
        a = s.a[i]
        total += abs(correlation(model, a, s.b[i]) - correlation(model, a, s.b[(i + 1) % 3]))
    return total / 3.0


def lhs(model: CorrelationModel, settings: Settings) -> float:
    if isinstance(settings, SettingsCategoryI):
        return lhs_category_I(model, settings)
    return lhs_category_II(model, settings)


def evaluate_violation(
    model: CorrelationModel, settings: Settings, category: str | None = None
) -> ViolationReport:
    """LHS, bound and S = lhs - bound; S > 0 is a violation.

    ``ratio`` is bound / lhs (the threshold visibility when evaluated at V = 1),
    or None when the LHS vanishes.
    """
    if category is not None and category != settings.category:
        raise ValueError(f"settings are category {settings.category}, not {category}")
    if isinstance(settings, SettingsCategoryI):
        left, rep = lhs_category_I(model, settings), bound_category_I(settings)
    else:
        left, rep = lhs_category_II(model, settings), bound_category_II(settings)
    ratio = rep.bound / left if left > LHS_FLOOR else None
    return ViolationReport(lhs=left, bound=rep.bound, S=left - rep.bound, ratio=ratio, bound_report=rep)


def lhs_category_I_batch(visibility: float, a: np.ndarray, b: np.ndarray, b2: np.ndarray) -> np.ndarray:
    """Vectorized category I LHS; arrays are (n, 3, 3)."""
    return visibility * np.abs(np.sum(a * (b + b2), axis=-1)).sum(axis=-1) / 3.0


def lhs_category_II_batch(visibility: float, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    b_next = np.roll(b, -1, axis=-2)
    return visibility * np.abs(np.sum(a * (b - b_next), axis=-1)).sum(axis=-1) / 3.0
