"""Minimum-projection function L and the right-hand sides of the two LNR inequalities.

For three unit vectors e1, e2, e3 the function F(v) = sum_i |e_i . v| has its
minimum over the sphere at one of the normalized cross products e_j x e_k, which
gives

    L = |e1 . (e2 x e3)| / max(|e1 x e2|, |e2 x e3|, |e3 x e1|).

Category I (3 Alice + 6 Bob settings) bound:  2 - (2/3) sin(beta*/2) L_n
Category II (3 Alice + 3 Bob settings) bound: 2 - (2/3) cos(delta*/2) L_m
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DegeneratePairError, DegenerateSettingsError, UnrealizableAnglesError
from .geometry import UnitVec3, difference_direction, sum_direction, triple_product

# |triple product| below this => treated as linearly dependent, bound = 2.
DEPENDENCE_TOL = 1e-9
RADICAND_CLAMP = 1e-12

Category = Literal["I", "II"]


def _triple(vectors: Sequence[UnitVec3], name: str) -> tuple[UnitVec3, UnitVec3, UnitVec3]:
    vs = tuple(v if isinstance(v, UnitVec3) else UnitVec3.of(v) for v in vectors)
    if len(vs) != 3:
        raise ValueError(f"{name} must hold exactly 3 vectors, got {len(vs)}")
    return vs


@dataclass(frozen=True)
class SettingsCategoryI:
    """Alice's a[i] paired with each of Bob's b[i] and b2[i]."""

    a: tuple[UnitVec3, UnitVec3, UnitVec3]
    b: tuple[UnitVec3, UnitVec3, UnitVec3]
    b2: tuple[UnitVec3, UnitVec3, UnitVec3]

    category = "I"

    def __post_init__(self):
        object.__setattr__(self, "a", _triple(self.a, "a"))
        object.__setattr__(self, "b", _triple(self.b, "b"))
        object.__setattr__(self, "b2", _triple(self.b2, "b2"))

    def as_arrays(self) -> dict[str, np.ndarray]:
        return {k: np.array([v.as_array() for v in getattr(self, k)]) for k in ("a", "b", "b2")}


@dataclass(frozen=True)
class SettingsCategoryII:
    """Alice's a[i] paired with Bob's b[i] and b[i+1 mod 3]."""

    a: tuple[UnitVec3, UnitVec3, UnitVec3]
    b: tuple[UnitVec3, UnitVec3, UnitVec3]

    category = "II"

    def __post_init__(self):
        object.__setattr__(self, "a", _triple(self.a, "a"))
        object.__setattr__(self, "b", _triple(self.b, "b"))

    def as_arrays(self) -> dict[str, np.ndarray]:
        return {k: np.array([v.as_array() for v in getattr(self, k)]) for k in ("a", "b")}


Settings = SettingsCategoryI | SettingsCategoryII


@dataclass(frozen=True)
class BoundReport:
    L: float
    extremal_angle: float
    bound: float
    degenerate: bool
    per_pair_angles: tuple[float, float, float]
    category: Category


def min_abs_projection_closed_form(e1: UnitVec3, e2: UnitVec3, e3: UnitVec3) -> float:
    """Global minimum of |e1.v| + |e2.v| + |e3.v| over unit v. Returns 0 for dependent input."""
    det = abs(triple_product(e1, e2, e3))
    if det < DEPENDENCE_TOL:
        return 0.0
    denom = max(
        float(np.linalg.norm(e1.cross(e2))),
        float(np.linalg.norm(e2.cross(e3))),
        float(np.linalg.norm(e3.cross(e1))),
    )
    return det / denom


def min_abs_projection_batch(e: np.ndarray) -> np.ndarray:
    """Vectorized closed form over an (..., 3, 3) stack of row-vector triples."""
    e = np.asarray(e, dtype=float)
    det = np.abs(np.linalg.det(e))
    crosses = np.stack(
        [
            np.linalg.norm(np.cross(e[..., 0, :], e[..., 1, :]), axis=-1),
            np.linalg.norm(np.cross(e[..., 1, :], e[..., 2, :]), axis=-1),
            np.linalg.norm(np.cross(e[..., 2, :], e[..., 0, :]), axis=-1),
        ],
        axis=-1,
    )
    denom = crosses.max(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        L = np.where(det < DEPENDENCE_TOL, 0.0, det / np.where(denom > 0, denom, 1.0))
    return L


def min_abs_projection_angle_form(alpha12: float, alpha23: float, alpha31: float) -> float:
    """Same minimum written in terms of the three pairwise angles (radians)."""
    for alpha in (alpha12, alpha23, alpha31):
        if not 0.0 <= alpha <= math.pi:
            raise UnrealizableAnglesError(f"angle {alpha} outside [0, pi]")
    c12, c23, c31 = math.cos(alpha12), math.cos(alpha23), math.cos(alpha31)
    radicand = 1.0 - c12 * c12 - c23 * c23 - c31 * c31 + 2.0 * c12 * c23 * c31
    if radicand < -RADICAND_CLAMP:
        raise UnrealizableAnglesError(
            f"angles ({alpha12}, {alpha23}, {alpha31}) violate the spherical triangle inequality"
        )
    numerator = math.sqrt(max(0.0, radicand))
    denom = max(math.sin(alpha12), math.sin(alpha23), math.sin(alpha31))
    if numerator == 0.0 or denom == 0.0:
        return 0.0
    return numerator / denom


def _report(
    directions: list[UnitVec3], angles: list[float], extremal: float, trig: float, category: Category
) -> BoundReport:
    L = min_abs_projection_closed_form(*directions)
    degenerate = L == 0.0
    bound = 2.0 if degenerate else 2.0 - (2.0 / 3.0) * trig * L
    return BoundReport(
        L=L,
        extremal_angle=extremal,
        bound=bound,
        degenerate=degenerate,
        per_pair_angles=tuple(angles),
        category=category,
    )


def bound_category_I(s: SettingsCategoryI) -> BoundReport:
    """Right-hand side ``2 - (2/3) sin(beta*/2) L_n`` with beta* the smallest pair angle."""
    directions, angles = [], []
    for i, (b, b2) in enumerate(zip(s.b, s.b2)):
        try:
            n, beta = difference_direction(b, b2)
        except DegeneratePairError as exc:
            raise DegenerateSettingsError(f"b[{i}] and b2[{i}] coincide") from exc
        directions.append(n)
        angles.append(beta)
    beta_star = min(angles)
    return _report(directions, angles, beta_star, math.sin(beta_star / 2.0), "I")


def bound_category_II(s: SettingsCategoryII) -> BoundReport:
    """Right-hand side ``2 - (2/3) cos(delta*/2) L_m`` with delta* the largest pair angle."""
    directions, angles = [], []
    for i in range(3):
        j = (i + 1) % 3
        try:
            m, delta = sum_direction(s.b[i], s.b[j])
        except DegeneratePairError as exc:
            raise DegenerateSettingsError(f"b[{i}] and b[{j}] are antipodal") from exc
        directions.append(m)
        angles.append(delta)
    delta_star = max(angles)
    return _report(directions, angles, delta_star, math.cos(delta_star / 2.0), "II")


def bound(s: Settings) -> BoundReport:
    if isinstance(s, SettingsCategoryI):
        return bound_category_I(s)
    return bound_category_II(s)


def bound_category_I_batch(b: np.ndarray, b2: np.ndarray) -> np.ndarray:
    """Category I bounds for stacks of Bob settings, each (n, 3, 3).

    Degenerate pairs or dependent directions give the trivial bound 2.
    """
    diff = b - b2
    chord = np.linalg.norm(diff, axis=-1)
    beta = np.arccos(np.clip(np.sum(b * b2, axis=-1), -1.0, 1.0))
    bad = (beta < 1e-9).any(axis=-1)
    n = diff / np.where(chord > 0, chord, 1.0)[..., None]
    L = min_abs_projection_batch(n)
    out = 2.0 - (2.0 / 3.0) * np.sin(beta.min(axis=-1) / 2.0) * L
    return np.where(bad | (L == 0.0), 2.0, out)


def bound_category_II_batch(b: np.ndarray) -> np.ndarray:
    """Category II bounds for a stack of Bob settings (n, 3, 3)."""
    b_next = np.roll(b, -1, axis=-2)
    total = b + b_next
    chord = np.linalg.norm(total, axis=-1)
    delta = np.arccos(np.clip(np.sum(b * b_next, axis=-1), -1.0, 1.0))
    bad = (delta > np.pi - 1e-9).any(axis=-1)
    m = total / np.where(chord > 0, chord, 1.0)[..., None]
    L = min_abs_projection_batch(m)
    out = 2.0 - (2.0 / 3.0) * np.cos(delta.max(axis=-1) / 2.0) * L
    return np.where(bad | (L == 0.0), 2.0, out)
