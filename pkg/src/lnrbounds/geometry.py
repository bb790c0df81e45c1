"""Unit vectors on the Poincare sphere and the setting geometries built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import AngleRangeError, DegeneratePairError, LNRError

# Pairs closer than this (difference) or closer to antipodal (sum) are degenerate.
PAIR_DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class UnitVec3:
    """A point on the unit sphere. Components are normalized on construction."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if not math.isfinite(norm) or norm == 0.0:
            raise LNRError(f"cannot normalize vector ({self.x}, {self.y}, {self.z})")
        object.__setattr__(self, "x", float(self.x) / norm)
        object.__setattr__(self, "y", float(self.y) / norm)
        object.__setattr__(self, "z", float(self.z) / norm)

    @classmethod
    def of(cls, values: Iterable[float]) -> "UnitVec3":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def dot(self, other: "UnitVec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "UnitVec3") -> np.ndarray:
        return np.cross(self.as_array(), other.as_array())

    def __neg__(self) -> "UnitVec3":
        return UnitVec3(-self.x, -self.y, -self.z)

    def __iter__(self):
        return iter((self.x, self.y, self.z))


X = UnitVec3(1.0, 0.0, 0.0)
Y = UnitVec3(0.0, 1.0, 0.0)
Z = UnitVec3(0.0, 0.0, 1.0)


def from_spherical(theta: float, phi: float) -> UnitVec3:
    """Polar angle ``theta`` in [0, pi], azimuth ``phi`` in (-pi, pi]."""
    if not 0.0 <= theta <= math.pi:
        raise AngleRangeError(f"theta={theta} outside [0, pi]")
    if not -math.pi < phi <= math.pi:
        raise AngleRangeError(f"phi={phi} outside (-pi, pi]")
    st = math.sin(theta)
    return UnitVec3(st * math.cos(phi), st * math.sin(phi), math.cos(theta))


def angle_between(u: UnitVec3, v: UnitVec3) -> float:
    return math.acos(max(-1.0, min(1.0, u.dot(v))))


def triple_product(e1: UnitVec3, e2: UnitVec3, e3: UnitVec3) -> float:
    """Signed ``e1 . (e2 x e3)``."""
    return (
        e1.x * (e2.y * e3.z - e2.z * e3.y)
        + e1.y * (e2.z * e3.x - e2.x * e3.z)
        + e1.z * (e2.x * e3.y - e2.y * e3.x)
    )


def difference_direction(b: UnitVec3, b2: UnitVec3) -> tuple[UnitVec3, float]:
    """Direction of ``b - b2`` and the angle between them.

    ``b - b2 = 2 sin(beta/2) n``.
    """
    beta = angle_between(b, b2)
    if beta < PAIR_DEGENERACY_TOL:
        raise DegeneratePairError("coincident setting pair", angle=0.0)
    return UnitVec3(b.x - b2.x, b.y - b2.y, b.z - b2.z), beta


def sum_direction(b: UnitVec3, b2: UnitVec3) -> tuple[UnitVec3, float]:
    """Direction of ``b + b2`` and the angle between them.

    ``b + b2 = 2 cos(delta/2) m``.
    """
    delta = angle_between(b, b2)
    if delta > math.pi - PAIR_DEGENERACY_TOL:
        raise DegeneratePairError("antipodal setting pair", angle=math.pi)
    return UnitVec3(b.x + b2.x, b.y + b2.y, b.z + b2.z), delta


def symmetric_cone_triple(delta: float) -> tuple[UnitVec3, UnitVec3, UnitVec3]:
    """Three vectors about +z with every pairwise angle equal to ``delta``.

    Valid for ``0 < delta <= 2*pi/3``; at the upper end the triple is planar.
    """
    if not 0.0 < delta <= 2.0 * math.pi / 3.0 + 1e-12:
        raise AngleRangeError(f"delta={delta} outside (0, 2pi/3]")
    radicand = (2.0 * math.cos(delta) + 1.0) / 3.0
    # cos(2pi/3) is not exact in floating point; snap the planar endpoint.
    cos_theta = math.sqrt(radicand) if radicand > 1e-14 else 0.0
    sin_theta = math.sqrt(max(0.0, 1.0 - cos_theta * cos_theta))
    return tuple(
        UnitVec3(
            sin_theta * math.cos(2.0 * math.pi * i / 3.0),
            sin_theta * math.sin(2.0 * math.pi * i / 3.0),
            cos_theta,
        )
        for i in range(3)
    )


def random_unit_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    """``n`` uniform points on the sphere as an (n, 3) array (normalized Gaussians)."""
    g = rng.standard_normal((n, 3))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms == 0.0):  # pragma: no cover - measure zero
        bad = norms == 0.0
        g[bad] = rng.standard_normal((int(bad.sum()), 3))
        norms = np.linalg.norm(g, axis=1)
    return g / norms[:, None]


def rotate(v: UnitVec3, rotation: Rotation) -> UnitVec3:
    return UnitVec3.of(rotation.apply(v.as_array()))


def perturb_vectors(
    vectors: np.ndarray, max_angle: float, rng: np.random.Generator
) -> np.ndarray:
    """Rotate every vector in ``vectors`` (..., 3) by its own random small rotation.

    Each vector is turned by an angle uniform in ``[0, max_angle]`` about an
    axis drawn uniformly from the great circle orthogonal to it.
    """
    v = np.asarray(vectors, dtype=float)
    flat = v.reshape(-1, 3)
    n = flat.shape[0]
    angles = rng.uniform(0.0, 1.0, size=n) * max_angle
    psi = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return _turn(flat, angles, psi).reshape(v.shape)


def _turn(flat: np.ndarray, angles: np.ndarray, psi: np.ndarray) -> np.ndarray:
    # Rotating v about an axis k perpendicular to it moves v toward k x v.
    helper = np.where(
        (np.abs(flat[:, 0]) < 0.9)[:, None], np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    )
    t1 = np.cross(flat, helper)
    t1 /= np.linalg.norm(t1, axis=1)[:, None]
    t2 = np.cross(flat, t1)
    direction = np.cos(psi)[:, None] * t1 + np.sin(psi)[:, None] * t2
    out = np.cos(angles)[:, None] * flat + np.sin(angles)[:, None] * direction
    return out / np.linalg.norm(out, axis=1)[:, None]
