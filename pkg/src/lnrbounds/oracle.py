"""Brute-force minimization of F(v) = sum_i |e_i . v| over the unit sphere.

This module never touches the closed-form formula for the minimum; it exists
to check it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import AngleRangeError, LNRError
from .geometry import UnitVec3, random_unit_vectors

DEFAULT_COARSE_STEP = 0.02
REFINE_ROUNDS = 2
REFINE_FACTOR = 10
AGREEMENT_TOL = 5e-3
# Number of well-separated coarse minima refined independently.
N_SEEDS = 8
# Patch re-centerings allowed per refinement round.
MAX_RECENTER = 50


@dataclass(frozen=True)
class OracleResult:
    L_est: float
    argmin: UnitVec3
    resolution: float
    refined: bool
    round_minima: tuple[float, ...] = ()


@dataclass(frozen=True)
class VertexCheck:
    vertex_min: float
    global_min: float
    agrees: bool
    vertex_argmin: UnitVec3


def projection_sum(e: np.ndarray, v: np.ndarray) -> np.ndarray:
    """F evaluated at each row of ``v`` (n, 3) for the triple ``e`` (3, 3)."""
    return np.abs(v @ np.asarray(e, dtype=float).T).sum(axis=-1)


@lru_cache(maxsize=8)
def sphere_grid(step: float) -> np.ndarray:
    """Latitude-longitude grid with longitude spacing ~ step / sin(theta); poles included."""
    n_theta = max(2, int(math.ceil(math.pi / step)))
    thetas = np.linspace(0.0, math.pi, n_theta + 1)
    points = [np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])]
    for theta in thetas[1:-1]:
        st = math.sin(theta)
        n_phi = max(3, int(math.ceil(2.0 * math.pi * st / step)))
        phis = np.linspace(-math.pi, math.pi, n_phi, endpoint=False)
        ring = np.column_stack(
            [st * np.cos(phis), st * np.sin(phis), np.full(n_phi, math.cos(theta))]
        )
        points.append(ring)
    grid = np.vstack(points)
    grid.setflags(write=False)
    return grid


def _local_patch(center: np.ndarray, half_width: float, step: float) -> np.ndarray:
    """Square grid in the tangent plane at ``center`` projected back onto the sphere."""
    helper = np.array([1.0, 0.0, 0.0]) if abs(center[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    t1 = np.cross(center, helper)
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(center, t1)
    k = int(round(half_width / step))
    offsets = np.arange(-k, k + 1) * step
    u, w = np.meshgrid(offsets, offsets, indexing="ij")
    pts = center + u.reshape(-1, 1) * t1 + w.reshape(-1, 1) * t2
    return pts / np.linalg.norm(pts, axis=1)[:, None]


def _descend_patch(
    e: np.ndarray, center: np.ndarray, half_width: float, step: float
) -> tuple[np.ndarray, float]:
    """Minimize F on a local patch, re-centering while the minimum sits on the patch edge."""
    k = int(round(half_width / step))
    value = float(projection_sum(e, center[None, :])[0])
    for _ in range(MAX_RECENTER):
        patch = _local_patch(center, half_width, step)
        vals = projection_sum(e, patch)
        i = int(np.argmin(vals))
        if vals[i] >= value:
            break
        center, value = patch[i], float(vals[i])
        row, col = divmod(i, 2 * k + 1)
        if 0 < row < 2 * k and 0 < col < 2 * k:
            break
    return center, value


def _coarse_seeds(grid: np.ndarray, values: np.ndarray, min_sep: float, n: int) -> list[int]:
    order = np.argsort(values, kind="stable")
    cos_sep = math.cos(min_sep)
    chosen: list[int] = []
    for idx in order:
        p = grid[idx]
        if all(float(p @ grid[c]) < cos_sep for c in chosen):
            chosen.append(int(idx))
            if len(chosen) == n:
                break
    return chosen


def sphere_min_bruteforce(
    e1: UnitVec3, e2: UnitVec3, e3: UnitVec3, coarse_step: float = DEFAULT_COARSE_STEP
) -> OracleResult:
    """Dense grid search for min F, then two rounds of 10x finer local grids.

    Several well-separated coarse minima are refined, not just the best one,
    so that near-tied vertices do not send the refinement into the wrong basin.
    """
    if not 1e-3 <= coarse_step <= 0.1:
        raise AngleRangeError(f"coarse_step={coarse_step} outside [1e-3, 0.1]")
    e = np.array([e1.as_array(), e2.as_array(), e3.as_array()])
    grid = sphere_grid(float(coarse_step))
    values = projection_sum(e, grid)
    seeds = _coarse_seeds(grid, values, 5.0 * coarse_step, N_SEEDS)

    best_value = float(values[seeds[0]])
    best_point = grid[seeds[0]]
    round_minima = [best_value]
    centers = [grid[i] for i in seeds]
    step = coarse_step
    for _ in range(REFINE_ROUNDS):
        half_width = 1.5 * step
        step = step / REFINE_FACTOR
        new_centers = []
        for c in centers:
            point, value = _descend_patch(e, c, half_width, step)
            new_centers.append(point)
            if value < best_value:
                best_value, best_point = value, point
        centers = new_centers
        round_minima.append(best_value)
    return OracleResult(
        L_est=best_value,
        argmin=UnitVec3.of(best_point),
        resolution=step,
        refined=True,
        round_minima=tuple(round_minima),
    )


def vertex_minimum_check(
    e1: UnitVec3, e2: UnitVec3, e3: UnitVec3, coarse_step: float = DEFAULT_COARSE_STEP
) -> VertexCheck:
    """Compare min F over the six points +-(e_j x e_k)/|e_j x e_k| with the grid minimum."""
    e = np.array([e1.as_array(), e2.as_array(), e3.as_array()])
    if abs(float(np.linalg.det(e))) < 1e-9:
        raise LNRError("vectors are linearly dependent; the vertices are undefined")
    verts = []
    for j, k in ((1, 2), (2, 0), (0, 1)):
        c = np.cross(e[j], e[k])
        c /= np.linalg.norm(c)
        verts.extend([c, -c])
    verts = np.array(verts)
    vals = projection_sum(e, verts)
    i = int(np.argmin(vals))
    brute = sphere_min_bruteforce(e1, e2, e3, coarse_step)
    vertex_min = float(vals[i])
    return VertexCheck(
        vertex_min=vertex_min,
        global_min=brute.L_est,
        agrees=abs(vertex_min - brute.L_est) <= AGREEMENT_TOL,
        vertex_argmin=UnitVec3.of(verts[i]),
    )


def random_independent_triples(
    rng: np.random.Generator, n: int, min_abs_triple: float = 0.05
) -> list[tuple[UnitVec3, UnitVec3, UnitVec3]]:
    """``n`` triples of uniform sphere points with |e1.(e2 x e3)| > min_abs_triple."""
    out = []
    while len(out) < n:
        e = random_unit_vectors(rng, 3)
        if abs(float(np.linalg.det(e))) > min_abs_triple:
            out.append(tuple(UnitVec3.of(row) for row in e))
    return out
