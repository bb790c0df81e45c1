"""Checks of the algebraic steps behind the bounds on discrete outcome tables.

A table is a finite hidden-variable subensemble: each row is a weight and the
+-1 outcomes A (Alice), B and B2 (Bob's two settings) it produces.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import OutcomeDomainError

SLACK = 1e-12
WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class OutcomeTable:
    weights: np.ndarray
    A: np.ndarray
    B: np.ndarray
    B2: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        cols = [np.asarray(c) for c in (self.A, self.B, self.B2)]
        if w.ndim != 1 or w.size == 0:
            raise OutcomeDomainError("table must have at least one entry")
        if any(c.shape != w.shape for c in cols):
            raise OutcomeDomainError("column lengths differ")
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise OutcomeDomainError("weights must be positive")
        if abs(w.sum() - 1.0) > WEIGHT_SUM_TOL:
            raise OutcomeDomainError(f"weights sum to {w.sum()!r}, not 1")
        for c in cols:
            if not np.all((c == 1) | (c == -1)):
                raise OutcomeDomainError("outcomes must be +1 or -1")
        object.__setattr__(self, "weights", w)
        for name, c in zip(("A", "B", "B2"), cols):
            object.__setattr__(self, name, c.astype(float))

    @classmethod
    def from_entries(cls, entries) -> "OutcomeTable":
        """Rows of (weight, A, B) or (weight, A, B, B2); B2 defaults to B."""
        rows = [tuple(e) + ((e[2],) if len(e) == 3 else ()) for e in entries]
        if not rows:
            raise OutcomeDomainError("table must have at least one entry")
        w, a, b, b2 = (np.array(col, dtype=float) for col in zip(*rows))
        return cls(w, a, b, b2)

    @classmethod
    def from_csv(cls, source: str | Path | io.TextIOBase) -> "OutcomeTable":
        """Read a ``weight,A,B,B2`` CSV."""
        if isinstance(source, (str, Path)):
            with open(source, newline="") as fh:
                return cls.from_csv(fh)
        reader = csv.DictReader(source)
        missing = {"weight", "A", "B", "B2"} - set(reader.fieldnames or ())
        if missing:
            raise OutcomeDomainError(f"CSV is missing columns: {sorted(missing)}")
        try:
            entries = [
                (float(r["weight"]), float(r["A"]), float(r["B"]), float(r["B2"])) for r in reader
            ]
        except (TypeError, ValueError) as exc:
            raise OutcomeDomainError(f"malformed CSV row: {exc}") from exc
        return cls.from_entries(entries)

    def mean(self, column: np.ndarray) -> float:
        return float(np.dot(self.weights, column))


@dataclass(frozen=True)
class SubensembleReport:
    lhs_plus: float
    lhs_minus: float
    rhs_plus: float
    rhs_minus: float
    holds: bool


@dataclass(frozen=True)
class TriangleReport:
    lhs_plus: float
    lhs_minus: float
    rhs_plus: float
    rhs_minus: float
    holds: bool


def check_pointwise_identity(A: int, B: int) -> bool:
    """-1 + |A+B| == AB == 1 - |A-B| for outcomes in {-1, +1}."""
    if A not in (-1, 1) or B not in (-1, 1):
        raise OutcomeDomainError(f"outcomes ({A}, {B}) not in {{-1, +1}}")
    return (-1 + abs(A + B)) == A * B == (1 - abs(A - B))


def check_subensemble_inequality(t: OutcomeTable) -> SubensembleReport:
    """|mean A +- mean B| <= 1 +- mean(AB)."""
    a_bar, b_bar, ab = t.mean(t.A), t.mean(t.B), t.mean(t.A * t.B)
    lhs_plus, lhs_minus = abs(a_bar + b_bar), abs(a_bar - b_bar)
    rhs_plus, rhs_minus = 1.0 + ab, 1.0 - ab
    holds = lhs_plus <= rhs_plus + SLACK and lhs_minus <= rhs_minus + SLACK
    return SubensembleReport(lhs_plus, lhs_minus, rhs_plus, rhs_minus, holds)


def check_triangle_step(t: OutcomeTable) -> TriangleReport:
    """|mean(AB) +- mean(AB2)| <= 2 - |mean B -+ mean B2|."""
    ab, ab2 = t.mean(t.A * t.B), t.mean(t.A * t.B2)
    b_bar, b2_bar = t.mean(t.B), t.mean(t.B2)
    lhs_plus, lhs_minus = abs(ab + ab2), abs(ab - ab2)
    rhs_plus, rhs_minus = 2.0 - abs(b_bar - b2_bar), 2.0 - abs(b_bar + b2_bar)
    holds = lhs_plus <= rhs_plus + SLACK and lhs_minus <= rhs_minus + SLACK
    return TriangleReport(lhs_plus, lhs_minus, rhs_plus, rhs_minus, holds)


def random_table(rng: np.random.Generator, max_size: int = 32) -> OutcomeTable:
    size = int(rng.integers(1, max_size + 1))
    w = rng.dirichlet(np.ones(size))
    signs = rng.choice(np.array([-1.0, 1.0]), size=(3, size))
    return OutcomeTable(w, signs[0], signs[1], signs[2])
