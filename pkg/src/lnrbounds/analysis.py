"""Maximal violations, the symmetric category II scan, threshold visibilities and
the imprecision (robustness) analysis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .bounds import (
    Settings,
    SettingsCategoryI,
    SettingsCategoryII,
    bound,
    bound_category_I_batch,
    bound_category_II_batch,
)
from .errors import AngleRangeError, LNRError
from .geometry import UnitVec3, perturb_vectors, symmetric_cone_triple
from .quantum import (
    CorrelationModel,
    ViolationReport,
    evaluate_violation,
    lhs,
    lhs_category_I_batch,
    lhs_category_II_batch,
)

GOLDEN_XTOL = 1e-10
WINDOW_XTOL = 1e-12
PERTURBATION_RADIUS = 0.01
PERTURBATION_SAMPLES = 2000
PERTURBATION_GAIN_TOL = 1e-6
DEFAULT_SCAN_STEP = math.radians(0.25)
MAX_EPSILON = 0.2


# --------------------------------------------------------------------------- category I


def structured_category_I(beta: float) -> SettingsCategoryI:
    """Category I settings with orthonormal difference directions and common angle ``beta``.

    Pair i lives in the plane of e_i (the difference direction) and e_{i+1};
    Alice measures along b_i + b2_i.
    """
    if not 0.0 < beta < math.pi:
        raise AngleRangeError(f"beta={beta} outside (0, pi)")
    basis = np.eye(3)
    c, s = math.cos(beta / 2.0), math.sin(beta / 2.0)
    a, b, b2 = [], [], []
    for i in range(3):
        n, w = basis[i], basis[(i + 1) % 3]
        a.append(UnitVec3.of(w))
        b.append(UnitVec3.of(c * w + s * n))
        b2.append(UnitVec3.of(c * w - s * n))
    return SettingsCategoryI(a=tuple(a), b=tuple(b), b2=tuple(b2))


@dataclass(frozen=True)
class CategoryIOptimum:
    settings: SettingsCategoryI
    report: ViolationReport
    beta: float
    max_perturbation_gain: float
    locally_optimal: bool


def golden_section_max(f, lo: float, hi: float, xtol: float = GOLDEN_XTOL) -> float:
    """Maximizer of a unimodal ``f`` on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > xtol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
    return 0.5 * (lo + hi)


def max_perturbation_gain(
    model: CorrelationModel,
    settings: Settings,
    radius: float = PERTURBATION_RADIUS,
    n_samples: int = PERTURBATION_SAMPLES,
    seed: int = 0,
) -> float:
    """Largest S improvement found by randomly turning every setting vector by <= radius."""
    base = evaluate_violation(model, settings).S
    S = _batch_S(model, settings, radius, n_samples, np.random.default_rng(seed))[0]
    return float(S.max() - base)


def optimize_category_I(model: CorrelationModel, seed: int = 0) -> CategoryIOptimum:
    """Maximize S over orthonormal-n, equal-beta settings, then probe all 9 vectors locally."""
    if model.visibility <= 2.0 / 3.0:
        raise LNRError(f"no category I violation is possible at visibility {model.visibility}")
    beta = golden_section_max(
        lambda x: evaluate_violation(model, structured_category_I(x)).S, 1e-3, math.pi - 1e-3
    )
    settings = structured_category_I(beta)
    report = evaluate_violation(model, settings)
    gain = max_perturbation_gain(model, settings, seed=seed)
    return CategoryIOptimum(
        settings=settings,
        report=report,
        beta=beta,
        max_perturbation_gain=gain,
        locally_optimal=gain <= PERTURBATION_GAIN_TOL,
    )


# --------------------------------------------------------------------------- category II


def symmetric_category_II(delta: float) -> SettingsCategoryII:
    """Bob's settings on a cone with all pairwise angles ``delta``; a_i along b_i - b_{i+1}."""
    b = symmetric_cone_triple(delta)
    a = []
    for i in range(3):
        d = b[i].as_array() - b[(i + 1) % 3].as_array()
        a.append(UnitVec3.of(d))
    return SettingsCategoryII(a=tuple(a), b=b)


@dataclass(frozen=True)
class ScanRow:
    delta: float
    lhs: float
    bound: float
    S: float


@dataclass(frozen=True)
class ScanResult:
    rows: tuple[ScanRow, ...]
    violation_window: tuple[float, float] | None
    argmax_delta: float
    max_S: float
    visibility: float


def _symmetric_S(model: CorrelationModel, delta: float) -> float:
    return evaluate_violation(model, symmetric_category_II(delta)).S


def scan_symmetric_II(
    model: CorrelationModel,
    delta_lo: float,
    delta_hi: float,
    step: float = DEFAULT_SCAN_STEP,
) -> ScanResult:
    """Evaluate the symmetric category II family on a grid of delta values.

    Window edges are root-bracketed between grid rows where S changes sign;
    the peak is refined by golden-section search around the best row.
    """
    top = 2.0 * math.pi / 3.0
    if not 0.0 < delta_lo < delta_hi <= top + 1e-12:
        raise AngleRangeError(f"invalid scan interval [{delta_lo}, {delta_hi}]")
    if not 0.0 < step <= delta_hi - delta_lo + 1e-12:
        raise AngleRangeError(f"invalid scan step {step}")
    n = int(math.floor((delta_hi - delta_lo) / step + 1e-9))
    deltas = [delta_lo + k * step for k in range(n + 1)]
    if deltas[-1] < delta_hi - 1e-12:
        deltas.append(delta_hi)
    deltas[-1] = min(deltas[-1], top)

    rows = []
    for d in deltas:
        rep = evaluate_violation(model, symmetric_category_II(d))
        rows.append(ScanRow(d, rep.lhs, rep.bound, rep.S))

    f = lambda d: _symmetric_S(model, d)  # noqa: E731
    crossings = []
    for r0, r1 in zip(rows, rows[1:]):
        if (r0.S > 0) != (r1.S > 0):
            crossings.append(optimize.bisect(f, r0.delta, r1.delta, xtol=WINDOW_XTOL))
    positive = [r for r in rows if r.S > 0]
    window = None
    if positive:
        lo = rows[0].delta if rows[0].S > 0 else crossings[0]
        hi = rows[-1].delta if rows[-1].S > 0 else crossings[-1]
        window = (lo, hi)

    k = max(range(len(rows)), key=lambda i: rows[i].S)
    if 0 < k < len(rows) - 1:
        argmax = golden_section_max(f, rows[k - 1].delta, rows[k + 1].delta)
        max_S = f(argmax)
        if max_S < rows[k].S:
            argmax, max_S = rows[k].delta, rows[k].S
    else:
        argmax, max_S = rows[k].delta, rows[k].S
    return ScanResult(
        rows=tuple(rows),
        violation_window=window,
        argmax_delta=argmax,
        max_S=max_S,
        visibility=model.visibility,
    )


# --------------------------------------------------------------------------- thresholds


def threshold_visibility(settings: Settings, category: str | None = None) -> float:
    """Visibility at which S crosses zero: bound / lhs(V=1), capped at 1."""
    if category is not None and category != settings.category:
        raise ValueError(f"settings are category {settings.category}, not {category}")
    left = lhs(CorrelationModel(1.0), settings)
    if left <= 1e-12:
        raise LNRError("left-hand side vanishes; threshold visibility undefined")
    return min(1.0, bound(settings).bound / left)


# --------------------------------------------------------------------------- robustness


@dataclass(frozen=True)
class RobustnessReport:
    nominal_S: float
    nominal_bound: float
    nominal_lhs: float
    sup_bound: float
    inf_lhs: float
    conclusive_margin: float
    epsilon: float
    n_samples: int
    seed: int


def _batch_S(
    model: CorrelationModel,
    settings: Settings,
    epsilon: float,
    n_samples: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    arrays = settings.as_arrays()
    names = list(arrays)
    stacked = np.stack([arrays[k] for k in names])  # (k, 3, 3)
    tiled = np.broadcast_to(stacked, (n_samples,) + stacked.shape)
    perturbed = perturb_vectors(tiled, epsilon, rng)
    parts = {k: perturbed[:, j] for j, k in enumerate(names)}
    V = model.visibility
    if isinstance(settings, SettingsCategoryI):
        bounds = bound_category_I_batch(parts["b"], parts["b2"])
        lhss = lhs_category_I_batch(V, parts["a"], parts["b"], parts["b2"])
    else:
        bounds = bound_category_II_batch(parts["b"])
        lhss = lhs_category_II_batch(V, parts["a"], parts["b"])
    return lhss - bounds, lhss, bounds


def robustness_sweep(
    settings: Settings,
    model: CorrelationModel,
    epsilon: float,
    n_samples: int = 10_000,
    seed: int = 0,
    category: str | None = None,
) -> RobustnessReport:
    """Monte Carlo estimate of the sup of LNR bounds and inf of QM left-hand sides
    when every setting vector may be off by up to ``epsilon`` radians."""
    if category is not None and category != settings.category:
        raise ValueError(f"settings are category {settings.category}, not {category}")
    if not 0.0 <= epsilon <= MAX_EPSILON:
        raise AngleRangeError(f"epsilon={epsilon} outside [0, {MAX_EPSILON}]")
    if n_samples < 1:
        raise AngleRangeError("n_samples must be >= 1")
    nominal = evaluate_violation(model, settings)
    sup_bound, inf_lhs = nominal.bound, nominal.lhs
    if epsilon > 0.0:
        rng = np.random.Generator(np.random.Philox(seed))
        _, lhss, bounds = _batch_S(model, settings, epsilon, n_samples, rng)
        sup_bound = max(sup_bound, float(bounds.max()))
        inf_lhs = min(inf_lhs, float(lhss.min()))
    return RobustnessReport(
        nominal_S=nominal.S,
        nominal_bound=nominal.bound,
        nominal_lhs=nominal.lhs,
        sup_bound=sup_bound,
        inf_lhs=inf_lhs,
        conclusive_margin=inf_lhs - sup_bound,
        epsilon=epsilon,
        n_samples=n_samples,
        seed=seed,
    )
