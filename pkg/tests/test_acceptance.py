"""The ten acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, printed in the terminal summary.
"""

from __future__ import annotations

import contextlib
import itertools
import json
import math
import subprocess
import sys

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from conftest import ACCEPTANCE_LINES
from lnrbounds.analysis import (
    optimize_category_I,
    robustness_sweep,
    scan_symmetric_II,
    structured_category_I,
    symmetric_category_II,
    threshold_visibility,
)
from lnrbounds.bounds import (
    SettingsCategoryI,
    bound_category_I,
    min_abs_projection_angle_form,
    min_abs_projection_batch,
    min_abs_projection_closed_form,
)
from lnrbounds.geometry import angle_between, random_unit_vectors, rotate
from lnrbounds.hvchecks import (
    check_pointwise_identity,
    check_subensemble_inequality,
    check_triangle_step,
    random_table,
)
from lnrbounds.oracle import AGREEMENT_TOL, random_independent_triples, vertex_minimum_check
from lnrbounds.quantum import CorrelationModel

DEG = math.pi / 180


@contextlib.contextmanager
def criterion(number: int, title: str):
    detail: dict = {}
    try:
        yield detail
    except BaseException:
        ACCEPTANCE_LINES.append(f"[{number:2d}] FAIL  {title}  {_fmt(detail)}")
        raise
    ACCEPTANCE_LINES.append(f"[{number:2d}] PASS  {title}  {_fmt(detail)}")


def _fmt(detail: dict) -> str:
    return " ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in detail.items())


def test_c01_category_I_maximum():
    with criterion(1, "category I maximum violation") as d:
        opt = optimize_category_I(CorrelationModel(1.0))
        d["S_max"] = opt.report.S
        d["beta_deg"] = math.degrees(opt.beta)
        d["tan_half_beta"] = math.tan(opt.beta / 2)
        assert opt.report.S == pytest.approx(0.108, abs=1e-3)
        assert math.degrees(opt.beta) == pytest.approx(36.87, abs=0.1)
        assert math.tan(opt.beta / 2) == pytest.approx(1 / 3, abs=1e-6)


def test_c02_category_I_threshold():
    with criterion(2, "category I threshold visibility") as d:
        opt = optimize_category_I(CorrelationModel(1.0))
        d["V_thr"] = threshold_visibility(opt.settings)
        assert d["V_thr"] == pytest.approx(0.9430, abs=5e-4)


def test_c03_category_II_scan():
    with criterion(3, "category II symmetric scan") as d:
        res = scan_symmetric_II(CorrelationModel(1.0), 90 * DEG, 120 * DEG)
        assert res.violation_window is not None
        lo, hi = (math.degrees(x) for x in res.violation_window)
        d["window_lo"], d["window_hi"] = lo, hi
        d["argmax_deg"] = math.degrees(res.argmax_delta)
        assert lo == pytest.approx(106.8, abs=0.3)
        assert hi == pytest.approx(116.5, abs=0.3)
        assert d["argmax_deg"] == pytest.approx(112.63, abs=0.1)


def test_c04_category_II_threshold():
    with criterion(4, "category II threshold visibility") as d:
        res = scan_symmetric_II(CorrelationModel(1.0), 90 * DEG, 120 * DEG)
        d["V_thr"] = threshold_visibility(symmetric_category_II(res.argmax_delta))
        assert d["V_thr"] == pytest.approx(0.9836, abs=5e-4)


def test_c05_oracle_equivalence():
    with criterion(5, "closed form vs brute-force oracle (500 triples)") as d:
        rng = np.random.default_rng(2024)
        worst, disagreements = 0.0, 0
        for e in random_independent_triples(rng, 500, min_abs_triple=0.05):
            check = vertex_minimum_check(*e)
            worst = max(worst, abs(min_abs_projection_closed_form(*e) - check.global_min))
            disagreements += not check.agrees
        d["max_error"] = worst
        d["vertex_disagreements"] = disagreements
        assert worst <= AGREEMENT_TOL
        assert disagreements == 0


def test_c06_form_equivalence():
    with criterion(6, "closed form vs angle form (1e4 triples)") as d:
        rng = np.random.default_rng(77)
        e = random_unit_vectors(rng, 30_000).reshape(10_000, 3, 3)
        closed = min_abs_projection_batch(e)
        # angle form from the pairwise angles, one triple at a time
        cos = np.clip(np.einsum("nij,nkj->nik", e, e), -1.0, 1.0)
        ang = np.arccos(cos)
        angle = np.array(
            [min_abs_projection_angle_form(a[0, 1], a[1, 2], a[2, 0]) for a in ang]
        )
        d["max_diff"] = float(np.max(np.abs(closed - angle)))
        d["max_L"] = float(closed.max())
        frames = Rotation.random(100, random_state=5).as_matrix()
        ortho = min_abs_projection_batch(np.transpose(frames, (0, 2, 1)))
        d["orthonormal_max_dev"] = float(np.max(np.abs(ortho - 1.0)))
        assert d["max_diff"] <= 1e-10
        assert d["max_L"] <= 1 + 1e-12
        assert d["orthonormal_max_dev"] <= 1e-12


def test_c07_orthonormal_reduction():
    with criterion(7, "orthonormal reduction to 2 - (2/3) sin(beta/2)") as d:
        rng = np.random.default_rng(3)
        worst = 0.0
        for beta in np.linspace(0.05, math.pi - 0.05, 25):
            s = structured_category_I(float(beta))
            R = Rotation.random(random_state=rng)
            turned = SettingsCategoryI(
                a=tuple(rotate(v, R) for v in s.a),
                b=tuple(rotate(v, R) for v in s.b),
                b2=tuple(rotate(v, R) for v in s.b2),
            )
            for x in (s, turned):
                assert all(
                    angle_between(p, q) == pytest.approx(beta, abs=1e-12) for p, q in zip(x.b, x.b2)
                )
                expected = 2 - (2 / 3) * math.sin(beta / 2)
                worst = max(worst, abs(bound_category_I(x).bound - expected))
        d["max_diff"] = worst
        assert worst <= 1e-12


def test_c08_derivation_chain():
    with criterion(8, "hidden-variable derivation steps (1e4 tables)") as d:
        identity = all(check_pointwise_identity(a, b) for a, b in itertools.product((-1, 1), repeat=2))
        rng = np.random.default_rng(8)
        sub_fail = tri_fail = 0
        for _ in range(10_000):
            t = random_table(rng)
            sub_fail += not check_subensemble_inequality(t).holds
            tri_fail += not check_triangle_step(t).holds
        d["identity"] = identity
        d["subensemble_failures"] = sub_fail
        d["triangle_failures"] = tri_fail
        assert identity
        assert sub_fail == 0 and tri_fail == 0


def test_c09_robustness():
    with criterion(9, "robustness margin along the misalignment ladder") as d:
        model = CorrelationModel(1.0)
        opt = optimize_category_I(model).settings
        ladder = (0.0, 0.5, 1.0, 2.0, 5.0, 10.0)
        reps = [robustness_sweep(opt, model, e * DEG, n_samples=10_000, seed=0) for e in ladder]
        margins = [r.conclusive_margin for r in reps]
        for e, m in zip(ladder, margins):
            d[f"eps{e:g}"] = m
        assert margins[0] == pytest.approx(reps[0].nominal_S, abs=1e-15)
        assert all(b <= a for a, b in zip(margins, margins[1:]))
        assert margins[1] > 0
        assert margins[-1] < 0


def test_c10_reproduce_command():
    with criterion(10, "reproduce command") as d:
        cmd = [sys.executable, "-m", "lnrbounds.cli", "reproduce", "--format", "json", "--seed", "0"]
        first = subprocess.run(cmd, capture_output=True, check=False)
        second = subprocess.run(cmd, capture_output=True, check=False)
        d["exit"] = first.returncode
        d["identical"] = first.stdout == second.stdout
        rows = json.loads(first.stdout)["rows"]
        d["rows_pass"] = f"{sum(r['passed'] for r in rows)}/{len(rows)}"
        assert first.returncode == 0 and second.returncode == 0
        assert all(r["passed"] for r in rows)
        assert d["identical"]
