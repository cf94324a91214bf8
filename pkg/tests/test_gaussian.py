import math
import random

import numpy as np
import pytest
from scipy.optimize import linprog

from icbounds.gaussian import (
    BUDGET_R,
    BUDGET_SLOPE,
    BUDGET_SUM,
    GAP_BITS,
    LOG3,
    LOG5,
    GaussianParams,
    check_gaussian_claims,
    inner_quantities,
    inner_region,
    outer_region,
    per_bound_gap_check,
    pre_fme_inner_system,
    scheme_config,
    theorem2_full_system,
)
from icbounds.harness import sample_gaussian
from icbounds.polytope import per_user_gap, project_to_rates
from oracles import unclipped_gap

PINNED = GaussianParams.from_json_dict({
    "snr_db": [25.0, 18.0], "inr_db": [12.0, 7.0],
    "phase": [0.3, 1.1, 2.2, 0.7], "cb": [1.5, 0.75]})


def test_constants():
    assert GAP_BITS == pytest.approx(math.log2(90), abs=1e-12)
    assert GAP_BITS == pytest.approx(2 * LOG3 + 1 + LOG5, abs=1e-12)
    assert BUDGET_R == pytest.approx(4 * LOG3, abs=1e-12)
    assert BUDGET_SUM == pytest.approx(4 * LOG3 + 2 + 2 * LOG5, abs=1e-12)
    assert BUDGET_SLOPE == pytest.approx(6 * LOG3 + LOG5 + 1, abs=1e-12)
    # the per-user budget is the worst of the per-family reductions
    assert GAP_BITS == pytest.approx(max(BUDGET_R, BUDGET_SUM / 2, BUDGET_SLOPE / 3),
                                     abs=1e-12)


def test_params_moduli_and_determinant():
    p = sample_gaussian(random.Random(8))
    assert p.snr1 == pytest.approx(abs(p.h11) ** 2, rel=1e-12)
    assert p.snr2 == pytest.approx(abs(p.h22) ** 2, rel=1e-12)
    assert p.inr1 == pytest.approx(abs(p.h12) ** 2, rel=1e-12)
    assert p.inr2 == pytest.approx(abs(p.h21) ** 2, rel=1e-12)
    assert p.det2 == pytest.approx(abs(p.h11 * p.h22 - p.h12 * p.h21) ** 2, rel=1e-9)


def test_params_validation():
    with pytest.raises(ValueError):
        GaussianParams(1, 1, 1, 1, -0.5, 0)


def test_json_round_trips():
    p = sample_gaussian(random.Random(4))
    assert GaussianParams.from_json_dict(p.to_json_dict()) == p
    q = GaussianParams.from_json_dict({"snr_db": [20, 0], "inr_db": [10, 0],
                                       "cb": [1, 2]})
    assert q.snr1 == pytest.approx(100.0, rel=1e-12)
    assert q.inr1 == pytest.approx(10.0, rel=1e-12)
    assert (q.cb12, q.cb21) == (1.0, 2.0)


def test_zero_channel_degenerates_to_origin():
    p = GaussianParams(0, 0, 0, 0, 0.0, 0.0)
    assert outer_region(p).vertices == ((0.0, 0.0),)
    assert inner_region(p).vertices == ((0.0, 0.0),)
    assert per_user_gap(outer_region(p), inner_region(p)).tau == 0.0


def test_swapping_users_mirrors_the_regions():
    p = sample_gaussian(random.Random(31))
    q = GaussianParams(p.h22, p.h21, p.h12, p.h11, p.cb21, p.cb12)
    for build in (outer_region, inner_region):
        a = {(round(x, 9), round(y, 9)) for x, y in build(p).vertices}
        b = {(round(y, 9), round(x, 9)) for x, y in build(q).vertices}
        assert a == b


def test_full_cooperation_rate_row():
    # the single-user cap with both transmit antennas pooled has the
    # matched-filter closed form log2(1 + (|h11| + |h12|)^2)
    rng = random.Random(17)
    seen = 0
    for _ in range(40):
        p = sample_gaussian(rng)
        for row in outer_region(p).inequalities:
            if row.name == "bd_R1b":
                expect = math.log2(1.0 + (abs(p.h11) + abs(p.h12)) ** 2)
                assert row.rhs == pytest.approx(expect, rel=1e-12)
                seen += 1
    assert seen > 10


def test_conference_limited_rate_row_binds_under_strong_interference():
    p = GaussianParams(1.0, 100.0, 100.0, 1.0, 0.0, 0.0)
    rows = {r.name: r.rhs for r in outer_region(p).inequalities}
    assert rows["bd_R1a"] == pytest.approx(1.0, rel=1e-12)   # log2(1+1)+0
    assert rows["bd_R2a"] == pytest.approx(1.0, rel=1e-12)


def test_pinned_channel_outer_golden():
    o = outer_region(PINNED)
    got = [(r.coeff("R1"), r.coeff("R2"), r.rhs, r.name) for r in o.inequalities]
    assert got == [
        (0.0, 1.0, pytest.approx(6.709748229815776, abs=1e-12), "bd_R2b"),
        (0.5, 1.0, pytest.approx(8.872634130401993, abs=1e-12), "bd_SlopeHalf1"),
        (1.0, 0.0, pytest.approx(8.890768462722809, abs=1e-12), "bd_R1b"),
        (1.0, 0.5, pytest.approx(10.226945101116192, abs=1e-12), "bd_SlopeTwo1"),
        (1.0, 1.0, pytest.approx(11.887113108074702, abs=1e-12), "bd_Sum2"),
    ]


def test_pinned_channel_inner_golden_and_gap():
    i = inner_region(PINNED)
    got = [(r.coeff("R1"), r.coeff("R2"), r.rhs, r.name) for r in i.inequalities]
    assert got == [
        (0.0, 1.0, pytest.approx(0.7254559336194744, abs=1e-12), "in_R2b"),
        (1.0, 0.0, pytest.approx(3.663922021236635, abs=1e-12), "in_R1b"),
        (1.0, 1.0, pytest.approx(4.323193851710456, abs=1e-12), "in_Sum1"),
    ]
    g = per_user_gap(outer_region(PINNED), i)
    assert g.tau == pytest.approx(5.984292296196301, abs=1e-9)
    assert g.tau <= GAP_BITS
    assert g.witness == pytest.approx((4.325771801172435, 6.709748229815776))


def test_inner_rhs_floored_at_zero():
    # huge conference capacity cannot push an achievable row negative
    p = GaussianParams(0.1, 50.0, 50.0, 0.1, 0.0, 0.0)
    for row in inner_region(p).inequalities:
        assert row.rhs >= 0.0


def test_mini_sweep_claims_budgets_containment():
    rng = random.Random(12)
    for _ in range(300):
        p = sample_gaussian(rng)
        assert check_gaussian_claims(p, 1e-9).all_pass
        assert per_bound_gap_check(p, 1e-6).all_pass
        o, i = outer_region(p), inner_region(p)
        assert all(o.contains(v, 1e-6) for v in i.vertices)
        # the uniform (unfloored) relaxation certificate holds everywhere,
        # and flooring at the axes can only increase the required shift
        u = unclipped_gap(o, i)
        assert u <= GAP_BITS + 1e-6
        assert per_user_gap(o, i).tau >= u - 1e-9


def test_claims_and_budget_report_shapes():
    c = check_gaussian_claims(PINNED)
    assert len(c.entries) == 31
    b = per_bound_gap_check(PINNED)
    assert len(b.entries) == 12
    assert c.all_pass and b.all_pass


def test_scheme_quantities_nonnegative():
    rng = random.Random(23)
    for _ in range(50):
        p = sample_gaussian(rng)
        s = scheme_config(p)
        d = inner_quantities(p, s)
        for name in ("p1", "t1", "m1", "l1", "s1", "g1",
                     "p2", "t2", "m2", "l2", "s2", "g2"):
            assert getattr(d, name) >= -1e-12


def test_quoted_inner_region_never_overclaims_its_constraint_system():
    # the reduced region must sit inside the projection of the full
    # pre-elimination achievability system, and that projection inside
    # the outer bound
    rng = random.Random(42)
    for _ in range(5):
        p = sample_gaussian(rng)
        proj = project_to_rates(pre_fme_inner_system(p))
        inn, out = inner_region(p), outer_region(p)
        assert all(proj.contains(v, 1e-7) for v in inn.vertices)
        assert all(out.contains(v, 1e-6) for v in proj.vertices)


def _lp_lift_feasible(system, r1, r2, tol=1e-7):
    """Is (r1, r2) in the projection of system? LP feasibility on the lift."""
    free = [v for v in system.variables if v not in ("R1", "R2")]
    idx = {v: j for j, v in enumerate(free)}
    a_ub, b_ub = [], []
    for row in system.inequalities:
        coeffs = np.zeros(len(free))
        for v, c in row.coeffs.items():
            if v in idx:
                coeffs[idx[v]] = c
        rhs = row.rhs - row.coeff("R1") * r1 - row.coeff("R2") * r2
        a_ub.append(coeffs)
        b_ub.append(rhs + tol)
    res = linprog(np.zeros(len(free)), A_ub=np.array(a_ub), b_ub=np.array(b_ub),
                  bounds=[(0, None)] * len(free), method="highs")
    return res.status == 0


def _lp_support(system, d1, d2):
    """max d1*R1 + d2*R2 over the full system (projection support value)."""
    names = list(system.variables)
    idx = {v: j for j, v in enumerate(names)}
    a_ub = np.zeros((len(system.inequalities), len(names)))
    b_ub = np.zeros(len(system.inequalities))
    for i, row in enumerate(system.inequalities):
        for v, c in row.coeffs.items():
            a_ub[i, idx[v]] = c
        b_ub[i] = row.rhs
    c = np.zeros(len(names))
    c[idx["R1"]], c[idx["R2"]] = -d1, -d2
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(0, None)] * len(names),
                  method="highs")
    assert res.status == 0
    return -res.fun


def test_full_decoding_system_sandwich():
    # the sixteen-rows-per-receiver system is too large to eliminate
    # variable-by-variable, so check its projection by linear programming:
    # every quoted inner vertex lifts into it, and its support in the five
    # bound directions stays inside the outer region
    rng = random.Random(42)
    for _ in range(5):
        p = sample_gaussian(rng)
        full = theorem2_full_system(p)
        inn, out = inner_region(p), outer_region(p)
        for v in inn.vertices:
            assert _lp_lift_feasible(full, v[0], v[1])
        for d1, d2 in ((1, 0), (0, 1), (1, 1), (2, 1), (1, 2)):
            support_out = max(d1 * x + d2 * y for x, y in out.vertices)
            assert _lp_support(full, d1, d2) <= support_out + 1e-6


def test_full_decoding_system_zero_channel_projection():
    p = GaussianParams(0, 0, 0, 0, 0.0, 0.0)
    assert project_to_rates(theorem2_full_system(p)).vertices == ((0.0, 0.0),)
