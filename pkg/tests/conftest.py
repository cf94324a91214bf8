import random
from dataclasses import dataclass
from typing import Tuple

import pytest
from hypothesis import settings

from icbounds.gaussian import (
    check_gaussian_claims,
    inner_region,
    outer_region,
    per_bound_gap_check,
)
from icbounds.harness import sample_gaussian
from icbounds.polytope import per_user_gap
from oracles import unclipped_gap

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

GAUSS_SWEEP_SEED = 20260814
GAUSS_SWEEP_COUNT = 10000


@dataclass(frozen=True)
class GaussSample:
    """Everything criteria 6-8 need from one channel, computed in one pass."""

    index: int
    params: dict
    claims_pass: bool
    min_claim_slack: float
    min_claim_name: str
    budgets_pass: bool
    min_budget_slack: float
    contained: bool
    tau_clipped: float
    tau_unclipped: float


@pytest.fixture(scope="session")
def gauss_sweep() -> Tuple[GaussSample, ...]:
    rng = random.Random(GAUSS_SWEEP_SEED)
    out = []
    for i in range(GAUSS_SWEEP_COUNT):
        p = sample_gaussian(rng)
        claims = check_gaussian_claims(p, 1e-9)
        budgets = per_bound_gap_check(p, 1e-6)
        outer = outer_region(p)
        inner = inner_region(p)
        worst_claim = min(claims.entries, key=lambda e: e.slack)
        out.append(GaussSample(
            index=i,
            params=p.to_json_dict(),
            claims_pass=claims.all_pass,
            min_claim_slack=float(worst_claim.slack),
            min_claim_name=worst_claim.name,
            budgets_pass=budgets.all_pass,
            min_budget_slack=float(budgets.min_slack),
            contained=all(outer.contains(v, 1e-6) for v in inner.vertices),
            tau_clipped=per_user_gap(outer, inner).tau,
            tau_unclipped=unclipped_gap(outer, inner),
        ))
    return tuple(out)
