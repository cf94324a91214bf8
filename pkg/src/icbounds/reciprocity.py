"""Mirror channel with conferencing receivers and the two-sided bound gap.

The mirror of a conferencing-transmitters channel keeps the direct gains,
Hermitian-transposes the cross gains, and hands the conference links to the
receivers. Its outer bounds, rewritten in the original channel's own
parameters, pair row by row with the transmitter-side outer bounds. Every
partner exceeds its receiver-side row by at most 1, 2, or 4 bits on the
single-rate, sum-rate, and weighted-rate families, giving a per-user shift
of at most tau = max(1/1, 2/2, 4/3) = 4/3 bits from the transmitter-side
region into the receiver-side one. In the other direction ten of the twelve
receiver-side rows are dominated by their partners outright; the two
weighted-rate rows that carry the determinant term can undercut theirs when
the cross gain dwarfs the direct gain (seen up to ~0.3 bits row-wise, ~0.1
bits region-wise), so the forward direction is measured and reported rather
than asserted.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional, Tuple

from .gaussian import GaussianParams, _log2, _outer_rows, outer_region
from .polytope import (
    APPROX,
    COMPARE_EPS,
    ClaimsReport,
    GapReport,
    Region2D,
    claim_ge,
    per_user_gap,
    region_from_inequalities,
)

__all__ = [
    "TAU_RECIPROCAL",
    "reciprocal_params",
    "rx_outer_region",
    "check_reciprocity_claims",
    "forward_row_slacks",
    "reciprocity_gap",
    "reciprocity_report",
]

TAU_RECIPROCAL = 4.0 / 3.0

# Transmitter-side partner, family budget (bits), and whether the forward
# dominance (partner >= receiver-side row) holds unconditionally for each
# receiver-side row. Same coefficient vectors throughout, so row dominance
# implies region containment. The two det-carrying weighted-rate rows are
# only conditionally dominated (they need the cross gain not to dwarf the
# direct gain), hence measured instead of asserted.
_PAIRINGS = (
    ("rx_R1a", "bd_R1a", 1.0, True),
    ("rx_R1b", "bd_R1b", 1.0, True),
    ("rx_R2a", "bd_R2a", 1.0, True),
    ("rx_R2b", "bd_R2b", 1.0, True),
    ("rx_Sum1", "bd_Sum3", 2.0, True),
    ("rx_Sum2", "bd_Sum2", 2.0, True),
    ("rx_Sum3", "bd_Sum1", 2.0, True),
    ("rx_Sum4", "bd_Sum4", 2.0, True),
    ("rx_SlopeTwo1", "bd_SlopeTwo1", 4.0, True),
    ("rx_SlopeHalf1", "bd_SlopeHalf1", 4.0, True),
    ("rx_SlopeTwo2", "bd_SlopeTwo2", 4.0, False),
    ("rx_SlopeHalf2", "bd_SlopeHalf2", 4.0, False),
)


def reciprocal_params(p: GaussianParams) -> GaussianParams:
    """Hermitian-transpose the gain matrix and swap the conference links.

    An involution: applying it twice returns the original parameters. Direct
    SNRs are preserved while INR_1 and INR_2 trade places.
    """
    return GaussianParams(
        h11=p.h11.conjugate(),
        h12=p.h21.conjugate(),
        h21=p.h12.conjugate(),
        h22=p.h22.conjugate(),
        cb12=p.cb21,
        cb21=p.cb12,
    )


def _rx_rows(p: GaussianParams) -> List[Tuple[str, int, int, float]]:
    snr1, snr2, inr1, inr2 = p.snr1, p.snr2, p.inr1, p.inr2
    cb12, cb21 = p.cb12, p.cb21
    det2 = p.det2
    zf1 = _log2(1.0 + snr1 / (1.0 + inr1))
    zf2 = _log2(1.0 + snr2 / (1.0 + inr2))
    return [
        ("rx_R1a", 1, 0, _log2(1.0 + snr1) + cb12),
        ("rx_R1b", 1, 0, _log2(1.0 + snr1 + inr1)),
        ("rx_R2a", 0, 1, _log2(1.0 + snr2) + cb21),
        ("rx_R2b", 0, 1, _log2(1.0 + snr2 + inr2)),
        (
            "rx_Sum1",
            1,
            1,
            _log2(1.0 + inr2 + snr1 / (1.0 + inr1))
            + _log2(1.0 + inr1 + snr2 / (1.0 + inr2))
            + cb21
            + cb12,
        ),
        ("rx_Sum2", 1, 1, _log2(1.0 + snr2 + inr1) + zf1 + cb21),
        ("rx_Sum3", 1, 1, _log2(1.0 + snr1 + inr2) + zf2 + cb12),
        ("rx_Sum4", 1, 1, _log2(1.0 + snr1 + snr2 + inr1 + inr2 + det2)),
        (
            "rx_SlopeTwo1",
            2,
            1,
            _log2(1.0 + inr1 + snr2 / (1.0 + inr2))
            + zf1
            + _log2(1.0 + snr1 + inr2)
            + cb21
            + cb12,
        ),
        (
            "rx_SlopeHalf1",
            1,
            2,
            _log2(1.0 + inr2 + snr1 / (1.0 + inr1))
            + zf2
            + _log2(1.0 + snr2 + inr1)
            + cb12
            + cb21,
        ),
        (
            "rx_SlopeTwo2",
            2,
            1,
            _log2(
                1.0
                + snr2 / (1.0 + inr2)
                + inr1
                + snr1
                + inr2 / (1.0 + inr2)
                + det2 / (1.0 + inr2)
            )
            + _log2(1.0 + snr1 + inr2)
            + cb12,
        ),
        (
            "rx_SlopeHalf2",
            1,
            2,
            _log2(
                1.0
                + snr1 / (1.0 + inr1)
                + inr2
                + snr2
                + inr1 / (1.0 + inr1)
                + det2 / (1.0 + inr1)
            )
            + _log2(1.0 + snr2 + inr1)
            + cb21,
        ),
    ]


def rx_outer_region(p: GaussianParams) -> Region2D:
    """Receiver-conferencing outer bounds of the mirror channel, evaluated
    in the original channel's parameters and reduced to a region."""
    return region_from_inequalities(
        [(a1, a2, rhs, name) for name, a1, a2, rhs in _rx_rows(p)], APPROX
    )


def check_reciprocity_claims(p: GaussianParams, tol: float = COMPARE_EPS) -> ClaimsReport:
    """Row-by-row dominance and budget checks between the two bound sets.

    rev_* entries assert the transmitter-side partner exceeds its
    receiver-side row by at most the family budget (1, 2, or 4 bits);
    fwd_* entries assert the partner is at least the receiver-side row,
    and exist only for the ten unconditionally dominated pairs. The two
    conditional pairs surface through forward_row_slacks instead.
    """
    rx = {name: rhs for name, _a1, _a2, rhs in _rx_rows(p)}
    tx = {name: rhs for name, _a1, _a2, rhs in _outer_rows(p)}
    entries = []
    for rx_name, tx_name, budget, fwd_asserted in _PAIRINGS:
        if fwd_asserted:
            entries.append(claim_ge(f"fwd_{rx_name}", tx[tx_name], rx[rx_name], tol))
        entries.append(claim_ge(f"rev_{rx_name}", budget, tx[tx_name] - rx[rx_name], tol))
    return ClaimsReport(tuple(entries))


def forward_row_slacks(p: GaussianParams) -> Dict[str, float]:
    """Partner-minus-row slack for every pairing; negative means the
    receiver-side bound is the strictly tighter one there."""
    rx = {name: rhs for name, _a1, _a2, rhs in _rx_rows(p)}
    tx = {name: rhs for name, _a1, _a2, rhs in _outer_rows(p)}
    return {rx_name: tx[tx_name] - rx[rx_name] for rx_name, tx_name, _b, _f in _PAIRINGS}


def reciprocity_gap(p: GaussianParams) -> Tuple[GapReport, GapReport]:
    """(forward, reverse) per-user shifts between the two outer regions.

    forward: shift taking every receiver-side point into the transmitter-side
    region (0 when C_Rx is contained in C_Tx). reverse: shift taking every
    transmitter-side point into the receiver-side region (at most 4/3).
    """
    tx_region = outer_region(p)
    rx_region = rx_outer_region(p)
    forward = per_user_gap(rx_region, tx_region)
    reverse = per_user_gap(tx_region, rx_region)
    return forward, reverse


def _binding_names(gap: GapReport, outer: Region2D, inner: Region2D) -> Dict[str, list]:
    """Names of the outer rows active at the witness vertex and the inner
    rows tight at the shifted witness."""
    if gap.witness is None or not math.isfinite(gap.tau):
        return {"outer": [], "inner": []}
    wx, wy = gap.witness
    tol = 1e-7
    outer_active = [
        row.name
        for row in outer.inequalities
        if row.name and abs(row.coeff("R1") * wx + row.coeff("R2") * wy - row.rhs) <= tol
    ]
    px, py = max(0.0, wx - gap.tau), max(0.0, wy - gap.tau)
    inner_active = [
        row.name
        for row in inner.inequalities
        if row.name and abs(row.coeff("R1") * px + row.coeff("R2") * py - row.rhs) <= tol
    ]
    return {"outer": outer_active, "inner": inner_active}


def reciprocity_report(p: GaussianParams) -> dict:
    """Both gap directions with the bound names that realize them.

    findings flags a forward gap above 1e-6 (receiver-side region poking
    outside the transmitter-side one) together with the responsible rows;
    containment that direction is a measurement, not a certified claim.
    """
    tx_region = outer_region(p)
    rx_region = rx_outer_region(p)
    forward = per_user_gap(rx_region, tx_region)
    reverse = per_user_gap(tx_region, rx_region)
    claims = check_reciprocity_claims(p)
    slacks = forward_row_slacks(p)
    return {
        "params": p.to_json_dict(),
        "tau_budget": TAU_RECIPROCAL,
        "forward": {
            **forward.to_json_dict(),
            "binding": _binding_names(forward, rx_region, tx_region),
        },
        "reverse": {
            **reverse.to_json_dict(),
            "binding": _binding_names(reverse, tx_region, rx_region),
        },
        "claims": claims.to_json_dict(),
        "findings": {
            "forward_exceeds_tol": bool(forward.tau > 1e-6),
            "rx_tighter_rows": {
                name: slack for name, slack in slacks.items() if slack < -1e-9
            },
        },
    }
