"""Gaussian interference channel with conferencing transmitters.

Works on the unit-noise normalized channel: receiver i observes
y_i = h_i1 x_1 + h_i2 x_2 + z_i with z_i ~ CN(0,1) and unit transmit power,
while the transmitters share message bits over noiseless conference links of
cb12 (Tx1 -> Tx2) and cb21 bits per use. The module evaluates the genie-aided
outer bounds, configures the superposition/beamforming scheme behind the
inner bound, materializes the achievable-rate constraint systems before and
after substituting the scheme values, and runs the scalar inequality checks
that certify the constant-gap and per-bound budget results. All rates are in
bits (base-2 logs) and every region here lives in approximate (float) mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Mapping, Optional, Sequence, Tuple

from .ldc import _PRE_VARS, _receiver_rows, _transmitter_rows
from .polytope import (
    APPROX,
    ClaimsReport,
    HalfspaceSystem,
    LinearInequality,
    Region2D,
    claim_eq,
    claim_ge,
    region_from_inequalities,
)

__all__ = [
    "LOG3",
    "LOG5",
    "GAP_BITS",
    "BUDGET_R",
    "BUDGET_SUM",
    "BUDGET_SLOPE",
    "GaussianParams",
    "GaussianScheme",
    "GaussianDerived",
    "scheme_config",
    "inner_quantities",
    "outer_region",
    "inner_region",
    "pre_fme_inner_system",
    "theorem2_full_system",
    "check_gaussian_claims",
    "per_bound_gap_check",
]

LOG3 = math.log2(3.0)
LOG5 = math.log2(5.0)

# Certified per-user gap and the per-family outer-vs-inner budgets.
GAP_BITS = 2 * LOG3 + 1 + LOG5  # log2(90)
BUDGET_R = 4 * LOG3
BUDGET_SUM = 4 * LOG3 + 2 + 2 * LOG5
BUDGET_SLOPE = 6 * LOG3 + LOG5 + 1


def _log2(x: float) -> float:
    return math.log2(x)


def _abs2(z: complex) -> float:
    return z.real * z.real + z.imag * z.imag


@dataclass(frozen=True)
class GaussianParams:
    """Complex channel gains and conference-link capacities in bits/use."""

    h11: complex
    h12: complex
    h21: complex
    h22: complex
    cb12: float = 0.0
    cb21: float = 0.0

    def __post_init__(self) -> None:
        for name in ("h11", "h12", "h21", "h22"):
            z = complex(getattr(self, name))
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"{name} must be finite, got {z!r}")
            object.__setattr__(self, name, z)
        for name in ("cb12", "cb21"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be a finite nonnegative real, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def snr1(self) -> float:
        return _abs2(self.h11)

    @property
    def snr2(self) -> float:
        return _abs2(self.h22)

    @property
    def inr1(self) -> float:
        return _abs2(self.h12)

    @property
    def inr2(self) -> float:
        return _abs2(self.h21)

    @property
    def det(self) -> complex:
        return self.h11 * self.h22 - self.h12 * self.h21

    @property
    def det2(self) -> float:
        return _abs2(self.det)

    def to_json_dict(self) -> dict:
        return {
            "h": [[z.real, z.imag] for z in (self.h11, self.h12, self.h21, self.h22)],
            "cb": [self.cb12, self.cb21],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "GaussianParams":
        """Accepts {"h": [[re,im]x4], "cb": [cb12,cb21]} or the dB form
        {"snr_db": [s1,s2], "inr_db": [i1,i2], "phase": [p11,p12,p21,p22],
        "cb": [cb12,cb21]} with phases in radians (default 0)."""
        cb = data.get("cb", [0.0, 0.0])
        if len(cb) != 2:
            raise ValueError("cb must be [cb12, cb21]")
        if "h" in data:
            h = data["h"]
            if len(h) != 4 or any(len(e) != 2 for e in h):
                raise ValueError("h must be four [re, im] pairs")
            gains = [complex(float(e[0]), float(e[1])) for e in h]
        elif "snr_db" in data or "inr_db" in data:
            snr_db = data.get("snr_db", [0.0, 0.0])
            inr_db = data.get("inr_db", [0.0, 0.0])
            phase = data.get("phase", [0.0, 0.0, 0.0, 0.0])
            if len(snr_db) != 2 or len(inr_db) != 2 or len(phase) != 4:
                raise ValueError("need snr_db[2], inr_db[2], phase[4]")
            mags = [
                10.0 ** (float(snr_db[0]) / 20.0),
                10.0 ** (float(inr_db[0]) / 20.0),
                10.0 ** (float(inr_db[1]) / 20.0),
                10.0 ** (float(snr_db[1]) / 20.0),
            ]
            gains = [m * complex(math.cos(float(ph)), math.sin(float(ph))) for m, ph in zip(mags, phase)]
        else:
            raise ValueError("expected key 'h' or 'snr_db'/'inr_db'")
        return cls(gains[0], gains[1], gains[2], gains[3], float(cb[0]), float(cb[1]))


@dataclass(frozen=True)
class GaussianScheme:
    """Power split, beamforming directions, and the resulting second-order
    statistics of the transmission scheme.

    Each user spends 1/4 of its power on the cooperative common codeword,
    1/4 on the noncooperative part (private power chosen so the interference
    it causes stays at or below the noise floor), and at most 1/2 on the two
    cooperative private directions: a zero-forcing direction that is
    invisible at the unintended receiver and a matched-filter direction.
    """

    q1o: float
    q2o: float
    q1p: float
    q2p: float
    q1c: float
    q2c: float
    q1h: float
    q2h: float
    theta1z: float
    theta1m: float
    theta2z: float
    theta2m: float
    v1z: Tuple[complex, complex]
    v1m: Tuple[complex, complex]
    v2z: Tuple[complex, complex]
    v2m: Tuple[complex, complex]
    sigma1_sq: float
    sigma2_sq: float
    k_u1_cond: float
    k_u2_cond: float
    k_u1: float
    k_u2: float


def scheme_config(p: GaussianParams) -> GaussianScheme:
    """Evaluate the scheme's power allocation for one channel.

    The cooperative private signal of user i rides on v_iz (zero-forcing,
    orthogonal to the unintended receiver's channel row) with weight
    theta_iz and on v_im (matched filter) with weight theta_im; sigma_j^2 is
    the residual power this signal leaks into receiver j through the
    matched-filter component only. A degenerate user with no path to either
    receiver (SNR_i + INR_i = 0) simply sends nothing on the matched
    direction.
    """
    snr1, snr2, inr1, inr2 = p.snr1, p.snr2, p.inr1, p.inr2
    pow1 = snr1 + inr1
    pow2 = snr2 + inr2
    theta1z = 0.25 / (1.0 + pow2)
    theta1m = 0.0 if pow1 == 0.0 else 0.25 / (pow1 * (1.0 + pow2))
    theta2z = 0.25 / (1.0 + pow1)
    theta2m = 0.0 if pow2 == 0.0 else 0.25 / (pow2 * (1.0 + pow1))
    q1p = min(0.25, 1.0 / inr2) if inr2 > 0.0 else 0.25
    q2p = min(0.25, 1.0 / inr1) if inr1 > 0.0 else 0.25
    k_u1_cond = (p.det2 + pow1) / (4.0 * (1.0 + pow2))
    k_u2_cond = (p.det2 + pow2) / (4.0 * (1.0 + pow1))
    # Leakage gains of the opposite user's matched-filter direction.
    cross1 = p.h11 * p.h21.conjugate() + p.h12 * p.h22.conjugate()
    cross2 = p.h21 * p.h11.conjugate() + p.h22 * p.h12.conjugate()
    # Per-antenna cooperative power: all four directions contribute.
    q1h = (
        theta1z * _abs2(p.h22)
        + theta1m * _abs2(p.h11)
        + theta2z * _abs2(p.h12)
        + theta2m * _abs2(p.h21)
    )
    q2h = (
        theta1z * _abs2(p.h21)
        + theta1m * _abs2(p.h12)
        + theta2z * _abs2(p.h11)
        + theta2m * _abs2(p.h22)
    )
    return GaussianScheme(
        q1o=0.25,
        q2o=0.25,
        q1p=q1p,
        q2p=q2p,
        q1c=0.25 - q1p,
        q2c=0.25 - q2p,
        q1h=q1h,
        q2h=q2h,
        theta1z=theta1z,
        theta1m=theta1m,
        theta2z=theta2z,
        theta2m=theta2m,
        v1z=(p.h22, -p.h21),
        v1m=(p.h11.conjugate(), p.h12.conjugate()),
        v2z=(-p.h12, p.h11),
        v2m=(p.h21.conjugate(), p.h22.conjugate()),
        sigma1_sq=_abs2(cross1) * theta2m,
        sigma2_sq=_abs2(cross2) * theta1m,
        k_u1_cond=k_u1_cond,
        k_u2_cond=k_u2_cond,
        k_u1=0.25 * pow1 + k_u1_cond,
        k_u2=0.25 * pow2 + k_u2_cond,
    )


@dataclass(frozen=True)
class GaussianDerived:
    """Received-power components and the per-receiver rate values (bits)
    that the sixteen-row decoding template consumes."""

    snr1p: float
    snr1c: float
    inr1p: float
    inr1c: float
    snr2p: float
    snr2c: float
    inr2p: float
    inr2c: float
    p1: float
    g1: float
    t1: float
    n11: float
    s1: float
    l1: float
    m1: float
    p2: float
    g2: float
    t2: float
    n22: float
    s2: float
    l2: float
    m2: float


def inner_quantities(p: GaussianParams, scheme: Optional[GaussianScheme] = None) -> GaussianDerived:
    """Rate values of the achievable scheme at each receiver.

    The effective noise at receiver i is 1 + sigma_i^2 + INR_ip: channel
    noise, the matched-filter leakage of the other user's cooperative
    private signal, and the other user's noncooperative private signal
    (kept at or below the noise floor by the power split).
    """
    s = scheme_config(p) if scheme is None else scheme
    snr1p = p.snr1 * s.q1p
    snr1c = p.snr1 * s.q1c
    inr1p = p.inr1 * s.q2p
    inr1c = p.inr1 * s.q2c
    snr2p = p.snr2 * s.q2p
    snr2c = p.snr2 * s.q2c
    inr2p = p.inr2 * s.q1p
    inr2c = p.inr2 * s.q1c
    d1 = 1.0 + s.sigma1_sq + inr1p
    d2 = 1.0 + s.sigma2_sq + inr2p
    return GaussianDerived(
        snr1p=snr1p,
        snr1c=snr1c,
        inr1p=inr1p,
        inr1c=inr1c,
        snr2p=snr2p,
        snr2c=snr2c,
        inr2p=inr2p,
        inr2c=inr2c,
        p1=_log2(1.0 + snr1p / d1),
        g1=_log2(1.0 + s.k_u1_cond / d1),
        t1=_log2(1.0 + (inr1c + snr1p) / d1),
        n11=_log2(1.0 + 0.25 * p.snr1 / d1),
        s1=_log2(1.0 + (s.k_u1_cond + inr1c) / d1),
        l1=_log2(1.0 + (s.k_u1_cond + 0.25 * p.snr1) / d1),
        m1=_log2(1.0 + (0.25 * p.snr1 + inr1c) / d1),
        p2=_log2(1.0 + snr2p / d2),
        g2=_log2(1.0 + s.k_u2_cond / d2),
        t2=_log2(1.0 + (inr2c + snr2p) / d2),
        n22=_log2(1.0 + 0.25 * p.snr2 / d2),
        s2=_log2(1.0 + (s.k_u2_cond + inr2c) / d2),
        l2=_log2(1.0 + (s.k_u2_cond + 0.25 * p.snr2) / d2),
        m2=_log2(1.0 + (0.25 * p.snr2 + inr2c) / d2),
    )


def _outer_rows(p: GaussianParams) -> List[Tuple[str, int, int, float]]:
    """The twelve genie-aided outer-bound rows as (name, a1, a2, rhs)."""
    snr1, snr2, inr1, inr2 = p.snr1, p.snr2, p.inr1, p.inr2
    cb12, cb21 = p.cb12, p.cb21
    det2 = p.det2
    cross1 = 2.0 * math.sqrt(snr1 * inr1)
    cross2 = 2.0 * math.sqrt(snr2 * inr2)
    full1 = _log2(1.0 + snr1 + inr1 + cross1)
    full2 = _log2(1.0 + snr2 + inr2 + cross2)
    zf1 = _log2(1.0 + snr1 / (1.0 + inr2))
    zf2 = _log2(1.0 + snr2 / (1.0 + inr1))
    return [
        ("bd_R1a", 1, 0, _log2(1.0 + snr1) + cb12),
        ("bd_R1b", 1, 0, full1),
        ("bd_R2a", 0, 1, _log2(1.0 + snr2) + cb21),
        ("bd_R2b", 0, 1, full2),
        ("bd_Sum1", 1, 1, zf1 + full2 + cb12),
        ("bd_Sum2", 1, 1, zf2 + full1 + cb21),
        (
            "bd_Sum3",
            1,
            1,
            _log2(1.0 + (snr1 + cross1) / (1.0 + inr2) + inr1)
            + _log2(1.0 + (snr2 + cross2) / (1.0 + inr1) + inr2)
            + cb12
            + cb21,
        ),
        ("bd_Sum4", 1, 1, _log2(1.0 + snr1 + inr1 + snr2 + inr2 + cross1 + cross2 + det2)),
        (
            "bd_SlopeTwo1",
            2,
            1,
            full1 + zf1 + _log2(1.0 + (snr2 + cross2) / (1.0 + inr1) + inr2) + cb12 + cb21,
        ),
        (
            "bd_SlopeHalf1",
            1,
            2,
            full2 + zf2 + _log2(1.0 + (snr1 + cross1) / (1.0 + inr2) + inr1) + cb12 + cb21,
        ),
        (
            "bd_SlopeTwo2",
            2,
            1,
            _log2(
                1.0
                + snr1
                + inr1
                + snr2
                + inr2
                + snr1 * snr2
                + inr1 * inr2
                + snr1 * inr2
                + (1.0 + inr2) * cross1
            )
            + zf1
            + 1.0
            + cb12,
        ),
        (
            "bd_SlopeHalf2",
            1,
            2,
            _log2(
                1.0
                + snr2
                + inr2
                + snr1
                + inr1
                + snr2 * snr1
                + inr2 * inr1
                + snr2 * inr1
                + (1.0 + inr1) * cross2
            )
            + zf2
            + 1.0
            + cb21,
        ),
    ]


def outer_region(p: GaussianParams) -> Region2D:
    """Intersection of the twelve outer-bound halfplanes with the quadrant,
    redundancy-reduced."""
    return region_from_inequalities(
        [(a1, a2, rhs, name) for name, a1, a2, rhs in _outer_rows(p)], APPROX
    )


def _inner_rows(p: GaussianParams) -> List[Tuple[str, int, int, float]]:
    """Closed-form achievable rows as (name, a1, a2, rhs), unclipped.

    Right-hand sides may go negative for very weak channels; these raw
    values are what the per-bound budget comparison consumes, while
    inner_region floors them at zero before building the region.
    """
    d = inner_quantities(p)
    cb12, cb21 = p.cb12, p.cb21
    half_log90 = 0.5 * GAP_BITS
    return [
        ("in_R1a", 1, 0, d.m1),
        ("in_R1b", 1, 0, d.n11 + cb12 - 2 * LOG3),
        ("in_R2a", 0, 1, d.m2),
        ("in_R2b", 0, 1, d.n22 + cb21 - 2 * LOG3),
        ("in_Sum1", 1, 1, d.t1 + d.t2 + cb12 + cb21 - 2 * LOG5),
        ("in_Sum2", 1, 1, d.p1 + d.m2 + cb12 - half_log90),
        ("in_Sum3", 1, 1, d.p2 + d.m1 + cb21 - half_log90),
        ("in_Sum4", 1, 1, d.g1 + d.m2),
        ("in_Sum5", 1, 1, d.g2 + d.m1),
        ("in_SlopeTwo1", 2, 1, d.p1 + d.m1 + d.t2 + cb12 + cb21 - LOG5),
        ("in_SlopeTwo2", 2, 1, d.p1 + d.m1 + d.s2 + cb12 - LOG5),
        ("in_SlopeTwo3", 2, 1, d.p1 + d.l1 + d.m2 + cb12),
        ("in_SlopeHalf1", 1, 2, d.p2 + d.m2 + d.t1 + cb12 + cb21 - LOG5),
        ("in_SlopeHalf2", 1, 2, d.p2 + d.m2 + d.s1 + cb21 - LOG5),
        ("in_SlopeHalf3", 1, 2, d.p2 + d.l2 + d.m1 + cb21),
    ]


def inner_region(p: GaussianParams) -> Region2D:
    """Closed-form achievable region: the fifteen rows with negative
    right-hand sides floored at zero, intersected with the quadrant."""
    rows = [(a1, a2, max(0.0, rhs), name) for name, a1, a2, rhs in _inner_rows(p)]
    return region_from_inequalities(rows, APPROX)


def pre_fme_inner_system(p: GaussianParams) -> HalfspaceSystem:
    """Achievable-rate system over the thirteen split-rate variables with
    the scheme's rate values substituted, before elimination.

    Reuses the sixteen-row decoding template of the deterministic model;
    only the right-hand-side values differ. The (R1, R2) shadow of this
    system contains the closed-form inner region, which gives away the
    claim slack constants in exchange for short expressions.
    """
    d = inner_quantities(p)
    rows = _receiver_rows(1, d, d.n11) + _receiver_rows(2, d, d.n22)
    rows += _transmitter_rows(p.cb12, p.cb21)
    return HalfspaceSystem(_PRE_VARS, rows, nonneg=_PRE_VARS, mode=APPROX)


def _full_receiver_rows(side: int, s: GaussianScheme, d: GaussianDerived) -> list:
    """Sixteen decoding rows at one receiver with every right-hand side
    evaluated as the decoder's mutual-information value.

    Rows 13 and 14 carry received-power summands beyond the rates on their
    left sides; the fuller right-hand sides are kept as derived (they are
    looser, so the row-wise dominance over the subset template still holds).
    """
    if side == 1:
        kc, ku = s.k_u1_cond, s.k_u1
        den = 1.0 + s.sigma1_sq + d.inr1p
        sp, sc, ic = d.snr1p, d.snr1c, d.inr1c
        th, oc, op, xc = "Rt1h", "R1c", "R1p", "R2c"
    else:
        kc, ku = s.k_u2_cond, s.k_u2
        den = 1.0 + s.sigma2_sq + d.inr2p
        sp, sc, ic = d.snr2p, d.snr2c, d.inr2c
        th, oc, op, xc = "Rt2h", "R2c", "R2p", "R1c"

    def r(power: float) -> float:
        return _log2(1.0 + power / den)

    pre = f"rx{side}"
    return [
        LinearInequality({op: 1}, r(sp), f"{pre}_01"),
        LinearInequality({th: 1}, r(kc), f"{pre}_02"),
        LinearInequality({th: 1, op: 1}, r(kc + sp), f"{pre}_03"),
        LinearInequality({xc: 1, op: 1}, r(ic + sp), f"{pre}_04"),
        LinearInequality({oc: 1, op: 1}, r(sc + sp), f"{pre}_05"),
        LinearInequality({xc: 1, th: 1}, r(kc + ic), f"{pre}_06"),
        LinearInequality({xc: 1, th: 1, op: 1}, r(kc + ic + sp), f"{pre}_07"),
        LinearInequality({oc: 1, th: 1, op: 1}, r(kc + sc + sp), f"{pre}_08"),
        LinearInequality({oc: 1, xc: 1, op: 1}, r(sc + ic + sp), f"{pre}_09"),
        LinearInequality({oc: 1, xc: 1, th: 1, op: 1}, r(kc + sc + ic + sp), f"{pre}_10"),
        LinearInequality({"Ro": 1, th: 1}, r(ku), f"{pre}_11"),
        LinearInequality({"Ro": 1, th: 1, op: 1}, r(ku + sp), f"{pre}_12"),
        LinearInequality({"Ro": 1, xc: 1, th: 1}, r(ku + ic + sp), f"{pre}_13"),
        LinearInequality({"Ro": 1, xc: 1, th: 1, op: 1}, r(ku + sc + ic + sp), f"{pre}_14"),
        LinearInequality({"Ro": 1, oc: 1, th: 1, op: 1}, r(ku + sc + sp), f"{pre}_15"),
        LinearInequality({"Ro": 1, oc: 1, xc: 1, th: 1, op: 1}, r(ku + sc + ic + sp), f"{pre}_16"),
    ]


def theorem2_full_system(p: GaussianParams) -> HalfspaceSystem:
    """Full sixteen-rows-per-receiver decoding system plus the transmitter
    rows, with unconditional cooperative power K_u on the rows that decode
    the cooperative common codeword."""
    s = scheme_config(p)
    d = inner_quantities(p, s)
    rows = _full_receiver_rows(1, s, d) + _full_receiver_rows(2, s, d)
    rows += _transmitter_rows(p.cb12, p.cb21)
    return HalfspaceSystem(_PRE_VARS, rows, nonneg=_PRE_VARS, mode=APPROX)


def check_gaussian_claims(p: GaussianParams, tol: float = 1e-9) -> ClaimsReport:
    """Scalar inequalities behind the constant-gap reduction.

    Covers the pairwise redundancy claims over the derived quantities, the
    joint-versus-split decomposition inequality, the conditional cooperative
    power lower bound, the determinant cross-power inequality, the scheme's
    power-feasibility bounds, and (as a relative-error check) the identity
    tying the matched-filter leakage to the channel determinant.
    """
    s = scheme_config(p)
    d = inner_quantities(p, s)
    snr1, snr2, inr1, inr2, det2 = p.snr1, p.snr2, p.inr1, p.inr2, p.det2
    log9 = 2 * LOG3
    log94 = log9 - 2.0
    log18 = _log2(18.0)
    log12 = _log2(12.0)
    entries = [
        claim_ge("p1+t2>=n11-log(9/4)", d.p1 + d.t2, d.n11 - log94, tol),
        claim_ge("p2+t1>=n22-log(9/4)", d.p2 + d.t1, d.n22 - log94, tol),
        claim_ge("p1+s2>=n11-log(9/4)", d.p1 + d.s2, d.n11 - log94, tol),
        claim_ge("p2+s1>=n22-log(9/4)", d.p2 + d.s1, d.n22 - log94, tol),
        claim_ge("g1+t2>=n11-log9", d.g1 + d.t2, d.n11 - log9, tol),
        claim_ge("g2+t1>=n22-log9", d.g2 + d.t1, d.n22 - log9, tol),
        claim_ge("g1+s2>=n11-log9", d.g1 + d.s2, d.n11 - log9, tol),
        claim_ge("g2+s1>=n22-log9", d.g2 + d.s1, d.n22 - log9, tol),
        claim_ge("s1>=t1-log5", d.s1, d.t1 - LOG5, tol),
        claim_ge("s2>=t2-log5", d.s2, d.t2 - LOG5, tol),
        claim_ge("g1>=p1-log5", d.g1, d.p1 - LOG5, tol),
        claim_ge("g2>=p2-log5", d.g2, d.p2 - LOG5, tol),
        claim_ge("s1+t2>=p2+m1-log18", d.s1 + d.t2, d.p2 + d.m1 - log18, tol),
        claim_ge("s2+t1>=p1+m2-log18", d.s2 + d.t1, d.p1 + d.m2 - log18, tol),
        claim_ge("l1+t1>=p1+m1-log12", d.l1 + d.t1, d.p1 + d.m1 - log12, tol),
        claim_ge("l2+t2>=p2+m2-log12", d.l2 + d.t2, d.p2 + d.m2 - log12, tol),
        claim_ge(
            "joint>=zf1+full2",
            _log2(1.0 + snr1 + inr1 + snr2 + inr2 + det2),
            _log2(1.0 + snr1 / (1.0 + inr2)) + _log2(1.0 + snr2 + inr2),
            tol,
        ),
        claim_ge(
            "joint>=zf2+full1",
            _log2(1.0 + snr1 + inr1 + snr2 + inr2 + det2),
            _log2(1.0 + snr2 / (1.0 + inr1)) + _log2(1.0 + snr1 + inr1),
            tol,
        ),
        claim_ge("k_u1_cond>=snr1/(4(1+inr2))", s.k_u1_cond, snr1 / (4.0 * (1.0 + inr2)), tol),
        claim_ge("k_u2_cond>=snr2/(4(1+inr1))", s.k_u2_cond, snr2 / (4.0 * (1.0 + inr1)), tol),
        claim_ge(
            "2det+4snr1snr2>=snr1snr2+inr1inr2",
            2.0 * det2 + 4.0 * snr1 * snr2,
            snr1 * snr2 + inr1 * inr2,
            tol,
        ),
        claim_ge(
            "2det+4inr1inr2>=snr1snr2+inr1inr2",
            2.0 * det2 + 4.0 * inr1 * inr2,
            snr1 * snr2 + inr1 * inr2,
            tol,
        ),
        claim_ge("sigma1_sq<=1/4", 0.25, s.sigma1_sq, tol),
        claim_ge("sigma2_sq<=1/4", 0.25, s.sigma2_sq, tol),
        claim_ge("q1h<=1/2", 0.5, s.q1h, tol),
        claim_ge("q2h<=1/2", 0.5, s.q2h, tol),
        claim_ge("q1_total<=1", 1.0, s.q1o + s.q1c + s.q1p + s.q1h, tol),
        claim_ge("q2_total<=1", 1.0, s.q2o + s.q2c + s.q2p + s.q2h, tol),
        claim_ge("inr1p<=1", 1.0, d.inr1p, tol),
        claim_ge("inr2p<=1", 1.0, d.inr2p, tol),
    ]
    # |h11 h21* + h12 h22*|^2 = (SNR1+INR1)(SNR2+INR2) - |det|^2, checked in
    # relative terms because the operands grow like the fourth gain power.
    cross = p.h11 * p.h21.conjugate() + p.h12 * p.h22.conjugate()
    ident_rhs = (snr1 + inr1) * (snr2 + inr2) - det2
    # Scale by the minuend, not the difference: when the two products nearly
    # cancel, |ident_rhs| is pure rounding noise and cannot serve as a scale.
    scale = max(1.0, (snr1 + inr1) * (snr2 + inr2))
    entries.append(claim_eq("det_identity_rel", _abs2(cross) / scale, ident_rhs / scale, tol))
    return ClaimsReport(tuple(entries))


def per_bound_gap_check(p: GaussianParams, tol: float = 1e-6) -> ClaimsReport:
    """Outer minus inner right-hand side for each matched bound family.

    Matching pairs the outer row with the inner row(s) of the same
    coefficient vector and conference-capacity content; where two inner rows
    compete, the smaller (binding) one is used. Budgets are per family:
    4log3 for the single-rate rows, 4log3+2+2log5 for the sum rows, and
    6log3+log5+1 for the slope rows. Inner right-hand sides enter unclipped
    so that a weak channel cannot hide a budget violation behind the zero
    floor.
    """
    outer = {name: rhs for name, _, _, rhs in _outer_rows(p)}
    inner = {name: rhs for name, _, _, rhs in _inner_rows(p)}
    pairs = [
        ("gap_R1_direct", "bd_R1b", ("in_R1a",), BUDGET_R),
        ("gap_R1_conf", "bd_R1a", ("in_R1b",), BUDGET_R),
        ("gap_R2_direct", "bd_R2b", ("in_R2a",), BUDGET_R),
        ("gap_R2_conf", "bd_R2a", ("in_R2b",), BUDGET_R),
        ("gap_sum_conf12", "bd_Sum1", ("in_Sum2",), BUDGET_SUM),
        ("gap_sum_conf21", "bd_Sum2", ("in_Sum3",), BUDGET_SUM),
        ("gap_sum_both", "bd_Sum3", ("in_Sum1",), BUDGET_SUM),
        ("gap_sum_joint", "bd_Sum4", ("in_Sum4", "in_Sum5"), BUDGET_SUM),
        ("gap_two_both", "bd_SlopeTwo1", ("in_SlopeTwo1",), BUDGET_SLOPE),
        ("gap_two_joint", "bd_SlopeTwo2", ("in_SlopeTwo2", "in_SlopeTwo3"), BUDGET_SLOPE),
        ("gap_half_both", "bd_SlopeHalf1", ("in_SlopeHalf1",), BUDGET_SLOPE),
        ("gap_half_joint", "bd_SlopeHalf2", ("in_SlopeHalf2", "in_SlopeHalf3"), BUDGET_SLOPE),
    ]
    entries = []
    for name, out_name, in_names, budget in pairs:
        gap = outer[out_name] - min(inner[i] for i in in_names)
        entries.append(claim_ge(name, budget, gap, tol))
    return ClaimsReport(tuple(entries))
