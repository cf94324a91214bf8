"""Linear deterministic interference channel with conferencing transmitters.

The channel delivers the top n_ij levels of each transmit vector to each
receiver with modulo-two superposition; transmitters may exchange k_12 and
k_21 bits per channel use over noiseless conference links. This module
builds the exact capacity region, the derived level-counting quantities,
the pre-elimination achievable-rate system whose (R1, R2) shadow must equal
the capacity region, the identity checks that make the hand reduction
sound, and a GF(2) simulator with a randomized one-shot linear-scheme
achievability oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import floor, frexp
from typing import Mapping, Optional, Tuple

from .gf2 import BitMatrix, random_matrix, shift_matrix
from .polytope import (
    EXACT,
    ClaimsReport,
    HalfspaceSystem,
    LinearInequality,
    Region2D,
    claim_eq,
    claim_ge,
    project_to_rates,
    region_from_inequalities,
)

__all__ = [
    "LdcParams",
    "LdcDerived",
    "LdcScheme",
    "from_gaussian",
    "capacity_region",
    "derived_quantities",
    "pre_fme_system",
    "verify_lemmas_1_2",
    "check_ldc_claims",
    "rank_independence_check",
    "channel_output",
    "scheme_verify",
    "scheme_search",
]


def _pos(x: int) -> int:
    return x if x > 0 else 0


@dataclass(frozen=True)
class LdcParams:
    """Channel levels n_ij (gain of the Tx j -> Rx i link in powers of two)
    and conference capacities k_12 (Tx1 -> Tx2 bits), k_21."""

    n11: int
    n12: int
    n21: int
    n22: int
    k12: int
    k21: int

    def __post_init__(self) -> None:
        for name in ("n11", "n12", "n21", "n22", "k12", "k21"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")

    @property
    def full_rank(self) -> bool:
        return self.n11 + self.n22 != self.n12 + self.n21

    @property
    def q(self) -> int:
        return max(self.n11, self.n12, self.n21, self.n22)

    def to_json_dict(self) -> dict:
        return {"n": [self.n11, self.n12, self.n21, self.n22], "k": [self.k12, self.k21]}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "LdcParams":
        n = data["n"]
        k = data["k"]
        if len(n) != 4 or len(k) != 2:
            raise ValueError("expected n:[n11,n12,n21,n22] and k:[k12,k21]")
        return cls(int(n[0]), int(n[1]), int(n[2]), int(n[3]), int(k[0]), int(k[1]))


@dataclass(frozen=True)
class LdcDerived:
    """Level counts entering the achievable-rate rows: p_i private-only
    levels, t_i/m_i/l_i/s_i received-combination tops, g_i cooperative
    private levels (case-resolved on the transfer-matrix rank), q = max n."""

    q: int
    p1: int
    t1: int
    m1: int
    l1: int
    s1: int
    g1: int
    p2: int
    t2: int
    m2: int
    l2: int
    s2: int
    g2: int


def from_gaussian(g) -> LdcParams:
    """Quantize a Gaussian channel: n_ij = (floor log2 |h_ij|^2)+ and
    k = floor of the conference capacities."""

    def levels(h: complex) -> int:
        v = h.real * h.real + h.imag * h.imag
        if v <= 0.0:
            return 0
        return _pos(frexp(v)[1] - 1)  # frexp: v = m * 2**e, m in [0.5, 1)

    return LdcParams(
        levels(g.h11),
        levels(g.h12),
        levels(g.h21),
        levels(g.h22),
        floor(g.cb12),
        floor(g.cb21),
    )


def derived_quantities(p: LdcParams) -> LdcDerived:
    p1 = _pos(p.n11 - p.n21)
    p2 = _pos(p.n22 - p.n12)
    if p.full_rank:
        g1 = max(p.n11 - _pos(p.n21 - p.n22), p.n12 - _pos(p.n22 - p.n21))
        g2 = max(p.n22 - _pos(p.n12 - p.n11), p.n21 - _pos(p.n11 - p.n12))
    else:
        g1, g2 = p1, p2
    return LdcDerived(
        q=p.q,
        p1=p1,
        t1=max(p.n12, p1),
        m1=max(p.n11, p.n12),
        l1=max(p.n11, g1),
        s1=max(p.n12, g1),
        g1=g1,
        p2=p2,
        t2=max(p.n21, p2),
        m2=max(p.n22, p.n21),
        l2=max(p.n22, g2),
        s2=max(p.n21, g2),
        g2=g2,
    )


def _capacity_rows(p: LdcParams) -> list:
    n11, n12, n21, n22, k12, k21 = p.n11, p.n12, p.n21, p.n22, p.k12, p.k21
    if p.full_rank:
        sum4 = max(n11 + n22, n12 + n21)
    else:
        sum4 = max(n11, n12, n21, n22)
    return [
        (1, 0, max(n11, n12), "R1a"),
        (1, 0, n11 + k12, "R1b"),
        (0, 1, max(n22, n21), "R2a"),
        (0, 1, n22 + k21, "R2b"),
        (1, 1, _pos(n11 - n21) + max(n22, n21) + k12, "Sum1"),
        (1, 1, _pos(n22 - n12) + max(n11, n12) + k21, "Sum2"),
        (1, 1, max(n12, _pos(n11 - n21)) + max(n21, _pos(n22 - n12)) + k12 + k21, "Sum3"),
        (1, 1, sum4, "Sum4"),
        (2, 1, max(n11, n12) + max(n21, _pos(n22 - n12)) + _pos(n11 - n21) + k12 + k21, "SlopeTwo1"),
        (2, 1, n21 + max(n11 + _pos(n22 - n21), n12) + _pos(n11 - n21) + k12, "SlopeTwo2"),
        (1, 2, max(n22, n21) + max(n12, _pos(n11 - n21)) + _pos(n22 - n12) + k21 + k12, "SlopeHalf1"),
        (1, 2, n12 + max(n22 + _pos(n11 - n12), n21) + _pos(n22 - n12) + k21, "SlopeHalf2"),
    ]


def capacity_region(p: LdcParams) -> Region2D:
    """Exact reduced capacity region: cut-set rows per user, four sum-rate
    rows (with the rank case split in the determinant row), and two rows in
    each of the 2R1+R2 / R1+2R2 slope families."""
    return region_from_inequalities(_capacity_rows(p), EXACT)


# Variables of the pre-elimination achievable system. R1o/R1h are the
# conference-carried common/private splits, Ro the joint cooperative-common
# rate, Rt1h/Rt2h the bin sizes holding the cooperative private codebooks,
# R1c/R1p the noncooperative common/private splits.
_PRE_VARS = (
    "R1",
    "R2",
    "R1o",
    "R2o",
    "Ro",
    "R1h",
    "R2h",
    "Rt1h",
    "Rt2h",
    "R1c",
    "R2c",
    "R1p",
    "R2p",
)


def _receiver_rows(side: int, d: LdcDerived, n_direct: int) -> list:
    """The sixteen decoding rows at one receiver; side 1 uses (Rt1h, R1c,
    R1p, R2c), side 2 the mirrored variables."""
    if side == 1:
        p_, g_, t_, s_, l_, m_ = d.p1, d.g1, d.t1, d.s1, d.l1, d.m1
        th, oc, op, xc = "Rt1h", "R1c", "R1p", "R2c"
    else:
        p_, g_, t_, s_, l_, m_ = d.p2, d.g2, d.t2, d.s2, d.l2, d.m2
        th, oc, op, xc = "Rt2h", "R2c", "R2p", "R1c"
    pre = f"rx{side}"
    return [
        LinearInequality({op: 1}, p_, f"{pre}_01"),
        LinearInequality({th: 1}, g_, f"{pre}_02"),
        LinearInequality({th: 1, op: 1}, g_, f"{pre}_03"),
        LinearInequality({xc: 1, op: 1}, t_, f"{pre}_04"),
        LinearInequality({oc: 1, op: 1}, n_direct, f"{pre}_05"),
        LinearInequality({xc: 1, th: 1}, s_, f"{pre}_06"),
        LinearInequality({xc: 1, th: 1, op: 1}, s_, f"{pre}_07"),
        LinearInequality({oc: 1, th: 1, op: 1}, l_, f"{pre}_08"),
        LinearInequality({oc: 1, xc: 1, op: 1}, m_, f"{pre}_09"),
        LinearInequality({oc: 1, xc: 1, th: 1, op: 1}, m_, f"{pre}_10"),
        LinearInequality({"Ro": 1, th: 1}, m_, f"{pre}_11"),
        LinearInequality({"Ro": 1, th: 1, op: 1}, m_, f"{pre}_12"),
        LinearInequality({"Ro": 1, xc: 1, th: 1}, m_, f"{pre}_13"),
        LinearInequality({"Ro": 1, xc: 1, th: 1, op: 1}, m_, f"{pre}_14"),
        LinearInequality({"Ro": 1, oc: 1, th: 1, op: 1}, m_, f"{pre}_15"),
        LinearInequality({"Ro": 1, oc: 1, xc: 1, th: 1, op: 1}, m_, f"{pre}_16"),
    ]


def _transmitter_rows(c12, c21) -> list:
    """Conference-link, binning, and rate-definition rows; identical for
    every channel model that uses the four-way message split."""
    rows = [
        LinearInequality({"R1h": 1, "Rt1h": -1}, 0, "tx_bin1"),
        LinearInequality({"R2h": 1, "Rt2h": -1}, 0, "tx_bin2"),
        LinearInequality({"R1o": 1, "R1h": 1}, c12, "tx_conf12"),
        LinearInequality({"R2o": 1, "R2h": 1}, c21, "tx_conf21"),
        LinearInequality({"R1h": 1, "R2h": 1, "Rt1h": -1, "Rt2h": -1}, 0, "tx_binsum"),
    ]
    for name, coeffs in (
        ("def_Ro", {"Ro": 1, "R1o": -1, "R2o": -1}),
        ("def_R1", {"R1": 1, "R1o": -1, "R1h": -1, "R1c": -1, "R1p": -1}),
        ("def_R2", {"R2": 1, "R2o": -1, "R2h": -1, "R2c": -1, "R2p": -1}),
    ):
        rows.append(LinearInequality(coeffs, 0, f"{name}_le"))
        rows.append(LinearInequality({v: -c for v, c in coeffs.items()}, 0, f"{name}_ge"))
    return rows


def pre_fme_system(p: LdcParams) -> HalfspaceSystem:
    """Achievable-rate system before eliminating the split variables.

    Sixteen decoding rows per receiver (the rank-deficient case lands on
    g_i = p_i, s_i = t_i, l_i = n_ii automatically through the derived
    quantities), five transmitter rows, and the three defining equalities
    Ro = R1o + R2o, R_i = R_io + R_ih + R_ic + R_ip as paired inequalities.
    """
    d = derived_quantities(p)
    rows = _receiver_rows(1, d, p.n11) + _receiver_rows(2, d, p.n22)
    rows += _transmitter_rows(p.k12, p.k21)
    return HalfspaceSystem(_PRE_VARS, rows, nonneg=_PRE_VARS, mode=EXACT)


def verify_lemmas_1_2(p: LdcParams) -> bool:
    """True iff the (R1, R2) shadow of the pre-elimination system equals the
    capacity region exactly (vertex-set identity)."""
    shadow = project_to_rates(pre_fme_system(p))
    return shadow.vertices == capacity_region(p).vertices


def check_ldc_claims(p: LdcParams) -> ClaimsReport:
    """The identities and inequalities that justify dropping every redundant
    row in the hand reduction, evaluated exactly (zero tolerance)."""
    d = derived_quantities(p)
    entries = [
        claim_ge("p1+t2>=n11", d.p1 + d.t2, p.n11, 0),
        claim_ge("p2+t1>=n22", d.p2 + d.t1, p.n22, 0),
        claim_ge("g1>=p1", d.g1, d.p1, 0),
        claim_ge("g2>=p2", d.g2, d.p2, 0),
        claim_ge("s1>=t1", d.s1, d.t1, 0),
        claim_ge("s2>=t2", d.s2, d.t2, 0),
        claim_ge("s1+t2>=p2+m1", d.s1 + d.t2, d.p2 + d.m1, 0),
        claim_ge("s2+t1>=p1+m2", d.s2 + d.t1, d.p1 + d.m2, 0),
        claim_ge("l1+t1>=p1+m1", d.l1 + d.t1, d.p1 + d.m1, 0),
        claim_ge("l2+t2>=p2+m2", d.l2 + d.t2, d.p2 + d.m2, 0),
    ]
    if p.full_rank:
        cross = max(p.n11 + p.n22, p.n12 + p.n21)
        entries += [
            claim_eq("g1+m2==g2+m1", d.g1 + d.m2, d.g2 + d.m1),
            claim_eq("g1+m2==max_cross_sum", d.g1 + d.m2, cross),
            claim_eq("s2+m1==l1+m2", d.s2 + d.m1, d.l1 + d.m2),
            claim_eq("s1+m2==l2+m1", d.s1 + d.m2, d.l2 + d.m1),
        ]
    else:
        top = max(p.n11, p.n12, p.n21, p.n22)
        entries += [
            claim_eq("p1+m2==p2+m1", d.p1 + d.m2, d.p2 + d.m1),
            claim_eq("p1+m2==max_level", d.p1 + d.m2, top),
            claim_eq("p1+t2==p2+n11", d.p1 + d.t2, d.p2 + p.n11),
            claim_eq("p2+t1==p1+n22", d.p2 + d.t1, d.p1 + p.n22),
        ]
    return ClaimsReport(tuple(entries))


def rank_independence_check(p: LdcParams) -> bool:
    """Linear-algebra content of the conditional-independence claim: the g1
    bottom rows of the Rx1 transfer map stacked on the g2 bottom rows of the
    Rx2 map have full GF(2) rank g1 + g2."""
    d = derived_quantities(p)
    q = d.q
    rx1 = shift_matrix(q, q - p.n11).hstack(shift_matrix(q, q - p.n12))
    rx2 = shift_matrix(q, q - p.n21).hstack(shift_matrix(q, q - p.n22))
    stacked = rx1.take_rows(range(q - d.g1, q)).vstack(rx2.take_rows(range(q - d.g2, q)))
    return stacked.rank() == d.g1 + d.g2


def channel_output(p: LdcParams, x1: int, x2: int) -> Tuple[int, int]:
    """One channel use on level vectors stored as ints (bit i = level i,
    level 0 on top): each link keeps the top n_ij levels, shifted down, and
    superposes modulo two."""
    q = p.q
    mask = (1 << q) - 1
    if not (0 <= x1 <= mask and 0 <= x2 <= mask):
        raise ValueError(f"inputs must be {q}-level vectors")
    y1 = ((x1 << (q - p.n11)) ^ (x2 << (q - p.n12))) & mask
    y2 = ((x1 << (q - p.n21)) ^ (x2 << (q - p.n22))) & mask
    return y1, y2


@dataclass(frozen=True)
class LdcScheme:
    """One-shot linear strategy: conference maps F12 (k12 x R1, bits of m1
    sent to Tx2) and F21 (k21 x R2); transmit maps x1 = A1 m1 + B1 F21 m2,
    x2 = A2 m2 + B2 F12 m1."""

    F12: BitMatrix
    F21: BitMatrix
    A1: BitMatrix
    B1: BitMatrix
    A2: BitMatrix
    B2: BitMatrix

    def to_json_dict(self) -> dict:
        out = {}
        for field_name in ("F12", "F21", "A1", "B1", "A2", "B2"):
            m: BitMatrix = getattr(self, field_name)
            out[field_name] = {"rows": list(m.to_hex()), "cols": m.cols}
        return out

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "LdcScheme":
        mats = {
            k: BitMatrix.from_hex(v["rows"], v["cols"])
            for k, v in data.items()
            if k in ("F12", "F21", "A1", "B1", "A2", "B2")
        }
        return cls(**mats)


def _scheme_shapes(p: LdcParams, r1: int, r2: int) -> dict:
    q = p.q
    return {
        "F12": (p.k12, r1),
        "F21": (p.k21, r2),
        "A1": (q, r1),
        "B1": (q, p.k21),
        "A2": (q, r2),
        "B2": (q, p.k12),
    }


def _received_map(p: LdcParams, s: LdcScheme, side: int) -> BitMatrix:
    """Linear map (m1, m2) -> y_side induced by the scheme and channel."""
    q = p.q
    n_own, n_other = (p.n11, p.n12) if side == 1 else (p.n21, p.n22)
    sh1, sh2 = shift_matrix(q, q - n_own), shift_matrix(q, q - n_other)
    of_m1 = sh1.mul(s.A1).xor(sh2.mul(s.B2.mul(s.F12)))
    of_m2 = sh1.mul(s.B1.mul(s.F21)).xor(sh2.mul(s.A2))
    return of_m1.hstack(of_m2)


def scheme_verify(p: LdcParams, s: LdcScheme, r1: int, r2: int) -> bool:
    """True iff both receivers can decode their own message for every value
    of the other: the rows selecting the own-message coordinates must lie in
    the row space of the received linear map."""
    for field_name, shape in _scheme_shapes(p, r1, r2).items():
        if getattr(s, field_name).shape != shape:
            raise ValueError(f"{field_name} has shape {getattr(s, field_name).shape}, expected {shape}")
    rx1_targets = [1 << i for i in range(r1)]
    rx2_targets = [1 << (r1 + i) for i in range(r2)]
    return _received_map(p, s, 1).spans(rx1_targets) and _received_map(p, s, 2).spans(rx2_targets)


def scheme_search(
    p: LdcParams, r1: int, r2: int, budget: int = 10**6, seed: int = 0
) -> Optional[LdcScheme]:
    """Seeded randomized search for a verifying one-shot linear scheme.

    Guarded to q <= 6 and k <= 3 where uniform sampling has workable hit
    rates; returns the first verifying scheme within the trial budget or
    None. Receiver-1 decodability is tested first to reject cheaply.
    """
    q = p.q
    if q > 6 or max(p.k12, p.k21) > 3:
        raise ValueError("search guard: requires q <= 6 and k <= 3")
    if r1 < 0 or r2 < 0:
        raise ValueError("rates must be nonnegative")
    rng = random.Random(seed)
    shapes = _scheme_shapes(p, r1, r2)
    rx1_targets = [1 << i for i in range(r1)]
    rx2_targets = [1 << (r1 + i) for i in range(r2)]
    for _ in range(budget):
        s = LdcScheme(**{k: random_matrix(rng, *shape) for k, shape in shapes.items()})
        if not _received_map(p, s, 1).spans(rx1_targets):
            continue
        if _received_map(p, s, 2).spans(rx2_targets):
            return s
    return None
