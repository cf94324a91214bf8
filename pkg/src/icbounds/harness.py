"""Seeded random channel sweeps with per-sample checks and aggregation.

One RNG drives the whole sweep, so a (config, seed) pair fixes every drawn
channel, every CSV byte, and the summary. Per-sample pass/fail checks feed
the failure list (empty exactly when all checks passed); headline metrics
(worst per-user gap, minimum claim slack) are aggregated with the sample
index and channel that achieved them so they can be re-evaluated in
isolation. Wall-clock time is measured but kept out of the serialized
summary so reruns compare byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .gaussian import (
    GAP_BITS,
    GaussianParams,
    check_gaussian_claims,
    inner_region,
    outer_region,
    per_bound_gap_check,
)
from .ldc import LdcParams, check_ldc_claims, rank_independence_check, verify_lemmas_1_2
from .polytope import per_user_gap
from .reciprocity import TAU_RECIPROCAL, check_reciprocity_claims, reciprocity_gap

__all__ = [
    "MODES",
    "SweepConfig",
    "SweepSummary",
    "sample_gaussian",
    "sample_ldc",
    "run_sweep",
    "summary_json",
]

MODES = ("ldc", "gaussian", "reciprocity")

_PARAM_COLS = [
    "h11_re", "h11_im", "h12_re", "h12_im",
    "h21_re", "h21_im", "h22_re", "h22_im",
    "cb12", "cb21",
]

_CSV_COLUMNS = {
    "gaussian": ["index"] + _PARAM_COLS + [
        "gap_tau", "witness_r1", "witness_r2",
        "min_claim_slack", "min_budget_slack", "inner_in_outer", "passed",
    ],
    "reciprocity": ["index"] + _PARAM_COLS + [
        "forward_tau", "reverse_tau", "min_claim_slack", "forward_finding", "passed",
    ],
    "ldc": ["index", "n11", "n12", "n21", "n22", "k12", "k21",
            "lemmas_ok", "min_claim_slack", "passed"],
}


@dataclass(frozen=True)
class SweepConfig:
    """Sample count, channel-draw distribution, seed, mode, and tolerances.

    Gains are log-uniform in dB over gain_db with uniform phases; conference
    capacities are uniform over cb_range bits. The ldc mode draws integer
    levels in [0, n_max] and conference bits in [0, k_max] instead.
    """

    mode: str = "gaussian"
    count: int = 1000
    seed: int = 0
    gain_db: Tuple[float, float] = (0.0, 60.0)
    cb_range: Tuple[float, float] = (0.0, 10.0)
    n_max: int = 6
    k_max: int = 3
    claim_tol: float = 1e-9
    gap_tol: float = 1e-6

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (isinstance(self.count, int) and self.count >= 1):
            raise ValueError(f"count must be a positive integer, got {self.count!r}")
        for name in ("gain_db", "cb_range"):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise ValueError(f"{name} must be a nonempty finite range, got ({lo}, {hi})")
        if self.cb_range[0] < 0:
            raise ValueError("cb_range must be nonnegative")
        if self.n_max < 0 or self.k_max < 0:
            raise ValueError("n_max and k_max must be nonnegative")
        if self.claim_tol < 0 or self.gap_tol < 0:
            raise ValueError("tolerances must be nonnegative")

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "count": self.count,
            "seed": self.seed,
            "gain_db": list(self.gain_db),
            "cb_range": list(self.cb_range),
            "n_max": self.n_max,
            "k_max": self.k_max,
            "claim_tol": self.claim_tol,
            "gap_tol": self.gap_tol,
        }


@dataclass(frozen=True)
class SweepSummary:
    """Aggregates of one sweep; failures is empty iff every check passed."""

    config: SweepConfig
    worst_gap: Optional[float]
    worst_gap_index: Optional[int]
    worst_gap_params: Optional[dict]
    min_claim_slack: Optional[float]
    min_claim_name: Optional[str]
    min_claim_index: Optional[int]
    failures: Tuple[str, ...]
    wall_clock_s: float
    worst_forward_gap: Optional[float] = None
    forward_findings: Optional[int] = None

    @property
    def all_passed(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        # wall_clock_s deliberately left out: reruns must serialize
        # byte-identically.
        return {
            "config": self.config.to_json_dict(),
            "seed": self.config.seed,
            "mode": self.config.mode,
            "count": self.config.count,
            "worst_gap": self.worst_gap,
            "worst_gap_index": self.worst_gap_index,
            "worst_gap_params": self.worst_gap_params,
            "min_claim_slack": self.min_claim_slack,
            "min_claim_name": self.min_claim_name,
            "min_claim_index": self.min_claim_index,
            "failures": list(self.failures),
            "all_passed": self.all_passed,
            "worst_forward_gap": self.worst_forward_gap,
            "forward_findings": self.forward_findings,
        }


def summary_json(summary: SweepSummary) -> str:
    return json.dumps(summary.to_json_dict(), sort_keys=True, indent=2) + "\n"


def sample_gaussian(rng: random.Random, gain_db: Tuple[float, float] = (0.0, 60.0),
                    cb_range: Tuple[float, float] = (0.0, 10.0)) -> GaussianParams:
    """One channel draw: |h| log-uniform in dB, phase uniform, cb uniform."""

    def gain() -> complex:
        mag = 10.0 ** (rng.uniform(gain_db[0], gain_db[1]) / 20.0)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        return mag * complex(math.cos(phase), math.sin(phase))

    h11, h12, h21, h22 = gain(), gain(), gain(), gain()
    cb12 = rng.uniform(cb_range[0], cb_range[1])
    cb21 = rng.uniform(cb_range[0], cb_range[1])
    return GaussianParams(h11, h12, h21, h22, cb12, cb21)


def sample_ldc(rng: random.Random, n_max: int = 6, k_max: int = 3) -> LdcParams:
    return LdcParams(
        rng.randint(0, n_max), rng.randint(0, n_max),
        rng.randint(0, n_max), rng.randint(0, n_max),
        rng.randint(0, k_max), rng.randint(0, k_max),
    )


def _param_cells(p: GaussianParams) -> list:
    return [
        p.h11.real, p.h11.imag, p.h12.real, p.h12.imag,
        p.h21.real, p.h21.imag, p.h22.real, p.h22.imag,
        p.cb12, p.cb21,
    ]


def _failing(report) -> str:
    return ",".join(e.name for e in report.entries if not e.passed)


class _Tracker:
    """Running minimum claim slack and maximum gap with their arguments."""

    def __init__(self) -> None:
        self.min_slack: Optional[float] = None
        self.min_name: Optional[str] = None
        self.min_index: Optional[int] = None
        self.max_gap: Optional[float] = None
        self.max_gap_index: Optional[int] = None
        self.max_gap_params: Optional[dict] = None

    def see_claims(self, index: int, *reports) -> float:
        slack, name = math.inf, ""
        for rep in reports:
            for e in rep.entries:
                s = float(e.slack)
                if s < slack:
                    slack, name = s, e.name
        if self.min_slack is None or slack < self.min_slack:
            self.min_slack, self.min_name, self.min_index = slack, name, index
        return slack

    def see_gap(self, index: int, tau: float, params_json: dict) -> None:
        if self.max_gap is None or tau > self.max_gap:
            self.max_gap, self.max_gap_index = tau, index
            self.max_gap_params = params_json


def _sweep_gaussian(cfg: SweepConfig, rng: random.Random, writer, track: _Tracker,
                    failures: List[str]) -> dict:
    for i in range(cfg.count):
        p = sample_gaussian(rng, cfg.gain_db, cfg.cb_range)
        claims = check_gaussian_claims(p, cfg.claim_tol)
        budgets = per_bound_gap_check(p, cfg.gap_tol)
        outer = outer_region(p)
        inner = inner_region(p)
        contained = all(outer.contains(v, cfg.gap_tol) for v in inner.vertices)
        gap = per_user_gap(outer, inner)
        gap_ok = gap.tau <= GAP_BITS + cfg.gap_tol

        if not claims.all_pass:
            failures.append(f"{i}:claims:{_failing(claims)}")
        if not budgets.all_pass:
            failures.append(f"{i}:budgets:{_failing(budgets)}")
        if not contained:
            failures.append(f"{i}:containment")
        if not gap_ok:
            failures.append(f"{i}:gap:{gap.tau!r}")

        min_claim = track.see_claims(i, claims, budgets)
        track.see_gap(i, gap.tau, p.to_json_dict())
        passed = claims.all_pass and budgets.all_pass and contained and gap_ok
        wx, wy = gap.witness if gap.witness is not None else (0.0, 0.0)
        _write_row(writer, i, _param_cells(p) + [
            gap.tau, wx, wy, min_claim,
            budgets.min_slack, int(contained), int(passed),
        ])
    return {}


def _sweep_reciprocity(cfg: SweepConfig, rng: random.Random, writer, track: _Tracker,
                       failures: List[str]) -> dict:
    worst_forward: float = 0.0
    findings = 0
    for i in range(cfg.count):
        p = sample_gaussian(rng, cfg.gain_db, cfg.cb_range)
        claims = check_reciprocity_claims(p, cfg.claim_tol)
        forward, reverse = reciprocity_gap(p)
        reverse_ok = reverse.tau <= TAU_RECIPROCAL + cfg.gap_tol
        finding = forward.tau > 1e-6

        if not claims.all_pass:
            failures.append(f"{i}:claims:{_failing(claims)}")
        if not reverse_ok:
            failures.append(f"{i}:reverse_gap:{reverse.tau!r}")

        min_claim = track.see_claims(i, claims)
        track.see_gap(i, reverse.tau, p.to_json_dict())
        worst_forward = max(worst_forward, forward.tau)
        findings += int(finding)
        passed = claims.all_pass and reverse_ok
        _write_row(writer, i, _param_cells(p) + [
            forward.tau, reverse.tau, min_claim, int(finding), int(passed),
        ])
    return {"worst_forward_gap": worst_forward, "forward_findings": findings}


def _sweep_ldc(cfg: SweepConfig, rng: random.Random, writer, track: _Tracker,
               failures: List[str]) -> dict:
    for i in range(cfg.count):
        p = sample_ldc(rng, cfg.n_max, cfg.k_max)
        lemmas_ok = verify_lemmas_1_2(p)
        claims = check_ldc_claims(p)
        rank_ok = rank_independence_check(p)

        if not lemmas_ok:
            failures.append(f"{i}:lemmas12")
        if not claims.all_pass:
            failures.append(f"{i}:claims:{_failing(claims)}")
        if not rank_ok:
            failures.append(f"{i}:rank_independence")

        min_claim = track.see_claims(i, claims)
        passed = lemmas_ok and claims.all_pass and rank_ok
        _write_row(writer, i, [p.n11, p.n12, p.n21, p.n22, p.k12, p.k21,
                               int(lemmas_ok), min_claim, int(passed)])
    return {}


def _write_row(writer, index: int, cells: Sequence) -> None:
    if writer is None:
        return
    try:
        writer.writerow([index] + list(cells))
    except OSError as exc:
        raise RuntimeError(f"CSV write failed at sample {index}: {exc}") from exc


_SWEEPERS = {
    "gaussian": _sweep_gaussian,
    "reciprocity": _sweep_reciprocity,
    "ldc": _sweep_ldc,
}


def run_sweep(cfg: SweepConfig,
              csv_out: Union[None, str, Path, io.TextIOBase] = None) -> SweepSummary:
    """Draw cfg.count channels, stream one CSV row per sample, aggregate.

    csv_out may be a path or an open text stream; None skips the CSV. The
    returned summary (and the CSV) depend only on cfg, so identical configs
    rerun byte-identically.
    """
    start = time.perf_counter()
    rng = random.Random(cfg.seed)
    failures: List[str] = []
    track = _Tracker()

    own_handle = None
    writer = None
    if csv_out is not None:
        if isinstance(csv_out, (str, Path)):
            own_handle = open(csv_out, "w", encoding="utf-8", newline="")
            stream = own_handle
        else:
            stream = csv_out
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(_CSV_COLUMNS[cfg.mode])

    try:
        extras = _SWEEPERS[cfg.mode](cfg, rng, writer, track, failures)
    finally:
        if own_handle is not None:
            own_handle.close()

    return SweepSummary(
        config=cfg,
        worst_gap=track.max_gap,
        worst_gap_index=track.max_gap_index,
        worst_gap_params=track.max_gap_params,
        min_claim_slack=track.min_slack,
        min_claim_name=track.min_name,
        min_claim_index=track.min_index,
        failures=tuple(failures),
        wall_clock_s=time.perf_counter() - start,
        **extras,
    )
