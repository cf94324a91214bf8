"""Exact and floating-point halfspace machinery for two-user rate regions.

This is the polyhedral core used by every bound family in the package:
named-variable inequality systems, Fourier-Motzkin elimination with
equality-pair substitution and set-preserving row pruning, redundancy
removal that keeps weakly-supporting rows, vertex enumeration of planar
regions inside the nonnegative quadrant, a per-user gap metric between an
outer and an inner region, and Minkowski shifts by a box [0, tau]^2.

Two scalar modes exist and never mix inside one system: "exact" stores
rationals (int / fractions.Fraction) and every decision is error-free;
"approx" stores IEEE-754 doubles, scalar comparisons carry a 1e-9 slack,
and 1e-6 is reserved for region containment checks in parameter sweeps.
All operations are pure functions over immutable values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

__all__ = [
    "EXACT",
    "APPROX",
    "COMPARE_EPS",
    "CONTAINMENT_EPS",
    "Scalar",
    "LinearInequality",
    "HalfspaceSystem",
    "Region2D",
    "GapReport",
    "ClaimEntry",
    "ClaimsReport",
    "fme_eliminate",
    "fme_project",
    "remove_redundant",
    "project_to_rates",
    "region_from_inequalities",
    "region_from_json_dict",
    "vertices_2d",
    "per_user_gap",
    "minkowski_shift",
    "scalar_to_json",
    "scalar_from_json",
]

EXACT = "exact"
APPROX = "approx"

# Scalar comparison slack in approx mode; containment in sweeps uses 1e-6.
COMPARE_EPS = 1e-9
CONTAINMENT_EPS = 1e-6

# Coefficients below SNAP_EPS * (row max) after a float combination are
# cancellation dust, not geometry; they are snapped to zero.
_SNAP_EPS = 1e-11
_KEY_DIGITS = 9
_EMPTY = frozenset()

Scalar = Union[int, Fraction, float]


def _check_scalar(value: Scalar, mode: str) -> Scalar:
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if mode == EXACT:
        if isinstance(value, (int, Fraction)):
            return value
        raise TypeError(f"exact mode requires int/Fraction, got {type(value).__name__}")
    if mode == APPROX:
        if isinstance(value, (int, float)):
            return float(value)
        raise TypeError(f"approx mode requires float/int, got {type(value).__name__}")
    raise ValueError(f"unknown mode {mode!r}")


def scalar_to_json(value: Scalar) -> Union[int, float, str]:
    """Exact scalars serialize as int or 'p/q'; approx scalars as float."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value)
        return f"{value.numerator}/{value.denominator}"
    return value


def scalar_from_json(value: Union[int, float, str], mode: str) -> Scalar:
    if isinstance(value, str):
        return _check_scalar(Fraction(value), mode)
    if mode == EXACT and isinstance(value, float) and value.is_integer():
        return int(value)
    return _check_scalar(value, mode)


@dataclass(frozen=True)
class LinearInequality:
    """A row ``sum coeffs[v]*v <= rhs``; the only stored sense is <=."""

    coeffs: Mapping[str, Scalar]
    rhs: Scalar
    name: str = ""

    def coeff(self, var: str) -> Scalar:
        return self.coeffs.get(var, 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearInequality):
            return NotImplemented
        mine = {k: v for k, v in self.coeffs.items() if v != 0}
        theirs = {k: v for k, v in other.coeffs.items() if v != 0}
        return mine == theirs and self.rhs == other.rhs


@dataclass(frozen=True)
class HalfspaceSystem:
    """Named-variable system of <= rows plus a set of nonnegative variables.

    The stored rows are never normalized in a way that changes the feasible
    set; ``nonneg`` membership is an additional implicit row ``-v <= 0``.
    """

    variables: Tuple[str, ...]
    inequalities: Tuple[LinearInequality, ...]
    nonneg: frozenset
    mode: str

    def __init__(
        self,
        variables: Sequence[str],
        inequalities: Iterable[LinearInequality],
        nonneg: Iterable[str] = (),
        mode: str = EXACT,
    ) -> None:
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError("duplicate variable names")
        known = set(variables)
        rows = []
        for ineq in inequalities:
            for var, c in ineq.coeffs.items():
                if var not in known:
                    raise ValueError(f"unknown variable {var!r} in inequality")
                _check_scalar(c, mode)
            _check_scalar(ineq.rhs, mode)
            rows.append(ineq)
        nonneg = frozenset(nonneg)
        if not nonneg <= known:
            raise ValueError("nonneg names a variable outside the system")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "inequalities", tuple(rows))
        object.__setattr__(self, "nonneg", nonneg)
        object.__setattr__(self, "mode", mode)

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "variables": list(self.variables),
            "nonneg": sorted(self.nonneg),
            "inequalities": [
                {
                    "coeffs": {v: scalar_to_json(c) for v, c in row.coeffs.items() if c != 0},
                    "rhs": scalar_to_json(row.rhs),
                    **({"name": row.name} if row.name else {}),
                }
                for row in self.inequalities
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "HalfspaceSystem":
        mode = data.get("mode", EXACT)
        rows = [
            LinearInequality(
                {v: scalar_from_json(c, mode) for v, c in entry["coeffs"].items()},
                scalar_from_json(entry["rhs"], mode),
                entry.get("name", ""),
            )
            for entry in data["inequalities"]
        ]
        return cls(data["variables"], rows, data.get("nonneg", ()), mode)


# ---------------------------------------------------------------------------
# Dense row machinery. Exact rows hold gcd-normalized machine integers
# (rational inputs are scaled by the lcm of their denominators, which does
# not change the halfspace); approx rows hold floats scaled to max|a| = 1.
# Each row is (coeffs, rhs, source-index set, name); the index set marks
# which declared inequality a row came from and is empty on derived rows.


class _Infeasible(Exception):
    """Raised internally when a constant row 0 <= b with b < 0 appears."""


def _exact_normalize(coeffs: Sequence, rhs) -> Tuple[Tuple[int, ...], int]:
    if any(isinstance(c, Fraction) for c in coeffs) or isinstance(rhs, Fraction):
        denoms = [Fraction(c).denominator for c in coeffs] + [Fraction(rhs).denominator]
        scale = 1
        for d in denoms:
            scale = scale // gcd(scale, d) * d
        coeffs = [int(Fraction(c) * scale) for c in coeffs]
        rhs = int(Fraction(rhs) * scale)
    else:
        coeffs = [int(c) for c in coeffs]
        rhs = int(rhs)
    g = abs(rhs)
    for c in coeffs:
        g = gcd(g, abs(c))
    if g > 1:
        coeffs = [c // g for c in coeffs]
        rhs = rhs // g
    return tuple(coeffs), rhs


def _approx_normalize(coeffs: Sequence[float], rhs: float) -> Tuple[Tuple[float, ...], float]:
    m = max(abs(c) for c in coeffs) if coeffs else 0.0
    if m <= _SNAP_EPS * max(1.0, abs(rhs)):
        return tuple(0.0 for _ in coeffs), rhs
    inv = 1.0 / m
    out = []
    for c in coeffs:
        c *= inv
        out.append(0.0 if abs(c) < _SNAP_EPS else c)
    return tuple(out), rhs * inv


def _dense_rows(system: HalfspaceSystem, extra_nonneg: Iterable[int] = ()) -> List[tuple]:
    """Rows as (coeffs, rhs, source-index set, name); extra_nonneg lists
    variable indices whose implicit -v <= 0 row must be materialized."""
    index = {v: i for i, v in enumerate(system.variables)}
    n = len(system.variables)
    rows = []
    for ineq in system.inequalities:
        vec = [0] * n
        for var, c in ineq.coeffs.items():
            vec[index[var]] = c
        if system.mode == EXACT:
            coeffs, rhs = _exact_normalize(vec, ineq.rhs)
        else:
            coeffs, rhs = _approx_normalize([float(c) for c in vec], float(ineq.rhs))
        rows.append((coeffs, rhs, frozenset([len(rows)]), ineq.name))
    base = len(rows)
    for k, j in enumerate(extra_nonneg):
        vec = [0] * n if system.mode == EXACT else [0.0] * n
        vec[j] = -1 if system.mode == EXACT else -1.0
        rows.append((tuple(vec), 0 if system.mode == EXACT else 0.0, frozenset([base + k]), ""))
    return rows


def _cleanup(rows: List[tuple], mode: str) -> List[tuple]:
    """Drop trivial constant rows, detect infeasibility, dedup parallel rows
    keeping the smallest rhs. Feasible set is preserved exactly."""
    best: Dict[tuple, tuple] = {}
    order: List[tuple] = []
    for coeffs, rhs, anc, name in rows:
        if all(c == 0 for c in coeffs):
            limit = 0 if mode == EXACT else -COMPARE_EPS
            if rhs < limit:
                raise _Infeasible
            continue
        if mode == EXACT:
            g = 0
            for c in coeffs:
                g = gcd(g, abs(c))
            key = tuple(c // g for c in coeffs)
            val = Fraction(rhs, g)
        else:
            m = max(abs(c) for c in coeffs)
            key = tuple(round(c / m, _KEY_DIGITS) for c in coeffs)
            val = rhs / m
        old = best.get(key)
        if old is None:
            best[key] = (val, coeffs, rhs, anc, name)
            order.append(key)
        elif (val, len(anc)) < (old[0], len(old[3])):
            best[key] = (val, coeffs, rhs, anc, name)
    return [(c, r, a, n) for _, c, r, a, n in (best[k] for k in order)]


def _negation_key(coeffs, rhs, mode: str):
    if mode == EXACT:
        return (tuple(-c for c in coeffs), -rhs)
    return (tuple(round(-c, _KEY_DIGITS) for c in coeffs), round(-rhs, _KEY_DIGITS))


def _row_key(coeffs, rhs, mode: str):
    if mode == EXACT:
        return (coeffs, rhs)
    return (tuple(round(c, _KEY_DIGITS) for c in coeffs), round(rhs, _KEY_DIGITS))


def _find_equality_pairs(rows: List[tuple], mode: str) -> List[Tuple[int, int]]:
    seen = {}
    pairs = []
    for i, (coeffs, rhs, _, _) in enumerate(rows):
        key = _row_key(coeffs, rhs, mode)
        neg = _negation_key(coeffs, rhs, mode)
        if neg in seen:
            pairs.append((seen[neg], i))
        elif key not in seen:
            seen[key] = i
    return pairs


def _combine(ra: tuple, rb: tuple, j: int, mode: str) -> tuple:
    """Nonnegative combination of ra (coeff > 0 at j) and rb (coeff < 0)
    cancelling variable j."""
    p = ra[0][j]
    n = -rb[0][j]
    coeffs = [n * a + p * b for a, b in zip(ra[0], rb[0])]
    rhs = n * ra[1] + p * rb[1]
    if mode == EXACT:
        coeffs, rhs = _exact_normalize(coeffs, rhs)
    else:
        coeffs, rhs = _approx_normalize(coeffs, rhs)
    return (coeffs, rhs, _EMPTY, "")


def _substitute(row: tuple, eq_le: tuple, eq_ge: tuple, j: int, mode: str) -> tuple:
    """Eliminate variable j from row using the equality pair (e<=f, -e<=-f).

    The result equals a single Fourier-Motzkin combination of row with the
    half whose sign opposes row's coefficient on j.
    """
    e, f = eq_le[0], eq_le[1]
    a_j = row[0][j]
    e_j = e[j]
    scale = e_j if e_j > 0 else -e_j
    sgn = 1 if e_j > 0 else -1
    coeffs = [scale * a - sgn * a_j * ec for a, ec in zip(row[0], e)]
    rhs = scale * row[1] - sgn * a_j * f
    if mode == EXACT:
        coeffs, rhs = _exact_normalize(coeffs, rhs)
    else:
        coeffs, rhs = _approx_normalize(coeffs, rhs)
    return (coeffs, rhs, _EMPTY, row[3])


def _eliminate_once(rows: List[tuple], j: int, mode: str) -> List[tuple]:
    """One elimination step: substitution through an equality pair when one
    mentions the variable (an exact reparametrization), otherwise the full
    positive/negative pairing. Every reduction applied here preserves the
    feasible set exactly, so any elimination order yields the same shadow.
    """
    pos, neg, zero = [], [], []
    for r in rows:
        c = r[0][j]
        if c == 0:
            zero.append(r)
        elif c > 0:
            pos.append(r)
        else:
            neg.append(r)
    if not pos or not neg:
        # Variable is unbounded on one side: rows mentioning it vanish.
        return _cleanup(zero, mode)

    for le_i, ge_i in _find_equality_pairs(pos + neg, mode):
        combined = pos + neg
        eq_le, eq_ge = combined[le_i], combined[ge_i]
        if eq_le[0][j] < 0:
            eq_le, eq_ge = eq_ge, eq_le
        out = list(zero)
        for r in pos + neg:
            if r is eq_le or r is eq_ge:
                continue
            out.append(_substitute(r, eq_le, eq_ge, j, mode))
        return _cleanup(out, mode)

    out = list(zero)
    for rp in pos:
        for rn in neg:
            out.append(_combine(rp, rn, j, mode))
    return _cleanup(out, mode)


def _dominance_prune(rows: List[tuple], nonneg_cols: frozenset, mode: str) -> List[tuple]:
    """Drop rows pointwise implied by a single other row: over x >= 0,
    a_r <= a_s componentwise and b_r >= b_s give a_r.x <= a_s.x <= b_s
    <= b_r. Requires every column nonnegative; strictness somewhere stops
    mutual drops. Rows with a single negative coefficient (variable lower
    bounds, including the materialized nonneg rows of variables awaiting
    elimination) are never dropped: the pointwise argument may be using
    exactly the nonnegativity they encode, and later elimination steps
    need them on the negative side of the pairing."""
    if len(rows) < 2:
        return rows
    n = len(rows[0][0])
    if len(nonneg_cols) != n:
        return rows
    import numpy as np

    if mode == EXACT:
        top = max(max(abs(c) for c in r[0]) for r in rows)
        top = max(top, max(abs(r[1]) for r in rows))
        if top >= 2**31:
            return rows
        a = np.array([r[0] for r in rows], dtype=np.int64)
        b = np.array([r[1] for r in rows], dtype=np.int64)
    else:
        a = np.array([r[0] for r in rows], dtype=np.float64)
        b = np.array([r[1] for r in rows], dtype=np.float64)
    m = len(rows)
    protected = ((a != 0).sum(axis=1) == 1) & (a < 0).any(axis=1)
    keep = np.ones(m, dtype=bool)
    for s in range(m):
        if not keep[s]:
            continue
        weaker = (a <= a[s]).all(axis=1) & (b >= b[s]) & keep & ~protected
        weaker[s] = False
        strict = (a < a[s]).any(axis=1) | (b > b[s])
        keep[weaker & strict] = False
    return [r for r, k in zip(rows, keep) if k]


def _choose_variable(rows: List[tuple], candidates: Sequence[int], mode: str) -> int:
    eq_cols = set()
    for le_i, ge_i in _find_equality_pairs(rows, mode):
        for j, c in enumerate(rows[le_i][0]):
            if c != 0:
                eq_cols.add(j)
    best = None
    for j in candidates:
        pos = sum(1 for r in rows if r[0][j] > 0)
        neg = sum(1 for r in rows if r[0][j] < 0)
        cost = (0, 0, j) if j in eq_cols else (1, pos * neg - pos - neg, j)
        if best is None or cost < best:
            best = cost
    return best[2]


def _infeasible_rows(n: int, mode: str) -> List[tuple]:
    zero = tuple([0] * n) if mode == EXACT else tuple([0.0] * n)
    rhs = -1 if mode == EXACT else -1.0
    return [(zero, rhs, frozenset(), "infeasible")]


def _rows_to_system(
    rows: List[tuple], variables: Tuple[str, ...], keep: Sequence[str], nonneg, mode: str
) -> HalfspaceSystem:
    keep_idx = [variables.index(v) for v in keep]
    out = []
    for coeffs, rhs, _, name in rows:
        sub = {keep[t]: coeffs[j] for t, j in enumerate(keep_idx) if coeffs[j] != 0}
        out.append(LinearInequality(sub, rhs, name))
    return HalfspaceSystem(tuple(keep), out, frozenset(nonneg) & set(keep), mode)


def fme_eliminate(system: HalfspaceSystem, var: str) -> HalfspaceSystem:
    """Project the feasible set onto the remaining variables by eliminating
    ``var`` with one Fourier-Motzkin step."""
    if var not in system.variables:
        raise ValueError(f"unknown variable {var!r}")
    j = system.variables.index(var)
    rows = _dense_rows(system, [j] if var in system.nonneg else [])
    try:
        rows = _eliminate_once(rows, j, system.mode)
    except _Infeasible:
        rows = _infeasible_rows(len(system.variables), system.mode)
    keep = tuple(v for v in system.variables if v != var)
    return _rows_to_system(rows, system.variables, keep, system.nonneg, system.mode)


def fme_project(
    system: HalfspaceSystem, keep: Sequence[str], max_rows: int = 200_000
) -> HalfspaceSystem:
    """Eliminate every variable outside ``keep`` (shadow/projection).

    Each step applies only feasible-set-preserving reductions: equality
    pairs substitute the variable away, parallel rows collapse to the
    tightest rhs, and rows pointwise implied by a single survivor are
    dropped. The projected set is therefore exact in exact mode.
    """
    keep = tuple(keep)
    for v in keep:
        if v not in system.variables:
            raise ValueError(f"unknown variable {v!r}")
    drop = [v for v in system.variables if v not in keep]
    drop_idx = {system.variables.index(v) for v in drop}
    nonneg_cols = frozenset(j for j, v in enumerate(system.variables) if v in system.nonneg)
    rows = _dense_rows(system, sorted(j for j in drop_idx if system.variables[j] in system.nonneg))
    try:
        while drop_idx:
            j = _choose_variable(rows, sorted(drop_idx), system.mode)
            drop_idx.discard(j)
            rows = _eliminate_once(rows, j, system.mode)
            if len(rows) > 48:
                rows = _dominance_prune(rows, nonneg_cols, system.mode)
            if len(rows) > max_rows:
                raise RuntimeError(f"row blowup during elimination ({len(rows)} rows)")
    except _Infeasible:
        rows = _infeasible_rows(len(system.variables), system.mode)
    return _rows_to_system(rows, system.variables, keep, system.nonneg, system.mode)


# ---------------------------------------------------------------------------
# Redundancy removal. A row is dropped only when it is strictly slack
# everywhere on the feasible set (never active); weakly-supporting rows that
# merely touch the region are kept. Parallel duplicates keep the tight rhs.


def _feasible_exact(rows: List[tuple], n: int, nonneg_cols: frozenset = frozenset()) -> bool:
    work = list(rows)
    try:
        while True:
            pending = [j for j in range(n) if any(r[0][j] != 0 for r in work)]
            if not pending:
                break
            j = _choose_variable(work, pending, EXACT)
            work = _eliminate_once(work, j, EXACT)
            if len(work) > 48:
                work = _dominance_prune(work, nonneg_cols, EXACT)
    except _Infeasible:
        return False
    return all(r[1] >= 0 or any(c != 0 for c in r[0]) for r in work)


def _feasible_approx(rows: List[tuple], n: int, nonneg_idx: set) -> bool:
    from scipy.optimize import linprog

    a_ub = [list(r[0]) for r in rows]
    b_ub = [r[1] for r in rows]
    bounds = [(0, None) if j in nonneg_idx else (None, None) for j in range(n)]
    res = linprog([0.0] * n, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status == 2:
        return False
    if res.status == 0:
        return True
    return True  # numerical trouble: keep the row rather than drop unproven


def remove_redundant(system: HalfspaceSystem) -> HalfspaceSystem:
    """Drop strictly-slack rows and parallel duplicates; keep weak supports.

    A row ``a.x <= b`` is strictly slack when the system together with
    ``a.x >= b`` is infeasible. Exact mode decides this with recursive
    integer Fourier-Motzkin; approx mode with an LP feasibility call
    allowing a 1e-9 approach slack. Infeasible systems are returned as-is
    (deduplicated), since every row is then vacuously implied.
    """
    n = len(system.variables)
    nonneg_idx = {system.variables.index(v) for v in system.nonneg}
    try:
        rows = _cleanup(_dense_rows(system, sorted(nonneg_idx)), system.mode)
    except _Infeasible:
        rows = _infeasible_rows(n, system.mode)
        return _rows_to_system(rows, system.variables, system.variables, system.nonneg, system.mode)
    declared = len(system.inequalities)
    base = [r for r in rows if min(r[2]) < declared]  # explicit rows after dedup
    implicit = [r for r in rows if min(r[2]) >= declared]

    def feasible(extra: List[tuple]) -> bool:
        if system.mode == EXACT:
            return _feasible_exact(base + implicit + extra, n, frozenset(nonneg_idx))
        return _feasible_approx(base + implicit + extra, n, nonneg_idx)

    if not feasible([]):
        return _rows_to_system(base, system.variables, system.variables, system.nonneg, system.mode)
    kept = []
    for coeffs, rhs, anc, name in base:
        if system.mode == EXACT:
            probe = (tuple(-c for c in coeffs), -rhs, frozenset(), "")
        else:
            probe = (tuple(-c for c in coeffs), -(rhs - COMPARE_EPS), frozenset(), "")
        if feasible([probe]):
            kept.append((coeffs, rhs, anc, name))
    return _rows_to_system(kept, system.variables, system.variables, system.nonneg, system.mode)


# ---------------------------------------------------------------------------
# Planar regions. Region2D is always interpreted inside the nonnegative
# quadrant; vertices are its extreme points in counter-clockwise order
# starting from the lexicographically smallest.


@dataclass(frozen=True)
class Region2D:
    inequalities: Tuple[LinearInequality, ...]
    vertices: Tuple[Tuple[Scalar, Scalar], ...]
    bounded: bool
    rays: Tuple[Tuple[Scalar, Scalar], ...]
    mode: str

    def contains(self, point: Sequence[Scalar], tol: Optional[float] = None) -> bool:
        x, y = point
        if tol is None:
            tol = 0.0 if self.mode == EXACT else COMPARE_EPS
        if x < -tol or y < -tol:
            return False
        for row in self.inequalities:
            if row.coeff("R1") * x + row.coeff("R2") * y > row.rhs + tol:
                return False
        return True

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "inequalities": [
                {
                    "a1": scalar_to_json(row.coeff("R1")),
                    "a2": scalar_to_json(row.coeff("R2")),
                    "b": scalar_to_json(row.rhs),
                    **({"name": row.name} if row.name else {}),
                }
                for row in self.inequalities
            ],
            "vertices": [[scalar_to_json(x), scalar_to_json(y)] for x, y in self.vertices],
            "bounded": self.bounded,
            "rays": [[scalar_to_json(dx), scalar_to_json(dy)] for dx, dy in self.rays],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Region2D":
        mode = data.get("mode", APPROX)
        rows = [
            (
                scalar_from_json(e["a1"], mode),
                scalar_from_json(e["a2"], mode),
                scalar_from_json(e["b"], mode),
                e.get("name", ""),
            )
            for e in data["inequalities"]
        ]
        return region_from_inequalities(rows, mode)

    def vertices_csv(self) -> str:
        lines = ["R1,R2"]
        for x, y in self.vertices:
            lines.append(f"{scalar_to_json(x)},{scalar_to_json(y)}")
        return "\n".join(lines) + "\n"


def _as_region_rows(rows: Iterable, mode: str) -> List[tuple]:
    out = []
    for row in rows:
        if isinstance(row, LinearInequality):
            extra = set(row.coeffs) - {"R1", "R2"}
            if extra:
                raise ValueError(f"region rows must use R1/R2 only, got {sorted(extra)}")
            a1, a2, b, name = row.coeff("R1"), row.coeff("R2"), row.rhs, row.name
        else:
            a1, a2, b = row[0], row[1], row[2]
            name = row[3] if len(row) > 3 else ""
        out.append(
            (
                _check_scalar(a1, mode),
                _check_scalar(a2, mode),
                _check_scalar(b, mode),
                name,
            )
        )
    return out


def _region_recession_interval(rows: List[tuple], mode: str):
    """Feasible t-interval for recession directions d = (t, 1-t), t in [0,1]."""
    lo, hi = (Fraction(0), Fraction(1)) if mode == EXACT else (0.0, 1.0)
    for a1, a2, _, _ in rows:
        c = a1 - a2
        if c > 0:
            bound = Fraction(-a2, c) if mode == EXACT else -a2 / c
            if bound < hi:
                hi = bound
        elif c < 0:
            bound = Fraction(-a2, c) if mode == EXACT else -a2 / c
            if bound > lo:
                lo = bound
        elif a2 > 0:
            return None
    eps = 0 if mode == EXACT else 1e-12
    if lo > hi + eps:
        return None
    return (lo, hi)


def _ccw_sorted(points: List[tuple], mode: str) -> List[tuple]:
    if len(points) <= 2:
        return sorted(points)
    k = len(points)
    if mode == EXACT:
        cx = sum((p[0] for p in points), Fraction(0)) / k
        cy = sum((p[1] for p in points), Fraction(0)) / k
    else:
        cx = sum(p[0] for p in points) / k
        cy = sum(p[1] for p in points) / k

    def compare(p, q):
        vx, vy = p[0] - cx, p[1] - cy
        wx, wy = q[0] - cx, q[1] - cy
        hp = 0 if (vy > 0 or (vy == 0 and vx > 0)) else 1
        hq = 0 if (wy > 0 or (wy == 0 and wx > 0)) else 1
        if hp != hq:
            return -1 if hp < hq else 1
        cross = vx * wy - vy * wx
        if cross > 0:
            return -1
        if cross < 0:
            return 1
        return -1 if p < q else (0 if p == q else 1)

    ordered = sorted(points, key=cmp_to_key(compare))
    start = ordered.index(min(ordered))
    return ordered[start:] + ordered[:start]


def region_from_inequalities(rows: Iterable, mode: str = EXACT) -> Region2D:
    """Build a reduced Region2D inside the nonnegative quadrant.

    Parallel duplicates collapse to the smallest rhs; rows that are strictly
    slack on the whole region are dropped; tangent (weakly-supporting) rows
    survive. Vertices are exact in exact mode.
    """
    raw = _as_region_rows(rows, mode)
    work = []
    infeasible = False
    for a1, a2, b, name in raw:
        if mode == EXACT:
            (c1, c2), r = _exact_normalize([a1, a2], b)
        else:
            (c1, c2), r = _approx_normalize([float(a1), float(a2)], float(b))
        if c1 == 0 and c2 == 0:
            if r < (0 if mode == EXACT else -COMPARE_EPS):
                infeasible = True
            continue
        if c1 <= 0 and c2 <= 0 and r >= 0:
            continue  # holds everywhere on the nonnegative quadrant
        work.append((c1, c2, r, name))

    # parallel dedup keeping smallest rhs
    best: Dict[tuple, tuple] = {}
    order = []
    for c1, c2, r, name in work:
        if mode == EXACT:
            g = gcd(abs(c1), abs(c2))
            key = (c1 // g, c2 // g)
            val = Fraction(r, g)
        else:
            m = max(abs(c1), abs(c2))
            key = (round(c1 / m, _KEY_DIGITS), round(c2 / m, _KEY_DIGITS))
            val = r / m
        old = best.get(key)
        if old is None:
            best[key] = (val, c1, c2, r, name)
            order.append(key)
        elif val < old[0]:
            best[key] = (val, c1, c2, r, name)
    deduped = [(c1, c2, r, name) for _, c1, c2, r, name in (best[k] for k in order)]

    if infeasible:
        kept = sorted(deduped, key=lambda t: _row_key((t[0], t[1]), t[2], mode))
        rows_out = tuple(
            LinearInequality({"R1": a1, "R2": a2}, b, name) for a1, a2, b, name in kept
        ) or (LinearInequality({}, -1 if mode == EXACT else -1.0, "infeasible"),)
        return Region2D(rows_out, (), True, (), mode)

    one = 1 if mode == EXACT else 1.0
    zero = 0 if mode == EXACT else 0.0
    axes = [(-one, zero, zero, "_axis_R1"), (zero, -one, zero, "_axis_R2")]
    full = deduped + axes

    # vertex candidates: all pairwise intersections of independent rows
    points = []
    if mode == EXACT:
        # integer rows: dedup candidates as reduced (xn, yn, den>0) triples
        # before the feasibility scan, which keeps the hot loop in int ops
        cand = set()
        for i in range(len(full)):
            a1, a2, b, _ = full[i]
            for j in range(i + 1, len(full)):
                c1, c2, d, _ = full[j]
                det = a1 * c2 - a2 * c1
                if det == 0:
                    continue
                xn = b * c2 - a2 * d
                yn = a1 * d - b * c1
                if det < 0:
                    xn, yn, det = -xn, -yn, -det
                g = gcd(abs(xn), abs(yn), det)
                cand.add((xn // g, yn // g, det // g))
        for xn, yn, den in cand:
            if all(e1 * xn + e2 * yn <= f * den for e1, e2, f, _ in full):
                points.append((Fraction(xn, den), Fraction(yn, den)))
    else:
        for i in range(len(full)):
            a1, a2, b, _ = full[i]
            for j in range(i + 1, len(full)):
                c1, c2, d, _ = full[j]
                det = a1 * c2 - a2 * c1
                scale = max(abs(a1), abs(a2)) * max(abs(c1), abs(c2))
                if abs(det) <= 1e-12 * max(scale, 1e-300):
                    continue
                x = (b * c2 - a2 * d) / det + 0.0  # +0.0 folds -0.0 into 0.0
                y = (a1 * d - b * c1) / det + 0.0
                ok = True
                for e1, e2, f, _ in full:
                    lhs = e1 * x + e2 * y
                    tol = COMPARE_EPS * max(1.0, abs(f))
                    if lhs > f + tol:
                        ok = False
                        break
                if ok:
                    points.append((x, y))

    if mode == EXACT:
        vertices = sorted(set(points))
    else:
        vertices = []
        for p in sorted(points):
            if vertices and abs(p[0] - vertices[-1][0]) <= COMPARE_EPS and abs(p[1] - vertices[-1][1]) <= COMPARE_EPS:
                continue
            vertices.append(p)

    interval = _region_recession_interval(deduped, mode) if vertices else None
    bounded = interval is None
    rays = []
    if interval is not None:
        lo, hi = interval
        rays = [(lo, (1 - lo) if mode == EXACT else 1.0 - lo)]
        if hi != lo:
            rays.append((hi, (1 - hi) if mode == EXACT else 1.0 - hi))

    kept = []
    for a1, a2, b, name in deduped:
        if vertices:
            top = max(a1 * x + a2 * y for x, y in vertices)
            tol = 0 if mode == EXACT else COMPARE_EPS * max(1.0, abs(b))
            active = top >= b - tol
        else:
            active = True  # empty region: keep rows as stored
        if not active and rays:
            gate = 0 if mode == EXACT else 1e-12
            active = any(a1 * dx + a2 * dy > gate for dx, dy in rays)
        if active:
            kept.append((a1, a2, b, name))
    kept.sort(key=lambda t: _row_key((t[0], t[1]), t[2], mode))

    vertices = _ccw_sorted(vertices, mode)
    rows_out = tuple(LinearInequality({"R1": a1, "R2": a2}, b, name) for a1, a2, b, name in kept)
    return Region2D(rows_out, tuple(vertices), bounded, tuple(rays), mode)


def region_from_json_dict(data: Mapping) -> Region2D:
    """Rebuild a region from Region2D.to_json_dict output (round-trip)."""
    mode = data.get("mode", EXACT)
    rows = [
        (
            scalar_from_json(entry["a1"], mode),
            scalar_from_json(entry["a2"], mode),
            scalar_from_json(entry["b"], mode),
            entry.get("name", ""),
        )
        for entry in data["inequalities"]
    ]
    return region_from_inequalities(rows, mode)


def project_to_rates(system: HalfspaceSystem, keep: Sequence[str] = ("R1", "R2")) -> Region2D:
    """Shadow of the system on (R1, R2), reduced, inside the quadrant."""
    if len(keep) != 2:
        raise ValueError("project_to_rates keeps exactly two variables")
    shadow = fme_project(system, keep)
    rows = []
    for ineq in shadow.inequalities:
        rows.append((ineq.coeffs.get(keep[0], 0), ineq.coeffs.get(keep[1], 0), ineq.rhs, ineq.name))
    return region_from_inequalities(rows, system.mode)


def vertices_2d(region: Region2D) -> Tuple[Tuple[Scalar, Scalar], ...]:
    """CCW extreme points; for unbounded regions these are the vertices of
    the bounded part and ``region.rays`` carries the ray markers."""
    return region.vertices


# ---------------------------------------------------------------------------
# Gap metric and Minkowski shift.


@dataclass(frozen=True)
class GapReport:
    """Smallest tau >= 0 with ((R1-tau)+, (R2-tau)+) inside the inner region
    for every outer point; the witness realizes the binding outer vertex."""

    tau: Scalar
    witness: Optional[Tuple[Scalar, Scalar]]
    converged: bool
    iterations: int
    mode: str

    def to_json_dict(self) -> dict:
        return {
            "tau": scalar_to_json(self.tau) if self.tau != math.inf else "inf",
            "witness": None
            if self.witness is None
            else [scalar_to_json(self.witness[0]), scalar_to_json(self.witness[1])],
            "converged": self.converged,
            "iterations": self.iterations,
            "mode": self.mode,
        }


def _row_tau(a1, a2, b, v1, v2, zero):
    """First tau >= 0 with a1*(v1-tau)+ + a2*(v2-tau)+ <= b (a1, a2 >= 0)."""
    f = a1 * v1 + a2 * v2
    if f <= b:
        return zero
    if b < 0:
        b = zero
    w_lo, w_hi = (v1, v2) if v1 <= v2 else (v2, v1)
    slope_tail = a2 if v1 <= v2 else a1
    tau = zero
    for end, slope in ((w_lo, a1 + a2), (w_hi, slope_tail)):
        length = end - tau
        if slope > 0:
            drop = slope * length
            if f - drop <= b:
                return tau + (f - b) / slope
            f -= drop
        tau = end
    return w_hi


def per_user_gap(outer: Region2D, inner: Region2D) -> GapReport:
    """Per-user shift needed to bring every outer point into the inner
    region. Requires every inner coefficient to be nonnegative (the inner
    region is down-closed); then the vertex test below is exactly the
    Minkowski containment outer <= inner + [0, tau]^2.
    """
    if outer.mode != inner.mode:
        raise ValueError("mode mismatch between regions")
    mode = outer.mode
    zero = Fraction(0) if mode == EXACT else 0.0
    inner_rows = []
    for row in inner.inequalities:
        a1, a2, b = row.coeff("R1"), row.coeff("R2"), row.rhs
        if a1 < 0 or a2 < 0:
            raise ValueError("per_user_gap requires a down-closed inner region")
        inner_rows.append((a1, a2, b))

    if not outer.vertices:
        return GapReport(zero, None, True, 0, mode)
    if inner.is_empty:
        return GapReport(math.inf, outer.vertices[0], False, 0, mode)
    if not outer.bounded:
        for dx, dy in outer.rays:
            gate = 0 if mode == EXACT else 1e-12
            if any(a1 * dx + a2 * dy > gate for a1, a2, _ in inner_rows):
                return GapReport(math.inf, outer.vertices[0], False, 0, mode)

    tau = zero
    witness = outer.vertices[0]
    for v1, v2 in outer.vertices:
        worst = zero
        for a1, a2, b in inner_rows:
            t = _row_tau(a1, a2, b, v1, v2, zero)
            if t > worst:
                worst = t
        if worst > tau:
            tau = worst
            witness = (v1, v2)
    return GapReport(tau, witness, True, 0, mode)


def minkowski_shift(region: Region2D, tau: Scalar) -> Region2D:
    """Shift each rhs by tau times the sum of the row's nonnegative
    coefficients: the halfspace form of region + [0, tau]^2, exact whenever
    per-user cap rows are present (every slope family used here)."""
    tau = _check_scalar(tau, region.mode)
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    zero = 0 if region.mode == EXACT else 0.0
    rows = []
    for row in region.inequalities:
        a1, a2 = row.coeff("R1"), row.coeff("R2")
        bump = (a1 if a1 > 0 else zero) + (a2 if a2 > 0 else zero)
        rows.append((a1, a2, row.rhs + tau * bump, row.name))
    return region_from_inequalities(rows, region.mode)


# ---------------------------------------------------------------------------
# Claim reporting shared by the deterministic and Gaussian check suites.


@dataclass(frozen=True)
class ClaimEntry:
    """One checked relation; slack >= -tol means pass."""

    name: str
    lhs: Scalar
    rhs: Scalar
    slack: Scalar
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": scalar_to_json(self.lhs),
            "rhs": scalar_to_json(self.rhs),
            "slack": scalar_to_json(self.slack),
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ClaimsReport:
    entries: Tuple[ClaimEntry, ...]

    @property
    def all_pass(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def min_slack(self) -> Scalar:
        return min((e.slack for e in self.entries), default=0)

    def failures(self) -> Tuple[ClaimEntry, ...]:
        return tuple(e for e in self.entries if not e.passed)

    def entry(self, name: str) -> ClaimEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_json_dict(self) -> dict:
        return {
            "all_pass": self.all_pass,
            "entries": [e.to_json_dict() for e in self.entries],
        }


def claim_ge(name: str, lhs: Scalar, rhs: Scalar, tol: float = COMPARE_EPS) -> ClaimEntry:
    """Record the inequality lhs >= rhs - tol."""
    slack = lhs - rhs
    return ClaimEntry(name, lhs, rhs, slack, slack >= -tol)


def claim_eq(name: str, lhs: Scalar, rhs: Scalar, tol: float = 0.0) -> ClaimEntry:
    slack = -abs(lhs - rhs)
    return ClaimEntry(name, lhs, rhs, slack, -slack <= tol)
