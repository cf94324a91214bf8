"""Independent reference implementations the tests compare the engine against.

textbook_project does Fourier-Motzkin the naive way: every positive row is
combined with every negative row, nothing is pruned beyond exact duplicate
removal, and all arithmetic is Fraction. It is exponential and slow but its
correctness is obvious, which is the point.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from icbounds.polytope import (
    HalfspaceSystem,
    LinearInequality,
    Region2D,
    region_from_inequalities,
)


def textbook_project(system: HalfspaceSystem,
                     keep: Sequence[str] = ("R1", "R2")) -> Region2D:
    rows = [({k: Fraction(v) for k, v in r.coeffs.items()}, Fraction(r.rhs))
            for r in system.inequalities]
    for v in system.nonneg:
        rows.append(({v: Fraction(-1)}, Fraction(0)))
    for var in system.variables:
        if var in keep:
            continue
        pos, neg, zero = [], [], []
        for coeffs, rhs in rows:
            c = coeffs.get(var, 0)
            if c > 0:
                pos.append((coeffs, rhs, c))
            elif c < 0:
                neg.append((coeffs, rhs, c))
            else:
                zero.append((coeffs, rhs))
        combined = list(zero)
        for cp, bp, ap in pos:
            for cn, bn, an in neg:
                merged = {}
                for k in set(cp) | set(cn):
                    val = cp.get(k, 0) * (-an) + cn.get(k, 0) * ap
                    if val != 0:
                        merged[k] = val
                merged.pop(var, None)
                combined.append((merged, bp * (-an) + bn * ap))
        seen, rows = set(), []
        for coeffs, rhs in combined:
            if not coeffs:
                continue  # 0 <= rhs, vacuous here (rhs >= 0 by construction)
            scale = max(abs(c) for c in coeffs.values())
            key = (tuple(sorted((k, c / scale) for k, c in coeffs.items())),
                   rhs / scale)
            if key not in seen:
                seen.add(key)
                rows.append((coeffs, rhs))
    final = [(c.get(keep[0], 0), c.get(keep[1], 0), rhs, "")
             for c, rhs in rows]
    return region_from_inequalities(final, "exact")


def random_exact_system(rng: random.Random, nvars: int, nrows: int) -> HalfspaceSystem:
    """Feasible-at-origin integer system over nonnegative variables."""
    names = ["R1", "R2"] + [f"x{i}" for i in range(nvars - 2)]
    rows = []
    for i in range(nrows):
        coeffs = {v: rng.randint(-3, 3) for v in names}
        coeffs = {k: v for k, v in coeffs.items() if v}
        if not coeffs:
            continue
        rows.append(LinearInequality(coeffs, rng.randint(0, 12), f"r{i}"))
    return HalfspaceSystem(names, rows, nonneg=names, mode="exact")


def unclipped_gap(outer: Region2D, inner: Region2D) -> float:
    """Smallest uniform rhs relaxation of inner that swallows outer.

    Equals max over inner rows of (row excess at the worst outer vertex)
    divided by the row's coefficient sum; unlike the per-user metric the
    shifted point is not floored at zero.
    """
    worst = 0.0
    for row in inner.inequalities:
        a1, a2 = row.coeff("R1"), row.coeff("R2")
        s = a1 + a2
        if s <= 0:
            continue
        excess = max(a1 * x + a2 * y - row.rhs for x, y in outer.vertices)
        if excess / s > worst:
            worst = excess / s
    return worst
