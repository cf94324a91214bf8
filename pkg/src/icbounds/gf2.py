"""Dense GF(2) linear algebra on machine-integer bitsets.

Rows are Python ints; bit j of a row is the entry in column j. Matrices
are immutable and tiny here (at most six signal levels plus a few message
bits), so echelon forms are recomputed freely instead of cached. The
deterministic-channel module uses these for rank identities, decodability
of linear schemes, and randomized scheme search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

__all__ = [
    "BitMatrix",
    "identity",
    "zeros",
    "shift_matrix",
    "random_matrix",
]


@dataclass(frozen=True)
class BitMatrix:
    rows: Tuple[int, ...]
    cols: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", tuple(self.rows))
        if self.cols < 0:
            raise ValueError("negative column count")
        mask = (1 << self.cols) - 1
        for r in self.rows:
            if r < 0 or r & ~mask:
                raise ValueError("row does not fit the declared width")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.rows), self.cols)

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def xor(self, other: "BitMatrix") -> "BitMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return BitMatrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.cols)

    def mul(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.nrows:
            raise ValueError("inner dimension mismatch")
        out = []
        for r in self.rows:
            acc = 0
            while r:
                k = (r & -r).bit_length() - 1
                acc ^= other.rows[k]
                r &= r - 1
            out.append(acc)
        return BitMatrix(tuple(out), other.cols)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch")
        rows = tuple(a | (b << self.cols) for a, b in zip(self.rows, other.rows))
        return BitMatrix(rows, self.cols + other.cols)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return BitMatrix(self.rows + other.rows, self.cols)

    def take_rows(self, indices: Iterable[int]) -> "BitMatrix":
        return BitMatrix(tuple(self.rows[i] for i in indices), self.cols)

    def apply(self, x: int) -> int:
        """Matrix-vector product; bit i of the result is <row i, x>."""
        y = 0
        for i, r in enumerate(self.rows):
            y |= ((r & x).bit_count() & 1) << i
        return y

    def _pivot_table(self) -> dict:
        table: dict = {}
        for r in self.rows:
            while r:
                p = r.bit_length() - 1
                if p in table:
                    r ^= table[p]
                else:
                    table[p] = r
                    break
        return table

    def rank(self) -> int:
        return len(self._pivot_table())

    def spans(self, targets: Sequence[int]) -> bool:
        """True when every target vector lies in the row space."""
        table = self._pivot_table()
        for t in targets:
            while t:
                p = t.bit_length() - 1
                if p not in table:
                    return False
                t ^= table[p]
        return True

    def to_hex(self) -> Tuple[str, ...]:
        return tuple(format(r, "x") for r in self.rows)

    @classmethod
    def from_hex(cls, rows: Sequence[str], cols: int) -> "BitMatrix":
        return cls(tuple(int(r, 16) for r in rows), cols)


def identity(n: int) -> BitMatrix:
    return BitMatrix(tuple(1 << i for i in range(n)), n)


def zeros(nrows: int, cols: int) -> BitMatrix:
    return BitMatrix((0,) * nrows, cols)


def shift_matrix(q: int, k: int) -> BitMatrix:
    """The q x q down-shift power S^k: row i has a one in column i-k.

    Applied to a signal vector whose component 0 is the top level, S^k
    drops the bottom k levels and moves the rest down, which is exactly a
    channel that delivers only the top q-k levels.
    """
    if k < 0:
        raise ValueError("negative shift")
    return BitMatrix(tuple((1 << (i - k)) if i >= k else 0 for i in range(q)), q)


def random_matrix(rng, nrows: int, cols: int) -> BitMatrix:
    rows = tuple(rng.getrandbits(cols) if cols else 0 for _ in range(nrows))
    return BitMatrix(rows, cols)
