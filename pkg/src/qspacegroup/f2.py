"""GF(2) linear algebra on int bitsets.

A vector of length n is an ``int`` whose bit i is coordinate i.  An equation
``row . x = c`` is stored as the pair ``(row, c)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


def bits_to_int(bits: Iterable[int]) -> int:
    out = 0
    for i, b in enumerate(bits):
        if b & 1:
            out |= 1 << i
    return out


def int_to_bits(v: int, n: int) -> list[int]:
    return [(v >> i) & 1 for i in range(n)]


def bitstring(v: int, n: int) -> str:
    return "".join(str(b) for b in int_to_bits(v, n))


def parity(v: int) -> int:
    return bin(v).count("1") & 1


class EchelonBasis:
    """Incrementally reduced basis keyed by pivot bit (lowest set bit)."""

    def __init__(self, vectors: Iterable[int] = ()):
        self.pivots: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: int) -> int:
        while v:
            low = v & -v
            p = self.pivots.get(low.bit_length() - 1)
            if p is None:
                return v
            v ^= p
        return 0

    def reduce_fully(self, v: int) -> int:
        """Clear every pivot bit of ``v`` (canonical coset leader w.r.t. the span)."""
        for bit in sorted(self.pivots):
            if (v >> bit) & 1:
                v ^= self.pivots[bit]
        return v

    def add(self, v: int) -> bool:
        v = self.reduce(v)
        if not v:
            return False
        self.pivots[(v & -v).bit_length() - 1] = v
        return True

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def __len__(self) -> int:
        return len(self.pivots)

    def basis(self) -> list[int]:
        return [self.pivots[k] for k in sorted(self.pivots)]


def rank(vectors: Iterable[int]) -> int:
    return len(EchelonBasis(vectors))


@dataclass
class AffineSolution:
    particular: int
    kernel: list[int]
    n: int

    @property
    def dimension(self) -> int:
        return len(self.kernel)


def solve(rows: Sequence[tuple[int, int]], n: int) -> AffineSolution | None:
    """Solve the system ``row . x = c`` for all ``(row, c)``; None if infeasible."""
    # Gauss-Jordan with the constant carried in bit n.
    pivot_rows: dict[int, int] = {}
    for row, c in rows:
        v = row | ((c & 1) << n)
        for col, prow in pivot_rows.items():
            if (v >> col) & 1:
                v ^= prow
        low = v & ((1 << n) - 1)
        if not low:
            if v:
                return None
            continue
        col = (low & -low).bit_length() - 1
        for other in list(pivot_rows):
            if (pivot_rows[other] >> col) & 1:
                pivot_rows[other] ^= v
        pivot_rows[col] = v
    particular = 0
    for col, prow in pivot_rows.items():
        if (prow >> n) & 1:
            particular |= 1 << col
    free = [j for j in range(n) if j not in pivot_rows]
    kernel = []
    for j in free:
        vec = 1 << j
        for col, prow in pivot_rows.items():
            if (prow >> j) & 1:
                vec |= 1 << col
        kernel.append(vec)
    return AffineSolution(particular, kernel, n)


def in_span(v: int, vectors: Iterable[int]) -> bool:
    return v in EchelonBasis(vectors)


def express(v: int, vectors: Sequence[int]) -> list[int] | None:
    """Coefficients c with sum c_i vectors[i] == v, or None."""
    n_vec = len(vectors)
    width = max([v.bit_length()] + [w.bit_length() for w in vectors])
    # Tag each vector with its index in the high bits so the combination is tracked.
    tagged = EchelonBasis()
    for i, w in enumerate(vectors):
        tagged.add(w | (1 << (width + i)))
    r = tagged.reduce(v)
    mask = (1 << width) - 1
    if r & mask:
        return None
    combo = r >> width
    return [(combo >> i) & 1 for i in range(n_vec)]
