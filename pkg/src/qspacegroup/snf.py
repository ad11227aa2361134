"""Exact Smith normal form over the integers.

Two entry points: :func:`smith_normal_form` returns the unimodular transforms
(dense, meant for matrices up to a few hundred rows), while
:func:`elementary_divisors` skips the transforms and runs a sparse unit-pivot
elimination first, which is what the homology pipeline uses on the large
total complexes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntegerMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntegerMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols_t = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntegerMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols_t) for row in self.entries))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                             tuple(() for _ in range(self.cols)))


@dataclass(frozen=True)
class SnfResult:
    d: IntegerMatrix
    u: IntegerMatrix
    v: IntegerMatrix
    divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.divisors)


def _det(m: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinant(m: IntegerMatrix) -> int:
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    return _det([list(r) for r in m.entries])


def smith_normal_form(m: IntegerMatrix) -> SnfResult:
    """D = U A V with U, V unimodular and d_1 | d_2 | ... on the diagonal."""
    nr, nc = m.rows, m.cols
    a = [list(r) for r in m.entries]
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        if k:
            a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):  # col dst += k * col src
        if k:
            for row in a:
                row[dst] += k * row[src]
            for row in v:
                row[dst] += k * row[src]

    t = 0
    while t < min(nr, nc):
        # pivot: smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, nr):
            row = a[i]
            for j in range(t, nc):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if not done:
                # a smaller remainder exists in row/column t; move it to the pivot
                cands = [(abs(a[i][t]), i, t) for i in range(t + 1, nr) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t + 1, nc) if a[t][j]]
                _, i, j = min(cands)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            # divisibility of the trailing block
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1

    divisors = tuple(a[i][i] for i in range(min(nr, nc)) if a[i][i])
    return SnfResult(IntegerMatrix.from_rows(a, nc), IntegerMatrix.from_rows(u, nr),
                     IntegerMatrix.from_rows(v, nc), divisors)


def is_smith_form(d: IntegerMatrix) -> bool:
    diag = []
    for i, row in enumerate(d.entries):
        for j, x in enumerate(row):
            if i != j and x:
                return False
        if i < d.cols:
            diag.append(row[i])
    nz = [x for x in diag if x]
    if any(x < 0 for x in nz):
        return False
    if diag[:len(nz)] != nz:
        return False
    return all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))


# -- sparse fast path ------------------------------------------------------------

def _dense_divisors(rows: list[dict[int, int]]) -> list[int]:
    cols = sorted({c for r in rows for c in r})
    if not rows or not cols:
        return []
    cidx = {c: k for k, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rows]
    for i, r in enumerate(rows):
        for c, x in r.items():
            dense[i][cidx[c]] = x
    return list(smith_normal_form(IntegerMatrix.from_rows(dense, len(cols))).divisors)


def elementary_divisors(m: IntegerMatrix | Sequence[Sequence[int]] | Iterable[dict[int, int]],
                        sparse: bool = False) -> list[int]:
    """Nonzero Smith diagonal entries in divisibility order."""
    if sparse:
        rows = [dict(r) for r in m if r]
    else:
        entries = m.entries if isinstance(m, IntegerMatrix) else m
        rows = [{j: x for j, x in enumerate(r) if x} for r in entries]
        rows = [r for r in rows if r]
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    alive = set(range(len(rows)))
    n_units = 0
    while True:
        # unit pivot with the least expected fill-in
        best = None
        for i in alive:
            r = rows[i]
            for c, x in r.items():
                if x == 1 or x == -1:
                    cost = (len(r) - 1) * (len(col_rows[c]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, c)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pc = best
        prow = rows[pi]
        pv = prow[pc]
        for i in list(col_rows[pc]):
            if i == pi:
                continue
            r = rows[i]
            k = r[pc] * pv  # pv = +-1, so r[pc]/pv == r[pc]*pv
            for c, x in prow.items():
                nv = r.get(c, 0) - k * x
                if nv:
                    if c not in r:
                        col_rows[c].add(i)
                    r[c] = nv
                else:
                    if c in r:
                        del r[c]
                        col_rows[c].discard(i)
            if not r:
                alive.discard(i)
        for c in prow:
            col_rows[c].discard(pi)
        del col_rows[pc]
        rows[pi] = {}
        alive.discard(pi)
        n_units += 1
    rest = _dense_divisors([rows[i] for i in sorted(alive) if rows[i]])
    return [1] * n_units + rest


def matrix_rank(m: IntegerMatrix) -> int:
    return len(elementary_divisors(m))
