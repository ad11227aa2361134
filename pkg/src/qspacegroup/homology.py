"""Integer homology of wallpaper groups through the Borel construction.

H_n(G) is computed as the homology of F (x)_{ZP} C, where F is a free
ZP-resolution of Z over the point group P and C is the cellular chain complex
of the torus R^d / Z^d with the affine P-action x -> Rx + tau(R).  Cohomology
with Z2 or U(1) coefficients then follows from the universal coefficient
theorem.  Everything is exact integer arithmetic.

Conventions
-----------
* Resolutions are left ZP-modules.  In the tensor product the resolution is
  turned into a right module through g -> g^-1, so a boundary coefficient
  lambda = sum_g lambda_g g acts on cells as sum_g lambda_g rho(g^-1).
* For cyclic P with chosen generator T the odd boundaries are T - E and the
  even ones the norm element.  For pg (T = the glide) the total complex
  then has d(F1 (x) a) = Ra - a.
* Total-complex basis order: resolution degree i descending, then the
  resolution basis index, then cells in file order.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .groupcore import DATA_ENV, GroupDataError, compact_json, WallpaperGroupData, get_group
from .snf import IntegerMatrix, elementary_divisors


class ComplexError(ValueError):
    """Invalid or missing chain-complex data."""


# -- abelian groups -------------------------------------------------------------

def _prime_powers(m: int) -> list[int]:
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            q = 1
            while m % p == 0:
                m //= p
                q *= p
            out.append(q)
        p += 1
    if m > 1:
        out.append(m)
    return out


def normalize_torsion(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... (all >= 2) of a direct sum of cyclic groups."""
    by_prime: dict[int, list[int]] = {}
    for m in orders:
        m = abs(int(m))
        if m == 0:
            raise ValueError("zero is not a torsion order")
        for q in _prime_powers(m):
            p = next(k for k in range(2, q + 1) if q % k == 0)
            by_prime.setdefault(p, []).append(q)
    if not by_prime:
        return ()
    length = max(len(v) for v in by_prime.values())
    cols = [sorted(v, reverse=True) + [1] * (length - len(v)) for v in by_prime.values()]
    factors = [reduce(lambda a, b: a * b, (c[k] for c in cols), 1) for k in range(length)]
    return tuple(sorted(f for f in factors if f > 1))


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", normalize_torsion(self.torsion))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        counts: dict[int, int] = {}
        for t in self.torsion:
            counts[t] = counts.get(t, 0) + 1
        for t in sorted(counts):
            parts.append(f"Z{t}" if counts[t] == 1 else f"Z{t}^{counts[t]}")
        return " + ".join(parts) if parts else "0"

    def to_payload(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": str(self)}


@dataclass(frozen=True)
class CoefficientGroup:
    tag: str
    u1_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.tag not in ("z2", "u1"):
            raise ValueError(f"unknown coefficient tag {self.tag!r}")
        object.__setattr__(self, "torsion", normalize_torsion(self.torsion))
        if self.tag == "z2" and (self.u1_rank or any(t != 2 for t in self.torsion)):
            raise ValueError("Z2 cohomology must be 2-torsion")

    @property
    def value(self) -> AbelianGroup:
        return AbelianGroup(0, self.torsion)

    @property
    def f2_dimension(self) -> int:
        return len(self.torsion)

    def __str__(self) -> str:
        parts = []
        if self.u1_rank:
            parts.append("U(1)" if self.u1_rank == 1 else f"U(1)^{self.u1_rank}")
        tors = str(AbelianGroup(0, self.torsion))
        if tors != "0":
            parts.append(tors)
        return " + ".join(parts) if parts else "0"

    def to_payload(self) -> dict:
        return {"coeff": self.tag, "u1_rank": self.u1_rank, "torsion": list(self.torsion), "text": str(self)}


def cohomology_from_uct(h_n: AbelianGroup, h_n_minus_1: AbelianGroup, coeff: str) -> CoefficientGroup:
    """H^n(X, A) = Hom(H_n, A) + Ext(H_{n-1}, A) for A = Z2 or U(1)."""
    coeff = coeff.lower().replace("(", "").replace(")", "")
    if coeff == "z2":
        hom = h_n.free_rank + sum(1 for t in h_n.torsion if t % 2 == 0)
        ext = sum(1 for t in h_n_minus_1.torsion if t % 2 == 0)
        return CoefficientGroup("z2", 0, (2,) * (hom + ext))
    if coeff == "u1":
        # U(1) is divisible, so Ext vanishes; Hom(Z_m, U(1)) = Z_m.
        return CoefficientGroup("u1", h_n.free_rank, h_n.torsion)
    raise ValueError(f"unknown coefficient {coeff!r}")


# -- chain complexes -----------------------------------------------------------

@dataclass
class ChainComplex:
    """Ranks C_0..C_top and boundaries d_n : C_n -> C_{n-1} for 1 <= n <= top."""

    ranks: list[int]
    boundaries: dict[int, IntegerMatrix]
    truncated: bool = False
    basis: dict[int, list[str]] | None = None
    _divisors: dict = field(default_factory=dict, repr=False)

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, n: int) -> IntegerMatrix:
        if n <= 0 or n > self.top:
            rows = self.ranks[n - 1] if 0 < n <= self.top + 1 else 0
            cols = self.ranks[n] if 0 <= n <= self.top else 0
            return IntegerMatrix.zeros(rows, cols)
        return self.boundaries[n]

    def divisors(self, n: int) -> list[int]:
        if n not in self._divisors:
            self._divisors[n] = elementary_divisors(self.boundary(n))
        return self._divisors[n]

    def validate(self) -> list[str]:
        problems = []
        for n in range(1, self.top + 1):
            b = self.boundaries.get(n)
            if b is None:
                problems.append(f"missing boundary d_{n}")
                continue
            if b.shape != (self.ranks[n - 1], self.ranks[n]):
                problems.append(f"d_{n} has shape {b.shape}, expected {(self.ranks[n - 1], self.ranks[n])}")
        if problems:
            return problems
        for n in range(2, self.top + 1):
            if not _product_is_zero(self.boundaries[n - 1], self.boundaries[n]):
                problems.append(f"d_{n - 1} o d_{n} != 0")
        return problems


def _product_is_zero(a: IntegerMatrix, b: IntegerMatrix) -> bool:
    if a.rows == 0 or b.cols == 0 or a.cols == 0:
        return True
    na = np.array(a.entries, dtype=object)
    nb = np.array(b.entries, dtype=object)
    bound = int(np.abs(na).max()) * int(np.abs(nb).max()) * a.cols
    if bound < 2 ** 62:
        return not np.any(na.astype(np.int64) @ nb.astype(np.int64))
    return not np.any(na.dot(nb))


def homology(c: ChainComplex, n: int) -> AbelianGroup:
    if n < 0:
        return AbelianGroup()
    if n > c.top:
        return AbelianGroup()
    if c.truncated and n >= c.top:
        raise ComplexError(f"complex truncated at degree {c.top}; H_{n} needs d_{n + 1}")
    rank_n = len(c.divisors(n)) if n >= 1 else 0
    div_next = c.divisors(n + 1) if n + 1 <= c.top else []
    free = c.ranks[n] - rank_n - len(div_next)
    return AbelianGroup(free, tuple(d for d in div_next if d > 1))


# -- point-group helpers ---------------------------------------------------------

def _element_order(group: WallpaperGroupData, r: str) -> int:
    e = group.identity_label
    k, x = 1, r
    while x != e:
        x = group.compose(x, r)
        k += 1
    return k


def cyclic_generator(group: WallpaperGroupData) -> str | None:
    for r in group.labels:
        if _element_order(group, r) == group.order:
            return r
    return None


# -- resolutions ------------------------------------------------------------------

GroupRingElement = dict  # label -> integer coefficient


@dataclass
class Resolution:
    """Free left ZP-resolution of Z, truncated at ``max_degree``.

    ``boundaries[n][k]`` is the image of the k-th basis element of F_n, as a
    dict ``{(j, label): coeff}`` meaning sum coeff * label * e_j in F_{n-1}.
    """

    group: WallpaperGroupData
    ranks: list[int]
    boundaries: dict[int, list[dict]]
    kind: str

    @property
    def max_degree(self) -> int:
        return len(self.ranks) - 1

    def regular_matrix(self, n: int) -> IntegerMatrix:
        """d_n written over Z in the basis {g e_k}."""
        labels = self.group.labels
        idx = {r: i for i, r in enumerate(labels)}
        p = len(labels)
        if n == 0:
            return IntegerMatrix.from_rows([[1] * (p * self.ranks[0])], p * self.ranks[0])
        rows, cols = p * self.ranks[n - 1], p * self.ranks[n]
        dense = [[0] * cols for _ in range(rows)]
        for k, col in enumerate(self.boundaries[n]):
            for g in labels:
                for (j, h), coeff in col.items():
                    dense[j * p + idx[self.group.compose(g, h)]][k * p + idx[g]] += coeff
        return IntegerMatrix.from_rows(dense, cols)

    def validate(self, max_size: int = 4000) -> list[str]:
        """Exactness of ... -> F_1 -> F_0 -> Z -> 0 below the top degree."""
        p = self.group.order
        if any(r * p > max_size for r in self.ranks):
            return []
        problems = []
        mats = [self.regular_matrix(n) for n in range(self.max_degree + 1)]
        for n in range(1, self.max_degree + 1):
            if not _product_is_zero(mats[n - 1], mats[n]):
                problems.append(f"d_{n - 1} o d_{n} != 0")
        divs = [elementary_divisors(m) for m in mats]
        for n in range(self.max_degree):
            rank_in = p * self.ranks[n]
            if len(divs[n]) + len(divs[n + 1]) != rank_in:
                problems.append(f"not exact at F_{n}: rank ker != rank im")
            if any(d != 1 for d in divs[n + 1]):
                problems.append(f"not exact at F_{n}: torsion in homology")
        return problems


def build_resolution(group: WallpaperGroupData, max_degree: int, kind: str | None = None) -> Resolution:
    """Periodic resolution for cyclic P, normalized bar resolution otherwise."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    e = group.identity_label
    gen = cyclic_generator(group)
    if kind is None:
        kind = "trivial" if group.order == 1 else ("periodic" if gen else "bar")
    if kind == "trivial":
        if group.order != 1:
            raise ValueError("trivial resolution needs the trivial group")
        return Resolution(group, [1] + [0] * max_degree, {n: [] for n in range(1, max_degree + 1)}, kind)
    if kind == "periodic":
        if gen is None:
            raise ValueError(f"{group.name}: point group is not cyclic")
        odd = {(0, gen): 1, (0, e): -1}
        even = {(0, r): 1 for r in group.labels}
        bnd = {n: [dict(odd if n % 2 else even)] for n in range(1, max_degree + 1)}
        return Resolution(group, [1] * (max_degree + 1), bnd, kind)
    if kind == "bar":
        return _bar_resolution(group, max_degree)
    raise ValueError(f"unknown resolution kind {kind!r}")


def _bar_resolution(group: WallpaperGroupData, max_degree: int) -> Resolution:
    e = group.identity_label
    nonid = [r for r in group.labels if r != e]
    cells = [list(itertools.product(nonid, repeat=n)) for n in range(max_degree + 1)]
    index = [{c: i for i, c in enumerate(cs)} for cs in cells]
    bnd: dict[int, list[dict]] = {}
    for n in range(1, max_degree + 1):
        cols = []
        for cell in cells[n]:
            img: dict = {}

            def add(face, g, coeff):
                if e in face:
                    return
                key = (index[n - 1][face], g)
                img[key] = img.get(key, 0) + coeff
                if img[key] == 0:
                    del img[key]

            add(cell[1:], cell[0], 1)
            for i in range(n - 1):
                merged = cell[:i] + (group.compose(cell[i], cell[i + 1]),) + cell[i + 2:]
                add(merged, e, (-1) ** (i + 1))
            add(cell[:-1], e, (-1) ** n)
            cols.append(img)
        bnd[n] = cols
    return Resolution(group, [len(c) for c in cells], bnd, "bar")


# -- equivariant complexes -------------------------------------------------------

SignedPerm = tuple[tuple[int, int], ...]  # cell i -> sign * cell target


@dataclass
class EquivariantComplex:
    group: WallpaperGroupData
    cells: list[list[str]]
    generator_action: dict[int, dict[str, SignedPerm]]
    boundaries: dict[int, IntegerMatrix]
    orbit_euler: int | None = None
    torus: bool = True
    source: str = ""
    action: dict[int, dict[str, SignedPerm]] = field(default_factory=dict)
    action_errors: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.action:
            self.action, self.action_errors = _extend_action(self.group, self.cells, self.generator_action)

    @property
    def dimension(self) -> int:
        return len(self.cells) - 1

    @property
    def ranks(self) -> list[int]:
        return [len(c) for c in self.cells]

    def rho(self, q: int, r: str) -> list[list[int]]:
        n = len(self.cells[q])
        m = [[0] * n for _ in range(n)]
        for i, (tgt, s) in enumerate(self.action[q][r]):
            m[tgt][i] = s
        return m

    def cellular_complex(self) -> ChainComplex:
        return ChainComplex(self.ranks, {n: self.boundaries[n] for n in range(1, self.dimension + 1)},
                            basis={q: list(c) for q, c in enumerate(self.cells)})

    def to_dict(self) -> dict:
        gens = list(self.group.generators)
        degrees = []
        for q, names in enumerate(self.cells):
            doc = {
                "cells": list(names),
                "action": {g: [(t + 1) * s for t, s in self.action[q][g]] for g in gens},
            }
            if q >= 1:
                doc["boundary"] = self.boundaries[q].tolist()
            degrees.append(doc)
        out = {"group": self.group.name, "point_group": list(self.group.labels), "degrees": degrees}
        if self.orbit_euler is not None:
            out["orbit_euler"] = self.orbit_euler
        if self.source:
            out["source"] = self.source
        return out

    @classmethod
    def from_dict(cls, doc: dict, group: WallpaperGroupData | None = None) -> "EquivariantComplex":
        try:
            group = group or get_group(doc["group"])
            if "point_group" in doc and list(doc["point_group"]) != list(group.labels):
                raise ComplexError(f"point_group labels {doc['point_group']} do not match {group.name}")
            cells, gen_action, bnd = [], {}, {}
            for q, deg in enumerate(doc["degrees"]):
                names = [str(c) for c in deg["cells"]]
                cells.append(names)
                acts = {}
                for g, perm in deg.get("action", {}).items():
                    if g not in group.labels:
                        raise ComplexError(f"degrees[{q}].action: unknown element {g!r}")
                    if len(perm) != len(names):
                        raise ComplexError(f"degrees[{q}].action[{g}]: expected {len(names)} entries")
                    acts[g] = tuple((abs(int(x)) - 1, 1 if int(x) > 0 else -1) for x in perm)
                    if any(x == 0 for x in perm):
                        raise ComplexError(f"degrees[{q}].action[{g}]: entries are signed 1-based indices")
                gen_action[q] = acts
                if q >= 1:
                    rows = deg["boundary"]
                    if len(rows) != len(cells[q - 1]) or any(len(r) != len(names) for r in rows):
                        raise ComplexError(f"degrees[{q}].boundary: expected shape "
                                           f"{len(cells[q - 1])}x{len(names)}")
                    bnd[q] = IntegerMatrix.from_rows(rows, len(names))
            return cls(group, cells, gen_action, bnd, doc.get("orbit_euler"), doc.get("torus", True),
                       doc.get("source", ""))
        except KeyError as exc:
            raise ComplexError(f"missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            if isinstance(exc, (ComplexError, GroupDataError)):
                raise
            raise ComplexError(f"malformed complex document: {exc}") from None


def _compose_perm(a: SignedPerm, b: SignedPerm) -> SignedPerm:
    """rho(a) rho(b): apply b first."""
    return tuple((a[t][0], s * a[t][1]) for t, s in b)


def _extend_action(group: WallpaperGroupData, cells, gen_action) -> tuple[dict, list[str]]:
    """Action of every element from the generators, by breadth-first words."""
    e = group.identity_label
    errors = []
    gens = [g for g in group.generators]
    words = {e: []}
    frontier = [e]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                x = group.compose(g, w)
                if x not in words:
                    words[x] = [g] + words[w]
                    nxt.append(x)
        frontier = nxt
    action: dict[int, dict[str, SignedPerm]] = {}
    for q, names in enumerate(cells):
        ident = tuple((i, 1) for i in range(len(names)))
        acts = gen_action.get(q, {})
        missing = [g for g in gens if g not in acts]
        if missing and group.order > 1:
            errors.append(f"degree {q}: no action given for generators {missing}")
            action[q] = {r: ident for r in group.labels}
            continue
        full = {}
        for r in group.labels:
            p = ident
            for g in reversed(words.get(r, [])):
                p = _compose_perm(acts[g], p)
            full[r] = p
        for g, perm in acts.items():
            if g not in gens:
                full[g] = perm
        action[q] = full
    return action, errors


def _is_signed_perm(perm: SignedPerm, n: int) -> bool:
    return len(perm) == n and sorted(t for t, _ in perm) == list(range(n)) and all(s in (1, -1) for _, s in perm)


def coinvariant_euler(ec: EquivariantComplex) -> Fraction:
    """Alternating sum of dim (C_q (x) Q)_P, i.e. the rational Euler characteristic of C/P.

    Uses dim V_P = (1/|P|) sum_g tr rho(g), so cells that are mapped to
    themselves with reversed orientation are handled correctly.
    """
    total = 0
    for q in range(len(ec.cells)):
        traces = sum(s for r in ec.group.labels for i, (t, s) in enumerate(ec.action[q][r]) if t == i)
        total += (-1) ** q * traces
    return Fraction(total, ec.group.order)


def validate_equivariant_complex(ec: EquivariantComplex) -> list[str]:
    problems = list(ec.action_errors)
    group = ec.group
    for q, names in enumerate(ec.cells):
        for r, perm in ec.action[q].items():
            if not _is_signed_perm(perm, len(names)):
                problems.append(f"degree {q}: action of {r} is not a signed permutation")
    if problems:
        return problems
    e = group.identity_label
    for q, names in enumerate(ec.cells):
        ident = tuple((i, 1) for i in range(len(names)))
        if ec.action[q][e] != ident:
            problems.append(f"degree {q}: identity acts nontrivially")
        for a in group.labels:
            for b in group.labels:
                if _compose_perm(ec.action[q][a], ec.action[q][b]) != ec.action[q][group.compose(a, b)]:
                    problems.append(f"degree {q}: rho({a}) rho({b}) != rho({a}{b})")
                    break
    for q in range(1, ec.dimension + 1):
        d = ec.boundaries[q]
        if d.shape != (len(ec.cells[q - 1]), len(ec.cells[q])):
            problems.append(f"boundary d_{q} has wrong shape {d.shape}")
            continue
        for r in group.labels:
            lhs = IntegerMatrix.from_rows(ec.rho(q - 1, r), len(ec.cells[q - 1])) @ d
            rhs = d @ IntegerMatrix.from_rows(ec.rho(q, r), len(ec.cells[q]))
            if lhs != rhs:
                problems.append(f"d_{q} does not commute with the action of {r}")
    if problems:
        return problems
    cc = ec.cellular_complex()
    problems += cc.validate()
    if problems:
        return problems
    if ec.orbit_euler is not None:
        chi = coinvariant_euler(ec)
        if chi != ec.orbit_euler:
            problems.append(f"orbit Euler characteristic {chi} != expected {ec.orbit_euler}")
    if ec.torus:
        d = ec.dimension
        for q in range(d + 1):
            h = homology(cc, q)
            expected = AbelianGroup(len(list(itertools.combinations(range(d), q))))
            if h != expected:
                problems.append(f"underlying space: H_{q} = {h}, torus needs {expected}")
    return problems


# -- the Borel total complex -------------------------------------------------------

def borel_total_complex(res: Resolution, ec: EquivariantComplex, max_degree: int) -> ChainComplex:
    if res.group.labels != ec.group.labels or res.group.name != ec.group.name:
        if res.group.to_dict()["elements"] != ec.group.to_dict()["elements"]:
            raise ComplexError("resolution and complex use different point groups")
    if res.max_degree < max_degree:
        raise ComplexError(f"resolution degree {res.max_degree} < requested {max_degree}")
    group = ec.group
    inv = group.inverse_table
    dim_c = ec.dimension

    # block layout of TC_p
    def blocks(p):
        out = []
        for i in range(p, -1, -1):
            j = p - i
            if j <= dim_c and i <= res.max_degree:
                out.append((i, j))
        return out

    offsets: dict[int, dict[tuple[int, int, int], int]] = {}
    ranks, basis = [], {}
    for p in range(max_degree + 1):
        off, pos, names = {}, 0, []
        for i, j in blocks(p):
            for k in range(res.ranks[i]):
                off[i, k, j] = pos
                pos += len(ec.cells[j])
                tag = f"F{i}" if res.ranks[i] == 1 else f"F{i}[{k}]"
                names += [f"{tag}*{c}" for c in ec.cells[j]]
        offsets[p] = off
        ranks.append(pos)
        basis[p] = names

    # lambda* acting on degree-j cells, cached per coefficient dict
    def act(lam: dict, j: int) -> list[dict]:
        cols = [dict() for _ in ec.cells[j]]
        for g, coeff in lam.items():
            perm = ec.action[j][inv[g]]
            for c, (tgt, s) in enumerate(perm):
                cols[c][tgt] = cols[c].get(tgt, 0) + s * coeff
        return cols

    bnds = {}
    for p in range(1, max_degree + 1):
        rows_n = ranks[p - 1]
        cols: list[dict] = []
        for i, j in blocks(p):
            for k in range(res.ranks[i]):
                # resolution part: F_i -> F_{i-1}
                f_part = []
                if i >= 1:
                    by_row: dict[int, dict] = {}
                    for (jj, g), coeff in res.boundaries[i][k].items():
                        by_row.setdefault(jj, {})
                        by_row[jj][g] = by_row[jj].get(g, 0) + coeff
                    f_part = [(offsets[p - 1][i - 1, jj, j], act(lam, j)) for jj, lam in by_row.items()]
                c_mat = ec.boundaries[j].entries if j >= 1 else None
                sign = -1 if i % 2 else 1
                for c in range(len(ec.cells[j])):
                    col: dict[int, int] = {}
                    for base, acted in f_part:
                        for tgt, v in acted[c].items():
                            if v:
                                col[base + tgt] = col.get(base + tgt, 0) + v
                    if c_mat is not None:
                        base = offsets[p - 1][i, k, j - 1]
                        for r_i in range(len(ec.cells[j - 1])):
                            v = c_mat[r_i][c]
                            if v:
                                col[base + r_i] = col.get(base + r_i, 0) + sign * v
                    cols.append(col)
        dense = [[0] * len(cols) for _ in range(rows_n)]
        for ci, col in enumerate(cols):
            for r_i, v in col.items():
                dense[r_i][ci] = v
        bnds[p] = IntegerMatrix.from_rows(dense, len(cols))
    tc = ChainComplex(ranks, bnds, truncated=True, basis=basis)
    return tc


# -- shipped complexes and the group pipeline -----------------------------------------

def _complex_root():
    override = os.environ.get(DATA_ENV)
    if override:
        return Path(override) / "complexes"
    return resources.files("qspacegroup") / "data" / "complexes"


def shipped_complex_names() -> list[str]:
    return sorted(p.name[:-5] for p in _complex_root().iterdir() if p.name.endswith(".json"))


def load_complex_file(path: str | Path, group: WallpaperGroupData | None = None) -> EquivariantComplex:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ComplexError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return EquivariantComplex.from_dict(doc, group)


def shipped_complex(group: WallpaperGroupData) -> EquivariantComplex:
    f = _complex_root() / f"{group.name}.json"
    if not f.is_file():
        raise ComplexError(
            f"no equivariant complex available for {group.name}; supply one as a JSON file with fields "
            "{group, point_group, degrees: [{cells, action: {generator: signed 1-based permutation}, boundary}]}")
    return EquivariantComplex.from_dict(json.loads(f.read_text()), group)


_TC_CACHE: dict = {}


def total_complex_for(group: WallpaperGroupData, max_degree: int,
                      ec: EquivariantComplex | None = None) -> ChainComplex:
    key = (id(group), id(ec), max_degree)
    hit = _TC_CACHE.get(key)
    if hit is not None and hit[0] is group and hit[1] is ec:
        return hit[2]
    ec_used = ec or shipped_complex(group)
    res = build_resolution(group, max_degree)
    tc = borel_total_complex(res, ec_used, max_degree)
    _TC_CACHE[key] = (group, ec, tc)
    return tc


def group_homology(group: WallpaperGroupData, n: int, ec: EquivariantComplex | None = None) -> AbelianGroup:
    return homology(total_complex_for(group, n + 1, ec), n)


def group_cohomology(group: WallpaperGroupData, n: int, coeff: str,
                     ec: EquivariantComplex | None = None) -> CoefficientGroup:
    tc = total_complex_for(group, n + 1, ec)
    return cohomology_from_uct(homology(tc, n), homology(tc, n - 1), coeff)


def dump_complex(ec: EquivariantComplex) -> str:
    return compact_json(ec.to_dict()) + "\n"
