"""Space-group elements, shipped wallpaper-group data and exact group arithmetic.

Point-group matrices are stored in lattice coordinates (columns are the images
of the unit translation vectors), so every operation here is integer or
rational arithmetic.  The lattice-valued 2-cocycle ``omega`` is always derived
from the fractional translations and never read from a file.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterator, Sequence

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]

WALLPAPER_NAMES = (
    "p1", "p2", "pm", "pg", "cm", "pmm", "pmg", "pgg", "cmm",
    "p4", "p4m", "p4g", "p3", "p3m1", "p31m", "p6", "p6m",
)
NONSYMMORPHIC = ("pg", "pmg", "pgg", "p4g")


class GroupDataError(ValueError):
    """Raised when group data is malformed or internally inconsistent."""


# -- small exact linear algebra ------------------------------------------------

def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return tuple(tuple(sum(a[i][l] * b[l][j] for l in range(k)) for j in range(m)) for i in range(n))


def mat_vec(a: Matrix, v: Sequence) -> tuple:
    return tuple(sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a)))


def det(a: Matrix) -> int:
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return sum((-1) ** j * a[0][j] * det(tuple(row[:j] + row[j + 1:] for row in a[1:])) for j in range(n))


def identity(d: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def integer_inverse(a: Matrix) -> Matrix:
    """Inverse of a unimodular integer matrix via the adjugate."""
    d = det(a)
    if d not in (1, -1):
        raise GroupDataError(f"matrix {a} is not unimodular (det={d})")
    n = len(a)
    if n == 1:
        return ((d * 1,),)
    cof = [[(-1) ** (i + j) * det(tuple(row[:j] + row[j + 1:] for k, row in enumerate(a) if k != i))
            for j in range(n)] for i in range(n)]
    return tuple(tuple(cof[j][i] * d for j in range(n)) for i in range(n))


def _frac_mod1(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) - (Fraction(x).numerator // Fraction(x).denominator) for x in v)


# -- domain types --------------------------------------------------------------

@dataclass(frozen=True)
class PointGroupElement:
    label: str
    matrix: Matrix
    tau: tuple[Fraction, ...]

    @property
    def dimension(self) -> int:
        return len(self.matrix)


@dataclass(frozen=True)
class SpaceGroupElement:
    """The element {t|R}: lattice translation ``t`` after point operation ``r``."""

    t: Vector
    r: str


@dataclass(frozen=True)
class WallpaperGroupData:
    name: str
    dimension: int
    point_group: tuple[PointGroupElement, ...]
    generators: tuple[str, ...]
    lattice: str = ""
    notes: str = ""
    _by_label: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_label", {p.label: p for p in self.point_group})

    # lookups
    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(p.label for p in self.point_group)

    @property
    def order(self) -> int:
        return len(self.point_group)

    def element(self, label: str) -> PointGroupElement:
        try:
            return self._by_label[label]
        except KeyError:
            raise GroupDataError(f"{self.name}: unknown point-group label {label!r}") from None

    def matrix(self, label: str) -> Matrix:
        return self.element(label).matrix

    @cached_property
    def identity_label(self) -> str:
        eye = identity(self.dimension)
        for p in self.point_group:
            if p.matrix == eye:
                return p.label
        raise GroupDataError(f"{self.name}: point group has no identity")

    @cached_property
    def _matrix_index(self) -> dict:
        return {p.matrix: p.label for p in self.point_group}

    def label_of(self, matrix: Matrix) -> str:
        try:
            return self._matrix_index[matrix]
        except KeyError:
            raise GroupDataError(f"{self.name}: matrix {matrix} not in point group") from None

    @cached_property
    def mult_table(self) -> dict:
        return {(a.label, b.label): self.label_of(mat_mul(a.matrix, b.matrix))
                for a in self.point_group for b in self.point_group}

    def compose(self, r1: str, r2: str) -> str:
        return self.mult_table[r1, r2]

    @cached_property
    def inverse_table(self) -> dict:
        e = self.identity_label
        return {a: b for a in self.labels for b in self.labels if self.compose(a, b) == e}

    def inverse_label(self, r: str) -> str:
        return self.inverse_table[r]

    @cached_property
    def omega_table(self) -> dict:
        return {(a, b): omega(self, a, b) for a in self.labels for b in self.labels}

    @property
    def is_symmorphic_data(self) -> bool:
        """True when omega vanishes identically for the shipped origin choice."""
        return all(not any(w) for w in self.omega_table.values())

    def elements(self, radius: int) -> Iterator[SpaceGroupElement]:
        """All {t|R} with every |t_i| <= radius."""
        rng = range(-radius, radius + 1)
        for r in self.labels:
            for t in itertools.product(rng, repeat=self.dimension):
                yield SpaceGroupElement(t, r)

    # serialization
    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "lattice": self.lattice,
            "notes": self.notes,
            "generators": list(self.generators),
            "elements": [
                {"label": p.label, "matrix": [list(row) for row in p.matrix],
                 "tau": [str(x) for x in p.tau]}
                for p in self.point_group
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "WallpaperGroupData":
        try:
            dim = int(doc["dimension"])
            elems = []
            for i, e in enumerate(doc["elements"]):
                mat = tuple(tuple(int(x) for x in row) for row in e["matrix"])
                tau = tuple(Fraction(str(x)) for x in e["tau"])
                if len(mat) != dim or any(len(row) != dim for row in mat) or len(tau) != dim:
                    raise GroupDataError(f"elements[{i}] ({e.get('label')}): wrong dimension")
                elems.append(PointGroupElement(str(e["label"]), mat, tau))
            return cls(str(doc["name"]), dim, tuple(elems), tuple(doc.get("generators", ())),
                       doc.get("lattice", ""), doc.get("notes", ""))
        except KeyError as exc:
            raise GroupDataError(f"missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, GroupDataError):
                raise
            raise GroupDataError(f"malformed group document: {exc}") from None


# -- operations ----------------------------------------------------------------

def omega(group: WallpaperGroupData, r1: str, r2: str) -> Vector:
    """tau(R1) + R1 tau(R2) - tau(R1 R2); raises if not a lattice vector."""
    p1, p2 = group.element(r1), group.element(r2)
    p12 = group.element(group.compose(r1, r2))
    raw = [a + b - c for a, b, c in zip(p1.tau, mat_vec(p1.matrix, p2.tau), p12.tau)]
    if any(Fraction(x).denominator != 1 for x in raw):
        raise GroupDataError(f"{group.name}: omega({r1},{r2}) = {[str(x) for x in raw]} is not integral")
    return tuple(int(x) for x in raw)


def multiply(group: WallpaperGroupData, g1: SpaceGroupElement, g2: SpaceGroupElement) -> SpaceGroupElement:
    d = group.dimension
    if len(g1.t) != d or len(g2.t) != d:
        raise ValueError(f"dimension mismatch: expected {d}-vectors, got {g1.t} and {g2.t}")
    w = group.omega_table[g1.r, g2.r]
    rt2 = mat_vec(group.matrix(g1.r), g2.t)
    return SpaceGroupElement(tuple(a + b + c for a, b, c in zip(g1.t, rt2, w)), group.compose(g1.r, g2.r))


def inverse(group: WallpaperGroupData, g: SpaceGroupElement) -> SpaceGroupElement:
    """{t|R}^-1 = {-R^-1 t - R^-1 omega(R, R^-1) | R^-1}."""
    rinv = group.inverse_label(g.r)
    minv = group.matrix(rinv)
    w = group.omega_table[g.r, rinv]
    return SpaceGroupElement(tuple(-a - b for a, b in zip(mat_vec(minv, g.t), mat_vec(minv, w))), rinv)


def identity_element(group: WallpaperGroupData) -> SpaceGroupElement:
    return SpaceGroupElement((0,) * group.dimension, group.identity_label)


def validate(group: WallpaperGroupData) -> list[str]:
    """Check every invariant of the group data; an empty list means valid."""
    problems: list[str] = []
    d = group.dimension
    labels = [p.label for p in group.point_group]
    if len(set(labels)) != len(labels):
        problems.append("duplicate point-group labels")
    mats = [p.matrix for p in group.point_group]
    if len(set(mats)) != len(mats):
        problems.append("duplicate point-group matrices")
    for p in group.point_group:
        if len(p.matrix) != d or any(len(row) != d for row in p.matrix) or len(p.tau) != d:
            problems.append(f"{p.label}: wrong dimension")
            continue
        if det(p.matrix) not in (1, -1):
            problems.append(f"{p.label}: determinant {det(p.matrix)} is not +-1")
        if any(not (0 <= x < 1) for x in p.tau):
            problems.append(f"{p.label}: tau {[str(x) for x in p.tau]} outside [0,1)")
    if problems:
        return problems
    mset = set(mats)
    if identity(d) not in mset:
        problems.append("identity matrix missing")
    for a in mats:
        for b in mats:
            if mat_mul(a, b) not in mset:
                problems.append(f"not closed: {a} * {b}")
    if problems:
        return problems
    for a in mats:
        if integer_inverse(a) not in mset:
            problems.append(f"inverse of {a} missing")
    for g in group.generators:
        if g not in labels:
            problems.append(f"generator {g!r} is not a point-group label")
    if group.generators and not problems:
        span = _closure([group.matrix(g) for g in group.generators], d)
        if span != mset:
            problems.append("generators do not generate the point group")
    if problems:
        return problems
    omegas = {}
    for a in labels:
        for b in labels:
            try:
                omegas[a, b] = omega(group, a, b)
            except GroupDataError as exc:
                problems.append(str(exc))
    if problems:
        return problems
    for a in labels:
        ma = group.matrix(a)
        for b in labels:
            for c in labels:
                lhs = [x + y for x, y in zip(mat_vec(ma, omegas[b, c]), omegas[a, group.compose(b, c)])]
                rhs = [x + y for x, y in zip(omegas[a, b], omegas[group.compose(a, b), c])]
                if lhs != rhs:
                    problems.append(f"omega cocycle identity fails at ({a},{b},{c})")
    return problems


def _closure(gens: list, d: int) -> set:
    found = {identity(d)}
    frontier = list(found)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mat_mul(a, g)
                if b not in found:
                    found.add(b)
                    nxt.append(b)
        frontier = nxt
    return found


def shift_origin(group: WallpaperGroupData, shift: Sequence[Fraction]) -> WallpaperGroupData:
    """Re-express the group with the origin moved by ``shift``.

    Conjugating x -> Rx + tau by x -> x + s gives tau' = tau + R s - s (mod 1).
    """
    s = [Fraction(x) for x in shift]
    elems = []
    for p in group.point_group:
        rs = mat_vec(p.matrix, s)
        elems.append(PointGroupElement(p.label, p.matrix,
                                       _frac_mod1([t + a - b for t, a, b in zip(p.tau, rs, s)])))
    return WallpaperGroupData(group.name, group.dimension, tuple(elems), group.generators,
                              group.lattice, f"origin shifted by {[str(x) for x in s]}")


# -- shipped database ----------------------------------------------------------

DATA_ENV = "QSPACEGROUP_DATA"


def _data_root():
    """Directory of group files; ``$QSPACEGROUP_DATA/groups`` overrides the shipped one."""
    override = os.environ.get(DATA_ENV)
    if override:
        return Path(override) / "groups"
    return resources.files("qspacegroup") / "data" / "groups"


def load_group_file(path: str | Path) -> WallpaperGroupData:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise GroupDataError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return WallpaperGroupData.from_dict(doc)


_CACHE: dict[str, WallpaperGroupData] = {}


def get_group(name: str) -> WallpaperGroupData:
    if name not in WALLPAPER_NAMES:
        raise GroupDataError(f"unknown group {name!r}; known: {', '.join(WALLPAPER_NAMES)}")
    if name not in _CACHE:
        doc = json.loads((_data_root() / f"{name}.json").read_text())
        _CACHE[name] = WallpaperGroupData.from_dict(doc)
    return _CACHE[name]


def all_groups() -> list[WallpaperGroupData]:
    return [get_group(n) for n in WALLPAPER_NAMES]


def compact_json(obj, level: int = 0) -> str:
    """Indented JSON that keeps flat lists of scalars on one line."""
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(obj, dict):
        items = [f"{inner}{json.dumps(k)}: {compact_json(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}" if items else "{}"
    if isinstance(obj, (list, tuple)) and any(isinstance(x, (list, tuple, dict)) for x in obj):
        items = [inner + compact_json(v, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj)


def dump_group(group: WallpaperGroupData) -> str:
    return compact_json(group.to_dict()) + "\n"
