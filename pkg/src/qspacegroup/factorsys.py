"""Z2 factor systems of wallpaper groups in decomposed form.

A factor system is stored through its F2 exponents:

* sigma(t1, t2) = (-1)^(sum_{i>j} A_ij t1_i t2_j), A strictly lower triangular;
* g(t, R) = (-1)^(f_R(t)) with
  f_R(t) = sum_{i>j} B_R[i][j] t_i t_j + sum_i B_R[i][i] binom(t_i, 2) + q_R . t;
* alpha(R1, R2) one bit per ordered pair.

The diagonal of B_R multiplies binom(t_i, 2) rather than t_i^2 (which would
duplicate the linear part mod 2).  It is needed whenever a point operation
turns the flux form into one whose symmetric part has a nonzero diagonal,
which happens on the hexagonal lattice.

All consistency and equivalence conditions are linear over F2 in these bits,
so classification is Gaussian elimination plus a quotient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import f2
from .groupcore import (
    SpaceGroupElement,
    WallpaperGroupData,
    integer_inverse,
    mat_vec,
    multiply,
    transpose,
)


def binom2(x: int) -> int:
    return x * (x - 1) // 2


class InconsistentFactorSystem(ValueError):
    pass


# -- unknown layout ------------------------------------------------------------

class Layout:
    """Bit positions of every unknown, ordered A, then b, then q, then alpha."""

    def __init__(self, group: WallpaperGroupData):
        self.group = group
        d = group.dimension
        self.d = d
        labels = group.labels
        pos = 0
        self.a_index: dict[tuple[int, int], int] = {}
        for i in range(d):
            for j in range(i):
                self.a_index[i, j] = pos
                pos += 1
        self.b_index: dict[tuple[str, int, int], int] = {}
        for r in labels:
            for i in range(d):
                for j in range(i + 1):
                    self.b_index[r, i, j] = pos
                    pos += 1
        self.q_index: dict[tuple[str, int], int] = {}
        for r in labels:
            for i in range(d):
                self.q_index[r, i] = pos
                pos += 1
        self.alpha_index: dict[tuple[str, str], int] = {}
        for r1 in labels:
            for r2 in labels:
                self.alpha_index[r1, r2] = pos
                pos += 1
        self.n = pos

    def names(self) -> list[str]:
        out = [""] * self.n
        for (i, j), p in self.a_index.items():
            out[p] = f"A[{i}][{j}]"
        for (r, i, j), p in self.b_index.items():
            out[p] = f"b[{r}][{i}][{j}]"
        for (r, i), p in self.q_index.items():
            out[p] = f"q[{r}][{i}]"
        for (r1, r2), p in self.alpha_index.items():
            out[p] = f"alpha[{r1},{r2}]"
        return out

    @cached_property
    def a_mask(self) -> int:
        return sum(1 << p for p in self.a_index.values())

    @cached_property
    def g_mask(self) -> int:
        return sum(1 << p for p in self.b_index.values()) | sum(1 << p for p in self.q_index.values())

    @cached_property
    def alpha_mask(self) -> int:
        return sum(1 << p for p in self.alpha_index.values())

    # linear forms: bitsets over unknowns whose parity against x gives the exponent
    def sigma_form(self, t1: Sequence[int], t2: Sequence[int]) -> int:
        out = 0
        for (i, j), p in self.a_index.items():
            if (t1[i] * t2[j]) & 1:
                out ^= 1 << p
        return out

    def g_form(self, t: Sequence[int], r: str) -> int:
        out = 0
        for i in range(self.d):
            for j in range(i + 1):
                c = binom2(t[i]) if i == j else t[i] * t[j]
                if c & 1:
                    out ^= 1 << self.b_index[r, i, j]
            if t[i] & 1:
                out ^= 1 << self.q_index[r, i]
        return out

    def alpha_form(self, r1: str, r2: str) -> int:
        return 1 << self.alpha_index[r1, r2]

    def nu_form(self, g1: SpaceGroupElement, g2: SpaceGroupElement) -> int:
        grp = self.group
        rt2 = mat_vec(grp.matrix(g1.r), g2.t)
        w = grp.omega_table[g1.r, g2.r]
        s = tuple(a + b for a, b in zip(g1.t, rt2))
        return (self.sigma_form(g1.t, rt2) ^ self.sigma_form(s, w)
                ^ self.g_form(rt2, g1.r) ^ self.alpha_form(g1.r, g2.r))


# -- domain types ----------------------------------------------------------------

@dataclass(frozen=True)
class TranslationFactor:
    a_matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for i, row in enumerate(self.a_matrix):
            for j, x in enumerate(row):
                if x not in (0, 1):
                    raise ValueError("A entries must be 0/1")
                if j >= i and x:
                    raise ValueError("A must be strictly lower triangular")

    @classmethod
    def flux(cls, s: int, d: int = 2) -> "TranslationFactor":
        """d = 2 factor with flux bit ``s`` through the unit cell."""
        rows = [[0] * d for _ in range(d)]
        if d >= 2:
            rows[1][0] = s & 1
        return cls(tuple(tuple(r) for r in rows))

    @property
    def dimension(self) -> int:
        return len(self.a_matrix)

    def exponent(self, t1: Sequence[int], t2: Sequence[int]) -> int:
        return sum(t1[i] * self.a_matrix[i][j] * t2[j]
                   for i in range(self.dimension) for j in range(i)) & 1

    def __call__(self, t1, t2) -> int:
        return -1 if self.exponent(t1, t2) else 1


@dataclass(frozen=True)
class GFactor:
    b_form: dict
    q_vec: dict

    def exponent(self, t: Sequence[int], r: str) -> int:
        b, q = self.b_form[r], self.q_vec[r]
        d = len(q)
        val = sum(q[i] * t[i] for i in range(d))
        for i in range(d):
            for j in range(i):
                val += b[i][j] * t[i] * t[j]
            val += b[i][i] * binom2(t[i])
        return val & 1


@dataclass(frozen=True)
class AlphaFactor:
    table: dict

    def __call__(self, r1: str, r2: str) -> int:
        return -1 if self.table[r1, r2] else 1


@dataclass(frozen=True)
class FactorSystem:
    group: WallpaperGroupData
    sigma: TranslationFactor
    g: GFactor
    alpha: AlphaFactor
    vector: int = field(default=0, compare=False)

    @property
    def layout(self) -> Layout:
        return layout_for(self.group)

    def to_payload(self) -> dict:
        lay = self.layout
        d = self.group.dimension
        return {
            "sigma_bits": f2.bitstring(self.vector & lay.a_mask, lay.n)[:len(lay.a_index)],
            "g": {r: {"b": "".join(str(self.g.b_form[r][i][j]) for i in range(d) for j in range(i + 1)),
                      "q": "".join(str(x) for x in self.g.q_vec[r])}
                  for r in self.group.labels},
            "alpha_bits": "".join(str(self.alpha.table[a, b]) for a in self.group.labels for b in self.group.labels),
        }


_LAYOUTS: dict[int, Layout] = {}


def layout_for(group: WallpaperGroupData) -> Layout:
    key = id(group)
    lay = _LAYOUTS.get(key)
    if lay is None or lay.group is not group:
        lay = _LAYOUTS[key] = Layout(group)
    return lay


def from_vector(group: WallpaperGroupData, x: int, check: bool = True) -> FactorSystem:
    lay = layout_for(group)
    d = group.dimension
    a = tuple(tuple((x >> lay.a_index[i, j]) & 1 if j < i else 0 for j in range(d)) for i in range(d))
    b = {r: tuple(tuple((x >> lay.b_index[r, i, j]) & 1 if j <= i else 0 for j in range(d)) for i in range(d))
         for r in group.labels}
    q = {r: tuple((x >> lay.q_index[r, i]) & 1 for i in range(d)) for r in group.labels}
    al = {k: (x >> p) & 1 for k, p in lay.alpha_index.items()}
    fs = FactorSystem(group, TranslationFactor(a), GFactor(b, q), AlphaFactor(al), x)
    if check:
        bad = consistency_violations(group, x)
        if bad:
            raise InconsistentFactorSystem(f"{group.name}: {len(bad)} consistency equations violated, "
                                           f"first: {bad[0]}")
    return fs


def to_vector(group: WallpaperGroupData, a_matrix, b_form: dict, q_vec: dict, alpha: dict) -> int:
    lay = layout_for(group)
    x = 0
    for (i, j), p in lay.a_index.items():
        x |= (a_matrix[i][j] & 1) << p
    for (r, i, j), p in lay.b_index.items():
        x |= (b_form[r][i][j] & 1) << p
    for (r, i), p in lay.q_index.items():
        x |= (q_vec[r][i] & 1) << p
    for k, p in lay.alpha_index.items():
        x |= (alpha.get(k, 0) & 1) << p
    return x


def make_factor_system(group: WallpaperGroupData, a_matrix=None, b_form=None, q_vec=None,
                       alpha=None, check: bool = True) -> FactorSystem:
    """Assemble from components; omitted components are trivial."""
    d = group.dimension
    zero_b = tuple(tuple(0 for _ in range(d)) for _ in range(d))
    a_matrix = a_matrix or zero_b
    b_form = {r: (b_form or {}).get(r, zero_b) for r in group.labels}
    q_vec = {r: tuple((q_vec or {}).get(r, (0,) * d)) for r in group.labels}
    return from_vector(group, to_vector(group, a_matrix, b_form, q_vec, alpha or {}), check=check)


def trivial_factor_system(group: WallpaperGroupData) -> FactorSystem:
    return from_vector(group, 0)


# -- the linear system -----------------------------------------------------------

@dataclass
class F2AffineSystem:
    group: WallpaperGroupData
    labels: list[str]
    rows: list[tuple[int, int]]
    origins: list[str]

    @property
    def n_unknowns(self) -> int:
        return len(self.labels)

    def with_constraint(self, row: int, value: int, origin: str = "constraint") -> "F2AffineSystem":
        return F2AffineSystem(self.group, self.labels, self.rows + [(row, value & 1)],
                              self.origins + [origin])

    def pin_flux(self, s: int) -> "F2AffineSystem":
        lay = layout_for(self.group)
        out = self
        for (i, j), p in lay.a_index.items():
            out = out.with_constraint(1 << p, s, f"pin A[{i}][{j}]={s}")
        return out


def spanning_translations(d: int) -> list[tuple[int, ...]]:
    """Points at which a function in the quadratic class is pinned down."""
    pts = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        pts.append(tuple(e))
        e[i] = 2
        pts.append(tuple(e))
    for i, j in itertools.combinations(range(d), 2):
        e = [0] * d
        e[i] = e[j] = 1
        pts.append(tuple(e))
    return pts


def assemble_consistency_system(group: WallpaperGroupData) -> F2AffineSystem:
    lay = layout_for(group)
    d = group.dimension
    labels = group.labels
    e = group.identity_label
    basis = [tuple(int(i == k) for k in range(d)) for i in range(d)]
    rows: list[tuple[int, int]] = []
    origins: list[str] = []

    def add(form: int, origin: str):
        if form:
            rows.append((form, 0))
            origins.append(origin)

    inv = {r: integer_inverse(group.matrix(r)) for r in labels}

    # flux compatibility: sigma(R^-1 t1, R^-1 t2) / sigma(t1, t2) = second difference of g(., R)
    for r in labels:
        for t1 in basis:
            for t2 in basis:
                s12 = tuple(a + b for a, b in zip(t1, t2))
                form = (lay.sigma_form(mat_vec(inv[r], t1), mat_vec(inv[r], t2)) ^ lay.sigma_form(t1, t2)
                        ^ lay.g_form(s12, r) ^ lay.g_form(t1, r) ^ lay.g_form(t2, r))
                add(form, f"flux[{r}]{t1}{t2}")

    # twisted covariance of g
    span = spanning_translations(d)
    for r1 in labels:
        for r2 in labels:
            r12 = group.compose(r1, r2)
            w = group.omega_table[r1, r2]
            for t in span:
                form = (lay.g_form(t, r12) ^ lay.g_form(t, r1) ^ lay.g_form(mat_vec(inv[r1], t), r2)
                        ^ lay.sigma_form(w, t) ^ lay.sigma_form(t, w))
                add(form, f"covariance[{r1},{r2}]{t}")

    # inhomogeneous 2-cocycle equation for alpha
    om = group.omega_table
    for r1 in labels:
        m1 = group.matrix(r1)
        for r2 in labels:
            r12 = group.compose(r1, r2)
            for r3 in labels:
                r23 = group.compose(r2, r3)
                rw = mat_vec(m1, om[r2, r3])
                form = (lay.alpha_form(r1, r2) ^ lay.alpha_form(r12, r3) ^ lay.alpha_form(r1, r23)
                        ^ lay.alpha_form(r2, r3) ^ lay.g_form(rw, r1)
                        ^ lay.sigma_form(rw, om[r1, r23]) ^ lay.sigma_form(om[r1, r2], om[r12, r3]))
                add(form, f"alpha[{r1},{r2},{r3}]")

    # normalization: alpha(E,R) = alpha(R,E) = 0, g(t,E) = 1
    for r in labels:
        rows.append((lay.alpha_form(e, r), 0))
        origins.append(f"normalize alpha[{e},{r}]")
        if r != e:
            rows.append((lay.alpha_form(r, e), 0))
            origins.append(f"normalize alpha[{r},{e}]")
    for i in range(d):
        for j in range(i + 1):
            rows.append((1 << lay.b_index[e, i, j], 0))
            origins.append(f"normalize b[{e}]")
        rows.append((1 << lay.q_index[e, i], 0))
        origins.append(f"normalize q[{e}]")

    return F2AffineSystem(group, lay.names(), rows, origins)


def solve(system: F2AffineSystem) -> f2.AffineSolution | None:
    return f2.solve(system.rows, system.n_unknowns)


def consistency_violations(group: WallpaperGroupData, x: int) -> list[str]:
    system = _system_cache(group)
    return [o for (row, c), o in zip(system.rows, system.origins) if f2.parity(row & x) != c]


_SYSTEMS: dict[int, tuple[WallpaperGroupData, F2AffineSystem]] = {}


def _system_cache(group: WallpaperGroupData) -> F2AffineSystem:
    hit = _SYSTEMS.get(id(group))
    if hit is None or hit[0] is not group:
        hit = _SYSTEMS[id(group)] = (group, assemble_consistency_system(group))
    return hit[1]


# -- coboundaries ----------------------------------------------------------------

def psi_coboundary(group: WallpaperGroupData, kappa: Sequence[int]) -> int:
    """Image of psi(t) = (-1)^(kappa . t); leaves sigma untouched."""
    lay = layout_for(group)
    d = group.dimension
    x = 0
    for r in group.labels:
        minv_t = transpose(integer_inverse(group.matrix(r)))
        dq = [(a + b) & 1 for a, b in zip(mat_vec(minv_t, kappa), kappa)]
        for i in range(d):
            if dq[i]:
                x ^= 1 << lay.q_index[r, i]
    for (r1, r2), p in lay.alpha_index.items():
        if sum(k * w for k, w in zip(kappa, group.omega_table[r1, r2])) & 1:
            x ^= 1 << p
    return x


def phi_coboundary(group: WallpaperGroupData, phi: dict) -> int:
    """Image of phi: P -> F2 with phi(E) = 0 acting on alpha."""
    lay = layout_for(group)
    x = 0
    for (r1, r2), p in lay.alpha_index.items():
        if (phi.get(group.compose(r1, r2), 0) + phi.get(r1, 0) + phi.get(r2, 0)) & 1:
            x ^= 1 << p
    return x


def coboundary_space(group: WallpaperGroupData) -> list[int]:
    """Generators: one psi per unit kappa, one phi per non-identity element."""
    d = group.dimension
    out = []
    for i in range(d):
        out.append(psi_coboundary(group, [int(i == k) for k in range(d)]))
    for r in group.labels:
        if r != group.identity_label:
            out.append(phi_coboundary(group, {r: 1}))
    return out


# -- evaluation --------------------------------------------------------------------

def nu_exponent(fs: FactorSystem, g1: SpaceGroupElement, g2: SpaceGroupElement) -> int:
    grp = fs.group
    rt2 = mat_vec(grp.matrix(g1.r), g2.t)
    w = grp.omega_table[g1.r, g2.r]
    s = tuple(a + b for a, b in zip(g1.t, rt2))
    return (fs.sigma.exponent(g1.t, rt2) + fs.sigma.exponent(s, w)
            + fs.g.exponent(rt2, g1.r) + fs.alpha.table[g1.r, g2.r]) & 1


def evaluate(fs: FactorSystem, g1: SpaceGroupElement, g2: SpaceGroupElement) -> int:
    return -1 if nu_exponent(fs, g1, g2) else 1


def wilson_loop(sigma: TranslationFactor, t1: Sequence[int], t2: Sequence[int]) -> int:
    if len(t1) != sigma.dimension or len(t2) != sigma.dimension:
        raise ValueError("dimension mismatch")
    return -1 if (sigma.exponent(t1, t2) + sigma.exponent(t2, t1)) & 1 else 1


@dataclass
class CocycleReport:
    radius: int
    checked: int
    violation: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None


def _nu_arrays(group: WallpaperGroupData, xs: Sequence[int]):
    """Component arrays for vectorized evaluation of several factor systems at once."""
    lay = layout_for(group)
    d = group.dimension
    labels = group.labels
    nb = len(xs)
    bits = lambda x, p: (x >> p) & 1
    a = np.zeros((nb, d, d), dtype=np.int64)
    b = np.zeros((nb, len(labels), d, d), dtype=np.int64)
    q = np.zeros((nb, len(labels), d), dtype=np.int64)
    al = np.zeros((nb, len(labels), len(labels)), dtype=np.int64)
    for k, x in enumerate(xs):
        for (i, j), p in lay.a_index.items():
            a[k, i, j] = bits(x, p)
        for (r, i, j), p in lay.b_index.items():
            b[k, labels.index(r), i, j] = bits(x, p)
        for (r, i), p in lay.q_index.items():
            q[k, labels.index(r), i] = bits(x, p)
        for (r1, r2), p in lay.alpha_index.items():
            al[k, labels.index(r1), labels.index(r2)] = bits(x, p)
    return a, b, q, al


def _vec_sigma(a, t1, t2):
    # a: (nb,d,d); t1,t2: (N,d) -> (nb,N)
    return (np.matmul(t1, a) * t2).sum(axis=-1) & 1


def _vec_g(b, q, t, ri):
    # b: (nb,P,d,d), q: (nb,P,d), t: (N,d), ri: int
    bb, qq = b[:, ri], q[:, ri]
    d = t.shape[1]
    lower = np.tril(np.ones((d, d), dtype=np.int64), -1)
    val = (np.matmul(t, bb * lower) * t).sum(axis=-1)
    diag = np.einsum("kii->ki", bb)
    val = val + diag @ ((t * (t - 1)) // 2).T
    val = val + qq @ t.T
    return val & 1


def check_cocycles(group: WallpaperGroupData, xs: Sequence[int], radius: int = 2) -> list[CocycleReport]:
    """Exhaustive 2-cocycle check of each bit vector in ``xs`` at the given radius."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    xs = list(xs)
    if not xs:
        return []
    labels = group.labels
    d = group.dimension
    n_p = len(labels)
    a, b, q, al = _nu_arrays(group, xs)
    mats = [np.array(group.matrix(r), dtype=np.int64) for r in labels]
    om = {(i, j): np.array(group.omega_table[labels[i], labels[j]], dtype=np.int64)
          for i in range(n_p) for j in range(n_p)}
    comp = {(i, j): labels.index(group.compose(labels[i], labels[j])) for i in range(n_p) for j in range(n_p)}
    rng = range(-radius, radius + 1)
    ts = np.array(list(itertools.product(rng, repeat=d)), dtype=np.int64)
    m = len(ts)
    i1, i2, i3 = np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij")
    t1, t2, t3 = ts[i1.ravel()], ts[i2.ravel()], ts[i3.ravel()]
    violations: list = [None] * len(xs)

    def nu(ta, ria, tb, rib):
        rtb = tb @ mats[ria].T
        w = om[ria, rib]
        s = ta + rtb
        return (_vec_sigma(a, ta, rtb) + _vec_sigma(a, s, np.broadcast_to(w, s.shape))
                + _vec_g(b, q, rtb, ria) + al[:, ria, rib][:, None]) & 1

    def prod(ta, ria, tb, rib):
        return ta + tb @ mats[ria].T + om[ria, rib], comp[ria, rib]

    right = {(r2, r3): nu(t2, r2, t3, r3) for r2 in range(n_p) for r3 in range(n_p)}
    for r1 in range(n_p):
        for r2 in range(n_p):
            t12, r12 = prod(t1, r1, t2, r2)
            left_a = nu(t1, r1, t2, r2)
            for r3 in range(n_p):
                t23, r23 = prod(t2, r2, t3, r3)
                defect = (left_a + nu(t12, r12, t3, r3) + nu(t1, r1, t23, r23) + right[r2, r3]) & 1
                for k in np.nonzero(defect.any(axis=1))[0]:
                    if violations[k] is None:
                        idx = int(np.nonzero(defect[k])[0][0])
                        violations[k] = (
                            SpaceGroupElement(tuple(int(v) for v in t1[idx]), labels[r1]),
                            SpaceGroupElement(tuple(int(v) for v in t2[idx]), labels[r2]),
                            SpaceGroupElement(tuple(int(v) for v in t3[idx]), labels[r3]),
                        )
    checked = (m * n_p) ** 3
    return [CocycleReport(radius, checked, v) for v in violations]


def check_cocycle(fs: FactorSystem, radius: int = 2) -> CocycleReport:
    return check_cocycles(fs.group, [fs.vector], radius)[0]


def check_cocycle_scalar(fs: FactorSystem, radius: int = 1) -> CocycleReport:
    """Direct element-by-element version; slow, kept as an independent cross-check."""
    grp = fs.group
    elems = list(grp.elements(radius))
    count = 0
    for g1 in elems:
        for g2 in elems:
            g12 = multiply(grp, g1, g2)
            n12 = nu_exponent(fs, g1, g2)
            for g3 in elems:
                count += 1
                lhs = n12 + nu_exponent(fs, g12, g3)
                rhs = nu_exponent(fs, g1, multiply(grp, g2, g3)) + nu_exponent(fs, g2, g3)
                if (lhs + rhs) & 1:
                    return CocycleReport(radius, count, (g1, g2, g3))
    return CocycleReport(radius, count)


# -- classification ----------------------------------------------------------------

@dataclass
class ClassificationResult:
    group: str
    h2_dimension: int
    representatives: list[FactorSystem]
    solution_dimension: int
    coboundary_dimension: int
    g_dimension: int
    flux_allowed: bool

    def to_payload(self, with_representatives: bool = True) -> dict:
        out = {
            "group": self.group,
            "coeff": "z2",
            "dimension": self.h2_dimension,
            "solution_dimension": self.solution_dimension,
            "coboundary_dimension": self.coboundary_dimension,
            "g_dimension": self.g_dimension,
            "flux_allowed": self.flux_allowed,
        }
        if with_representatives:
            out["representatives"] = [fs.to_payload() for fs in self.representatives]
        return out


def solution_kernel(group: WallpaperGroupData) -> list[int]:
    sol = solve(_system_cache(group))
    if sol is None:
        raise InconsistentFactorSystem(f"{group.name}: consistency system infeasible")
    return sol.kernel


def classify(group: WallpaperGroupData, representatives: bool = True, verify: bool = True) -> ClassificationResult:
    kernel = solution_kernel(group)
    cob = f2.EchelonBasis(coboundary_space(group))
    kern_span = f2.EchelonBasis(kernel)
    for v in cob.basis():
        if v not in kern_span:
            raise AssertionError(f"{group.name}: coboundary outside solution kernel")
    # complement of the coboundaries inside the kernel
    ext = f2.EchelonBasis(cob.basis())
    complement = [v for v in kernel if ext.add(v)]
    h2 = len(complement)
    lay = layout_for(group)
    g_dim = f2.rank(v & lay.g_mask for v in kernel)
    flux_allowed = any(v & lay.a_mask for v in kernel)
    reps: list[FactorSystem] = []
    if representatives:
        leaders = set()
        for coeffs in itertools.product((0, 1), repeat=h2):
            x = 0
            for c, v in zip(coeffs, complement):
                if c:
                    x ^= v
            leaders.add(cob.reduce_fully(x))
        ordered = sorted(leaders, key=lambda v: f2.bitstring(v, lay.n))
        reps = [from_vector(group, x) for x in ordered]
        if verify:
            # the exponent of nu is linear in the unknowns, so checking a basis of
            # the span of all representatives covers every one of them
            basis = complement + cob.basis()
            for rep in check_cocycles(group, basis, radius=1):
                if not rep.ok:
                    raise AssertionError(f"{group.name}: representative fails cocycle check at {rep.violation}")
    return ClassificationResult(group.name, h2, reps, len(kernel), len(cob), g_dim, flux_allowed)


# -- equivalence -------------------------------------------------------------------

@dataclass
class EquivalenceWitness:
    kappa: tuple[int, ...]
    phi: dict


def _phi_basis(group: WallpaperGroupData) -> tuple[list[str], list[int]]:
    labels = [r for r in group.labels if r != group.identity_label]
    return labels, [phi_coboundary(group, {r: 1}) for r in labels]


def are_equivalent(fs1: FactorSystem, fs2: FactorSystem) -> tuple[bool, EquivalenceWitness | None]:
    """Decide gauge equivalence: flux, then psi = (-1)^(kappa.t) matching g, then phi matching alpha."""
    if fs1.group is not fs2.group and fs1.group.to_dict() != fs2.group.to_dict():
        raise ValueError("factor systems belong to different groups")
    group = fs1.group
    lay = layout_for(group)
    d = group.dimension
    # Wilson loops on the basis pairs fix the canonical flux data.
    basis = [tuple(int(i == k) for k in range(d)) for i in range(d)]
    for t1, t2 in itertools.combinations(basis, 2):
        if wilson_loop(fs1.sigma, t1, t2) != wilson_loop(fs2.sigma, t1, t2):
            return False, None
    diff = fs1.vector ^ fs2.vector
    phi_labels, phi_vecs = _phi_basis(group)
    for kappa in itertools.product((0, 1), repeat=d):
        shifted = diff ^ psi_coboundary(group, kappa)
        if shifted & lay.g_mask:
            continue
        coeffs = f2.express(shifted & lay.alpha_mask, phi_vecs)
        if coeffs is None:
            continue
        if shifted & ~(lay.g_mask | lay.alpha_mask):
            continue
        phi = {r: c for r, c in zip(phi_labels, coeffs) if c}
        return True, EquivalenceWitness(tuple(kappa), phi)
    return False, None


def apply_coboundary(fs: FactorSystem, kappa: Sequence[int], phi: dict) -> FactorSystem:
    x = fs.vector ^ psi_coboundary(fs.group, kappa) ^ phi_coboundary(fs.group, phi)
    return from_vector(fs.group, x)


def restrict_to_point_group(fs: FactorSystem) -> tuple[AlphaFactor, bool]:
    """alpha together with whether it satisfies the homogeneous cocycle equation on P."""
    group = fs.group
    t = fs.alpha.table
    ok = True
    for r1 in group.labels:
        for r2 in group.labels:
            for r3 in group.labels:
                s = t[r1, r2] + t[group.compose(r1, r2), r3] + t[r1, group.compose(r2, r3)] + t[r2, r3]
                if s & 1:
                    ok = False
    return fs.alpha, ok


def g_solution_dimension(group: WallpaperGroupData) -> int:
    return classify(group, representatives=False).g_dimension


def enumerate_solutions(group: WallpaperGroupData) -> Iterable[int]:
    kernel = solution_kernel(group)
    for coeffs in itertools.product((0, 1), repeat=len(kernel)):
        x = 0
        for c, v in zip(coeffs, kernel):
            if c:
                x ^= v
        yield x
