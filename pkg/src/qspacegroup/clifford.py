"""Clifford band theory for PT-symmetric lattices with pi flux.

An operator is stored as ``M0 * exp(i c.k) * K^a * I^b``: a constant matrix, a
half-integer momentum phase vector ``c``, a complex-conjugation flag ``a`` and
a momentum-inversion flag ``b``.  Both K and I flip the sign of ``c.k`` when
moved through a phase, so products are exact and the algebra checks need no
tolerance for the shipped matrices (entries 0, +-1, +-i).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

SIGMA = {
    0: np.eye(2, dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
    2: np.array([[0, -1j], [1j, 0]], dtype=complex),
    3: np.array([[1, 0], [0, -1]], dtype=complex),
}


class NoConstruction(ValueError):
    """Raised when no explicit representation ships for a symmetry case."""


class GridTooCoarse(ValueError):
    pass


# -- symmetry data and signatures -----------------------------------------------

@dataclass(frozen=True)
class SymmetryCase:
    s_t: int
    s_p: int
    q_x: int
    q_y: int

    def __post_init__(self):
        if self.s_t not in (1, -1) or self.s_p not in (1, -1):
            raise ValueError("s_t and s_p must be +1 or -1")
        if self.q_x not in (0, 1) or self.q_y not in (0, 1):
            raise ValueError("q_x and q_y must be 0 or 1")

    @property
    def q(self) -> tuple[int, int]:
        return self.q_x, self.q_y

    def to_payload(self) -> dict:
        return {"s_t": self.s_t, "s_p": self.s_p, "q_x": self.q_x, "q_y": self.q_y}


def all_cases() -> list[SymmetryCase]:
    return [SymmetryCase(st, sp, qx, qy) for st, sp, qx, qy in
            itertools.product((1, -1), (1, -1), (0, 1), (0, 1))]


@dataclass(frozen=True)
class CliffordSignature:
    n: int  # generators squaring to -1
    m: int  # generators squaring to +1

    def as_tuple(self) -> tuple[int, int]:
        return self.n, self.m


def generator_squares(case: SymmetryCase) -> list[int]:
    """Squares of PT, iPT, i^(1-q_x) Lx, i^(1-q_y) Ly."""
    pt = case.s_p * case.s_t
    return [pt, pt, (-1) ** (1 - case.q_x), (-1) ** (1 - case.q_y)]


def signature(case: SymmetryCase) -> CliffordSignature:
    sq = generator_squares(case)
    return CliffordSignature(sq.count(-1), sq.count(1))


# (m - n) mod 8 -> (algebra type, real dimension of the irreducible module as a
# function of N = n + m).  Cl with m positive and n negative generators.
_CLIFFORD_TYPES = {
    0: ("M(R)", lambda N: 2 ** (N // 2)),
    1: ("M(R)+M(R)", lambda N: 2 ** ((N - 1) // 2)),
    2: ("M(R)", lambda N: 2 ** (N // 2)),
    3: ("M(C)", lambda N: 2 ** ((N + 1) // 2)),
    4: ("M(H)", lambda N: 2 ** (N // 2 + 1)),
    5: ("M(H)+M(H)", lambda N: 2 ** ((N + 1) // 2)),
    6: ("M(H)", lambda N: 2 ** (N // 2 + 1)),
    7: ("M(C)", lambda N: 2 ** ((N + 1) // 2)),
}


def clifford_type(sig: CliffordSignature) -> str:
    return _CLIFFORD_TYPES[(sig.m - sig.n) % 8][0]


def real_irrep_dim(sig: CliffordSignature) -> int:
    return _CLIFFORD_TYPES[(sig.m - sig.n) % 8][1](sig.n + sig.m)


def irrep_dim(sig: CliffordSignature) -> int:
    """Complex band degeneracy: half the real irreducible dimension (at least 1)."""
    return max(1, real_irrep_dim(sig) // 2)


# -- operators ----------------------------------------------------------------------

@dataclass(frozen=True)
class Operator:
    matrix: np.ndarray
    phase: tuple[Fraction, Fraction] = (Fraction(0), Fraction(0))
    antiunitary: bool = False
    inverts_momentum: bool = False

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: "Operator") -> "Operator":
        flip = -1 if (self.antiunitary ^ self.inverts_momentum) else 1
        m2 = np.conj(other.matrix) if self.antiunitary else other.matrix
        return Operator(self.matrix @ m2,
                        tuple(a + flip * b for a, b in zip(self.phase, other.phase)),
                        self.antiunitary ^ other.antiunitary,
                        self.inverts_momentum ^ other.inverts_momentum)

    def scaled(self, z: complex) -> "Operator":
        return Operator(z * self.matrix, self.phase, self.antiunitary, self.inverts_momentum)

    def renormalized(self, axis: int) -> "Operator":
        """exp(-i k_axis / 2) times the operator."""
        ph = list(self.phase)
        ph[axis] -= Fraction(1, 2)
        return Operator(self.matrix, tuple(ph), self.antiunitary, self.inverts_momentum)

    def conjugated(self, u: np.ndarray) -> "Operator":
        """U O U^-1 for a constant unitary U."""
        right = u.T if self.antiunitary else u.conj().T
        return Operator(u @ self.matrix @ right, self.phase, self.antiunitary, self.inverts_momentum)

    def at(self, k) -> np.ndarray:
        """The matrix part at momentum k (flags dropped)."""
        return np.exp(1j * sum(float(c) * x for c, x in zip(self.phase, k))) * self.matrix

    def same_kind(self, other: "Operator") -> bool:
        return (self.phase == other.phase and self.antiunitary == other.antiunitary
                and self.inverts_momentum == other.inverts_momentum)


def _scalar(dim: int, z: complex = 1) -> Operator:
    return Operator(z * np.eye(dim, dtype=complex))


@dataclass
class OperatorRep:
    case: SymmetryCase
    lx: Operator
    ly: Operator
    p: Operator
    t: Operator
    name: str = ""

    @property
    def dimension(self) -> int:
        return self.lx.dim

    def lhat(self, axis: int) -> Operator:
        return (self.lx, self.ly)[axis].renormalized(axis)

    def operators(self) -> dict[str, Operator]:
        return {"Lx": self.lx, "Ly": self.ly, "P": self.p, "T": self.t}

    def conjugated(self, u: np.ndarray) -> "OperatorRep":
        return OperatorRep(self.case, self.lx.conjugated(u), self.ly.conjugated(u),
                           self.p.conjugated(u), self.t.conjugated(u), self.name + " (conjugated)")

    def to_payload(self) -> dict:
        def enc(op: Operator):
            return {
                "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in op.matrix],
                "phase": [str(c) for c in op.phase],
                "antiunitary": op.antiunitary,
                "inverts_momentum": op.inverts_momentum,
            }
        return {"name": self.name, "dimension": self.dimension,
                "operators": {k: enc(v) for k, v in self.operators().items()}}


def _kron(a, b):
    return np.kron(SIGMA[a], SIGMA[b])


_HALF = Fraction(1, 2)

# Unitary part of P for the two-band construction Lx = e^{ikx/2} s1, Ly = e^{iky/2} s2,
# T = s1 K I (T^2 = +1).
_TWO_BAND_P = {
    (1, 1, 0, 0): SIGMA[0],
    (1, 1, 1, 0): SIGMA[2],
    (1, 1, 0, 1): SIGMA[1],
    (1, -1, 1, 1): 1j * SIGMA[3],
}


def shipped_cases() -> list[SymmetryCase]:
    return [SymmetryCase(*k) for k in _TWO_BAND_P] + [SymmetryCase(1, 1, 1, 1)]


def build_standard_rep(case: SymmetryCase) -> OperatorRep:
    key = (case.s_t, case.s_p, case.q_x, case.q_y)
    if key in _TWO_BAND_P:
        return OperatorRep(
            case,
            Operator(SIGMA[1], (_HALF, Fraction(0))),
            Operator(SIGMA[2], (Fraction(0), _HALF)),
            Operator(_TWO_BAND_P[key].copy(), inverts_momentum=True),
            Operator(SIGMA[1].copy(), antiunitary=True, inverts_momentum=True),
            "two-band",
        )
    if key == (1, 1, 1, 1):
        return OperatorRep(
            case,
            Operator(_kron(1, 0), (_HALF, Fraction(0))),
            Operator(_kron(3, 0), (Fraction(0), _HALF)),
            Operator(_kron(2, 2), inverts_momentum=True),
            Operator(np.eye(4, dtype=complex), antiunitary=True, inverts_momentum=True),
            "four-band",
        )
    sig = signature(case)
    raise NoConstruction(
        f"no shipped construction for {case.to_payload()}; "
        f"signature {sig.as_tuple()} with irreducible dimension {irrep_dim(sig)} is still available")


# -- algebra check -----------------------------------------------------------------

@dataclass
class RelationResult:
    name: str
    passed: bool
    residual: float


@dataclass
class AlgebraReport:
    relations: list[RelationResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.relations)

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.relations), default=0.0)

    def failures(self) -> list[str]:
        return [r.name for r in self.relations if not r.passed]


def _residual(lhs: Operator, rhs: Operator) -> float:
    if not lhs.same_kind(rhs):
        return float("inf")
    return float(np.max(np.abs(lhs.matrix - rhs.matrix))) if lhs.matrix.size else 0.0


def _anticommutator_residual(a: Operator, b: Operator) -> float:
    ab, ba = a @ b, b @ a
    return _residual(ab, ba.scaled(-1))


def check_algebra(rep: OperatorRep, case: SymmetryCase | None = None, tol: float = 0.0) -> AlgebraReport:
    case = case or rep.case
    d = rep.dimension
    one = _scalar(d)
    i_op = _scalar(d, 1j)
    lx, ly = rep.lhat(0), rep.lhat(1)
    p, t = rep.p, rep.t
    checks = [
        ("{Lx,Ly}=0", _anticommutator_residual(lx, ly)),
        ("Lx^2=1", _residual(lx @ lx, one)),
        ("Ly^2=1", _residual(ly @ ly, one)),
        ("P^2=s_p", _residual(p @ p, one.scaled(case.s_p))),
        ("T^2=s_t", _residual(t @ t, one.scaled(case.s_t))),
        ("[T,P]=0", _residual(t @ p, p @ t)),
        ("[T,Lx]=0", _residual(t @ lx, lx @ t)),
        ("[T,Ly]=0", _residual(t @ ly, ly @ t)),
        ("{i,T}=0", _residual(i_op @ t, (t @ i_op).scaled(-1))),
        ("Lx P=(-1)^qx P Lx", _residual(lx @ p, (p @ lx).scaled((-1) ** case.q_x))),
        ("Ly P=(-1)^qy P Ly", _residual(ly @ p, (p @ ly).scaled((-1) ** case.q_y))),
    ]
    unitarity = max(float(np.max(np.abs(op.matrix @ op.matrix.conj().T - np.eye(d))))
                    for op in rep.operators().values())
    checks.append(("unitary", unitarity))
    flags_ok = (not rep.lx.antiunitary and not rep.ly.antiunitary and not rep.p.antiunitary
                and rep.t.antiunitary)
    checks.append(("only T antiunitary", 0.0 if flags_ok else float("inf")))
    return AlgebraReport([RelationResult(n, r <= tol, r) for n, r in checks])


def random_monomial_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Permutation times phases from {1, i, -1, -i}: exact in floating point."""
    perm = rng.permutation(dim)
    phases = np.array([1, 1j, -1, -1j])[rng.integers(0, 4, size=dim)]
    u = np.zeros((dim, dim), dtype=complex)
    u[perm, np.arange(dim)] = phases
    return u


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


# -- winding numbers ------------------------------------------------------------------

@dataclass
class WindingResult:
    value: int
    raw: float
    blocks: int


def _det_winding(family, grid_points: int) -> float:
    ks = 2 * np.pi * np.arange(grid_points + 1) / grid_points
    dets = np.array([np.linalg.det(family(k)) for k in ks])
    steps = np.angle(dets[1:] / dets[:-1])
    # a step near pi is ambiguous, so the sampled phase may be aliased
    if np.max(np.abs(steps)) > np.pi / 2:
        raise GridTooCoarse(f"determinant phase jumps by more than pi/2 between samples; refine the grid "
                            f"(grid_points={grid_points})")
    return float(steps.sum() / (2 * np.pi))


def winding(family, grid_points: int = 100, blocks: int = 1) -> WindingResult:
    """Winding of det L(k) around k in [0, 2pi], divided by ``blocks``."""
    if grid_points < 8:
        raise ValueError("grid_points must be at least 8")
    raw = _det_winding(family, grid_points)
    if abs(raw - round(raw)) > 0.1:
        raise ValueError(f"accumulated phase {raw:.3f} x 2pi is not an integer; the family is not periodic")
    total = round(raw)
    if total % blocks:
        raise ValueError(f"total winding {total} not divisible by {blocks} blocks")
    return WindingResult(total // blocks, raw, blocks)


def winding_number(rep: OperatorRep | object, direction: str = "x", grid_points: int = 100) -> int:
    """Winding of the translation operator along one Brillouin-zone circle.

    For an OperatorRep the determinant winding is divided by the number of
    two-dimensional translation blocks (dimension / 2), so it counts the winding
    per irreducible pinor block.  A plain callable k -> matrix is used as is.
    """
    return winding_detail(rep, direction, grid_points).value


def winding_detail(rep, direction: str = "x", grid_points: int = 100) -> WindingResult:
    if direction not in ("x", "y"):
        raise ValueError("direction must be 'x' or 'y'")
    if isinstance(rep, OperatorRep):
        axis = 0 if direction == "x" else 1
        op = (rep.lx, rep.ly)[axis]

        def family(k):
            kv = [0.0, 0.0]
            kv[axis] = k
            return op.at(kv)
        return winding(family, grid_points, blocks=max(1, rep.dimension // 2))
    return winding(rep, grid_points)


# -- degeneracy ----------------------------------------------------------------------------

def _normalize_phase(m: np.ndarray) -> np.ndarray:
    flat = m.ravel()
    idx = int(np.argmax(np.abs(flat) > 1e-9))
    return m * (abs(flat[idx]) / flat[idx])


def symmetry_words(rep: OperatorRep, max_size: int = 512) -> list[tuple[np.ndarray, bool]]:
    """Group generated by Lx^, Ly^ and PT at a fixed momentum, modulo phases.

    Elements are (U, antiunitary); conjugation by them is phase independent.
    """
    pt = rep.p @ rep.t
    gens = [(rep.lhat(0).matrix, False), (rep.lhat(1).matrix, False), (pt.matrix, True)]
    d = rep.dimension
    found: dict[tuple, tuple[np.ndarray, bool]] = {}

    def key(m, a):
        return (a, tuple(np.round(_normalize_phase(m), 9).ravel().tolist()))

    start = (np.eye(d, dtype=complex), False)
    found[key(*start)] = start
    frontier = [start]
    while frontier:
        nxt = []
        for m, a in frontier:
            for g, ga in gens:
                prod = (m @ (np.conj(g) if a else g), a ^ ga)
                k = key(*prod)
                if k not in found:
                    found[k] = prod
                    nxt.append(prod)
                    if len(found) > max_size:
                        raise RuntimeError("symmetry group larger than expected")
        frontier = nxt
    return list(found.values())


def symmetrize(h: np.ndarray, words) -> np.ndarray:
    acc = np.zeros_like(h)
    for u, anti in words:
        acc += u @ (np.conj(h) if anti else h) @ u.conj().T
    return acc / len(words)


def eigenvalue_multiplicities(h: np.ndarray, rel_tol: float = 1e-9) -> list[int]:
    ev = np.linalg.eigvalsh(h)
    scale = max(1.0, float(np.max(np.abs(ev))))
    groups, count = [], 1
    for a, b in zip(ev, ev[1:]):
        if b - a <= rel_tol * scale:
            count += 1
        else:
            groups.append(count)
            count = 1
    groups.append(count)
    return groups


@dataclass
class DegeneracyReport:
    case: SymmetryCase
    samples: int
    seed: int
    symmetrized: bool
    irrep_dim: int
    min_multiplicity: int
    multiplicities: list[list[int]]

    @property
    def consistent(self) -> bool:
        return all(m % self.irrep_dim == 0 for ms in self.multiplicities for m in ms)

    def to_payload(self) -> dict:
        return {"min_multiplicity": self.min_multiplicity, "samples": self.samples, "seed": self.seed,
                "symmetrized": self.symmetrized, "irrep_dim": self.irrep_dim,
                "all_multiples_of_irrep_dim": self.consistent}


def degeneracy_check(case: SymmetryCase, samples: int = 20, seed: int = 0,
                     symmetrize_h: bool = True, rel_tol: float = 1e-9) -> DegeneracyReport:
    rep = build_standard_rep(case)
    rng = np.random.default_rng(seed)
    words = symmetry_words(rep)
    d = rep.dimension
    mults = []
    for _ in range(samples):
        # the renormalized generators are momentum independent, so the random
        # momentum only enters through the Hamiltonian itself
        k = rng.uniform(-np.pi, np.pi, size=2)
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = (a + a.conj().T) / 2 * (1 + 0.5 * np.cos(k[0]) + 0.25 * np.sin(k[1]))
        if symmetrize_h:
            h = symmetrize(h, words)
        mults.append(eigenvalue_multiplicities(h, rel_tol))
    return DegeneracyReport(case, samples, seed, symmetrize_h, irrep_dim(signature(case)),
                            min(min(m) for m in mults), mults)
