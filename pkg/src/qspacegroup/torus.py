"""P-equivariant cell structures on the 2-torus R^2 / Z^2.

The torus is cut into an N x N grid of unit squares (or of triangles when the
point group only preserves the hexagonal direction set {e1, e2, e1+e2}).  N is
chosen so that every fractional translation maps grid points to grid points.
Cells are identified by their barycenter modulo the lattice, which makes the
action of x -> Rx + tau a signed permutation of cells:

* vertices map to vertices with sign +1,
* an edge (v, d) maps to the edge along Rd, with sign -1 when Rd is the
  negative of a stored direction,
* a 2-cell picks up the sign det R.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .groupcore import WallpaperGroupData, det, mat_vec
from .homology import EquivariantComplex
from .snf import IntegerMatrix

SQUARE_DIRECTIONS = ((1, 0), (0, 1))
TRIANGLE_DIRECTIONS = ((1, 0), (0, 1), (1, 1))


def _neg(v):
    return tuple(-x for x in v)


def _preserves(group: WallpaperGroupData, dirs) -> bool:
    allowed = set(dirs) | {_neg(d) for d in dirs}
    return all(mat_vec(group.matrix(r), d) in allowed for r in group.labels for d in dirs)


def grid_size(group: WallpaperGroupData) -> int:
    dens = [Fraction(t).denominator for p in group.point_group for t in p.tau]
    return lcm(1, *dens)


def torus_complex(group: WallpaperGroupData, n: int | None = None) -> EquivariantComplex:
    if group.dimension != 2:
        raise ValueError("only two-dimensional tori are generated")
    if _preserves(group, SQUARE_DIRECTIONS):
        dirs, shape = SQUARE_DIRECTIONS, "square"
    elif _preserves(group, TRIANGLE_DIRECTIONS):
        dirs, shape = TRIANGLE_DIRECTIONS, "triangle"
    else:
        raise ValueError(f"{group.name}: no grid direction set is preserved by the point group")
    base = grid_size(group)
    n = n or base
    if n % base:
        raise ValueError(f"grid size {n} must be a multiple of {base}")

    def mod(v):
        return tuple(x % n for x in v)

    def add(a, b):
        return tuple(x + y for x, y in zip(a, b))

    points = [(i, j) for j in range(n) for i in range(n)]
    vertices = list(points)
    edges = [(v, k) for v in points for k in range(len(dirs))]
    # 2-cells as counterclockwise vertex loops (unreduced coordinates)
    faces = []
    for v in points:
        if shape == "square":
            faces.append((v, add(v, (1, 0)), add(v, (1, 1)), add(v, (0, 1))))
        else:
            faces.append((v, add(v, (1, 0)), add(v, (1, 1))))
            faces.append((v, add(v, (1, 1)), add(v, (0, 1))))

    def face_key(loop):
        k = len(loop)
        s = [sum(p[i] for p in loop) for i in range(2)]
        return tuple(x % (k * n) for x in s)

    v_index = {v: i for i, v in enumerate(vertices)}
    e_index = {e: i for i, e in enumerate(edges)}
    f_index = {face_key(f): i for i, f in enumerate(faces)}
    dir_index = {d: k for k, d in enumerate(dirs)}

    def edge_of(a, b):
        """Signed index of the oriented segment a -> b."""
        d = tuple(y - x for x, y in zip(a, b))
        if d in dir_index:
            return e_index[mod(a), dir_index[d]], 1
        return e_index[mod(b), dir_index[_neg(d)]], -1

    def affine(r):
        m = group.matrix(r)
        shift = tuple(int(t * n) for t in group.element(r).tau)
        return lambda p: add(mat_vec(m, p), shift)

    action = {0: {}, 1: {}, 2: {}}
    for r in group.generators:
        f = affine(r)
        s = det(group.matrix(r))
        action[0][r] = tuple((v_index[mod(f(v))], 1) for v in vertices)
        action[1][r] = tuple(edge_of(f(v), f(add(v, dirs[k]))) for v, k in edges)
        action[2][r] = tuple((f_index[face_key([f(p) for p in loop])], s) for loop in faces)

    d1 = [[0] * len(edges) for _ in vertices]
    for c, (v, k) in enumerate(edges):
        d1[v_index[mod(add(v, dirs[k]))]][c] += 1
        d1[v_index[v]][c] -= 1
    d2 = [[0] * len(faces) for _ in edges]
    for c, loop in enumerate(faces):
        for a, b in zip(loop, loop[1:] + loop[:1]):
            i, s = edge_of(a, b)
            d2[i][c] += s

    names = [
        [f"v{v}" for v in vertices],
        [f"e{dirs[k]}@{v}" for v, k in edges],
        [f"f{face_key(loop)}/{len(loop)}" for loop in faces],
    ]
    names = [[s.replace(" ", "") for s in ns] for ns in names]
    return EquivariantComplex(
        group, names, action,
        {1: IntegerMatrix.from_rows(d1, len(edges)), 2: IntegerMatrix.from_rows(d2, len(faces))},
        source=f"generated {shape} grid, N={n}",
    )
