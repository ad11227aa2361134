import random

from hypothesis import given, settings, strategies as st

from qspacegroup import f2


def _dense_rank(rows, n):
    rows = [list(f2.int_to_bits(r, n)) for r in rows]
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def test_bits_round_trip():
    assert f2.bits_to_int([1, 0, 1, 1]) == 0b1101
    assert f2.int_to_bits(0b1101, 5) == [1, 0, 1, 1, 0]
    assert f2.bitstring(0b1101, 4) == "1011"
    assert f2.parity(0b1101) == 1


def test_solve_small_system():
    # x0 + x1 = 1, x1 + x2 = 0
    sol = f2.solve([(0b011, 1), (0b110, 0)], 3)
    assert sol is not None and sol.dimension == 1
    for v in [sol.particular, sol.particular ^ sol.kernel[0]]:
        assert f2.parity(v & 0b011) == 1 and f2.parity(v & 0b110) == 0


def test_solve_detects_infeasible():
    assert f2.solve([(0b11, 1), (0b11, 0)], 2) is None


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2 ** 12 - 1), max_size=15), st.integers(0, 2 ** 15 - 1))
def test_solve_matches_brute_force(rows, consts):
    n = 12
    system = [(r, (consts >> i) & 1) for i, r in enumerate(rows)]
    sol = f2.solve(system, n)
    rank = _dense_rank(rows, n)
    if sol is None:
        # infeasible iff some combination of rows vanishes with constant 1
        aug = [r | (c << n) for r, c in system]
        assert _dense_rank(aug, n + 1) == rank + 1
        return
    assert sol.dimension == n - rank
    for v in [sol.particular] + [sol.particular ^ k for k in sol.kernel]:
        assert all(f2.parity(r & v) == c for r, c in system)
    for k in sol.kernel:
        assert all(f2.parity(r & k) == 0 for r, _ in system)
    assert f2.rank(sol.kernel) == sol.dimension


def test_echelon_reduce_fully_gives_coset_leader():
    rng = random.Random(3)
    for _ in range(50):
        vecs = [rng.getrandbits(10) for _ in range(4)]
        eb = f2.EchelonBasis(vecs)
        x = rng.getrandbits(10)
        leader = eb.reduce_fully(x)
        assert (leader ^ x) in eb
        # the leader has no pivot bits, so it is the same for the whole coset
        for v in vecs:
            assert eb.reduce_fully(x ^ v) == leader


def test_express():
    vecs = [0b0011, 0b0110, 0b1000]
    coeffs = f2.express(0b1101, vecs)
    assert coeffs == [1, 1, 1]
    assert f2.express(0b0001, [0b0011, 0b0110]) is None
    assert f2.in_span(0b0101, [0b0011, 0b0110])
