import json
import random

import pytest

from qspacegroup.factorsys import classify
from qspacegroup.groupcore import WALLPAPER_NAMES, get_group
from qspacegroup.homology import (AbelianGroup, ChainComplex, ComplexError, EquivariantComplex, build_resolution,
                                  coinvariant_euler, cohomology_from_uct, group_cohomology, group_homology,
                                  homology, load_complex_file, normalize_torsion, shipped_complex,
                                  shipped_complex_names, total_complex_for, validate_equivariant_complex)
from qspacegroup.snf import IntegerMatrix, elementary_divisors, smith_normal_form
from qspacegroup.torus import torus_complex

PG_D1 = [[-1, 1, 0, 0, -1, 1],
         [1, -1, 0, 0, 1, -1]]
PG_D2 = [[1, 1, 0, 0, 1, -1, 0, 0],
         [1, 1, 0, 0, -1, 1, 0, 0],
         [0, 0, -1, 1, 0, 0, 1, 1],
         [0, 0, 1, -1, 0, 0, 1, 1],
         [0, 0, 0, 0, -1, 1, 0, 0],
         [0, 0, 0, 0, 1, -1, 0, 0]]
PG_D_ODD = [[-1, 1, 0, 0, -1, 1, 0, 0],
            [1, -1, 0, 0, 1, -1, 0, 0],
            [0, 0, 1, 1, 0, 0, -1, -1],
            [0, 0, 1, 1, 0, 0, -1, -1],
            [0, 0, 0, 0, 1, 1, 0, 0],
            [0, 0, 0, 0, 1, 1, 0, 0],
            [0, 0, 0, 0, 0, 0, -1, 1],
            [0, 0, 0, 0, 0, 0, 1, -1]]
PG_D_EVEN = [[1, 1, 0, 0, 1, -1, 0, 0],
             [1, 1, 0, 0, -1, 1, 0, 0],
             [0, 0, -1, 1, 0, 0, 1, 1],
             [0, 0, 1, -1, 0, 0, 1, 1],
             [0, 0, 0, 0, -1, 1, 0, 0],
             [0, 0, 0, 0, 1, -1, 0, 0],
             [0, 0, 0, 0, 0, 0, 1, 1],
             [0, 0, 0, 0, 0, 0, 1, 1]]

# dim_F2 H^2(G, Z2) and H^2(G, U(1)) from the reference classification
Z2_REFERENCE = dict(zip(WALLPAPER_NAMES, (1, 4, 4, 1, 2, 8, 4, 2, 5, 3, 6, 3, 1, 2, 2, 2, 2)))


@pytest.fixture(scope="module")
def pg_total():
    return total_complex_for(get_group("pg"), 5)


def test_pg_total_complex_ranks(pg_total):
    assert pg_total.ranks == [2, 6, 8, 8, 8, 8]


@pytest.mark.parametrize("n,expected", [(1, PG_D1), (2, PG_D2), (3, PG_D_ODD), (4, PG_D_EVEN), (5, PG_D_ODD)])
def test_pg_boundary_matrices_exact(pg_total, n, expected):
    assert pg_total.boundary(n).tolist() == expected


@pytest.mark.parametrize("n,diag", [(1, [1, 0]), (2, [1, 1, 1, 2, 0, 0]), (3, [1, 1, 1, 1, 0, 0, 0, 0]),
                                    (4, [1, 1, 1, 1, 0, 0, 0, 0])])
def test_pg_smith_forms(pg_total, n, diag):
    m = pg_total.boundary(n)
    res = smith_normal_form(m)
    assert [res.d.entries[i][i] for i in range(min(m.shape))] == diag


def test_pg_homology(pg_total):
    assert homology(pg_total, 0) == AbelianGroup(1)
    assert homology(pg_total, 1) == AbelianGroup(1, (2,))
    for n in (2, 3, 4):
        assert homology(pg_total, n).is_zero
    with pytest.raises(ComplexError):
        homology(pg_total, 5)


def test_pg_cohomology():
    g = get_group("pg")
    assert str(group_cohomology(g, 1, "z2")) == "Z2^2"
    assert str(group_cohomology(g, 1, "u1")) == "U(1) + Z2"
    assert str(group_cohomology(g, 2, "z2")) == "Z2"
    assert str(group_cohomology(g, 2, "u1")) == "0"


def test_p1_is_torus():
    g = get_group("p1")
    assert [group_homology(g, n) for n in range(3)] == [AbelianGroup(1), AbelianGroup(2), AbelianGroup(1)]


def test_pm_second_homology():
    assert group_homology(get_group("pm"), 2) == AbelianGroup(0, (2, 2))
    assert str(group_cohomology(get_group("pm"), 2, "u1")) == "Z2^2"


def test_uct():
    assert str(cohomology_from_uct(AbelianGroup(0, (2, 4)), AbelianGroup(1, (3,)), "z2")) == "Z2^2"
    assert str(cohomology_from_uct(AbelianGroup(1, (2,)), AbelianGroup(0, (2,)), "z2")) == "Z2^3"
    assert str(cohomology_from_uct(AbelianGroup(1, (6,)), AbelianGroup(0, (2,)), "u1")) == "U(1) + Z6"
    assert str(cohomology_from_uct(AbelianGroup(), AbelianGroup(), "u1")) == "0"


def test_torsion_normalization():
    assert normalize_torsion([6, 1, 4]) == normalize_torsion([2, 12])
    assert AbelianGroup(0, (6, 4)) == AbelianGroup(0, (2, 12))
    assert str(AbelianGroup(1, (2, 2))) == "Z + Z2^2"


@pytest.mark.parametrize("name,kind", [("p1", "trivial"), ("pm", "periodic"), ("p4", "periodic"),
                                       ("p6", "periodic"), ("pmm", "bar"), ("p4m", "bar"), ("p3m1", "bar")])
def test_resolution_is_exact(name, kind):
    res = build_resolution(get_group(name), 4 if kind != "bar" else 3)
    assert res.kind == kind
    assert res.validate() == []


def test_periodic_resolution_of_order_two():
    g = get_group("pm")
    res = build_resolution(g, 4)
    assert res.boundaries[1] == [{(0, "M"): 1, (0, "E"): -1}]
    assert res.boundaries[2] == [{(0, "E"): 1, (0, "M"): 1}]
    assert res.boundaries[3] == res.boundaries[1]


def test_broken_resolution_detected():
    res = build_resolution(get_group("pm"), 3)
    res.boundaries[2] = [{(0, "E"): 1, (0, "M"): -1}]
    assert res.validate()


def test_pg_complex_validates():
    ec = shipped_complex(get_group("pg"))
    assert validate_equivariant_complex(ec) == []
    assert coinvariant_euler(ec) == 0


def test_corrupted_pg_complex_is_reported():
    g = get_group("pg")
    doc = shipped_complex(g).to_dict()
    # dD = l1 - Rl1 no longer commutes with the mirror action
    doc["degrees"][2]["boundary"] = [[1, 1], [-1, 1], [0, 0], [0, 0]]
    problems = validate_equivariant_complex(EquivariantComplex.from_dict(doc, g))
    assert any("commute" in p or "d o d" in p or "d_" in p for p in problems)
    assert problems


def test_bad_action_is_reported():
    g = get_group("pg")
    doc = shipped_complex(g).to_dict()
    doc["degrees"][0]["action"]["M"] = [1, 1]
    with pytest.raises(ComplexError):
        validate_raises(doc, g)


def validate_raises(doc, g):
    problems = validate_equivariant_complex(EquivariantComplex.from_dict(doc, g))
    if problems:
        raise ComplexError("; ".join(problems))


@pytest.mark.parametrize("name", shipped_complex_names())
def test_shipped_complexes_validate(name):
    ec = shipped_complex(get_group(name))
    assert validate_equivariant_complex(ec) == []


@pytest.mark.parametrize("name", ["pm", "pg", "p2", "pgg"])
def test_total_complex_is_a_complex(name):
    tc = total_complex_for(get_group(name), 4)
    assert tc.validate() == []


def test_homology_invariant_under_cell_relabeling():
    g = get_group("pg")
    doc = shipped_complex(g).to_dict()
    rng = random.Random(3)
    for deg in doc["degrees"]:
        n = len(deg["cells"])
        perm = list(range(n))
        rng.shuffle(perm)
        inv = {p: i for i, p in enumerate(perm)}
        deg["cells"] = [deg["cells"][p] for p in perm]
        for r, act in deg["action"].items():
            new = [0] * n
            for i, v in enumerate(act):
                s = 1 if v > 0 else -1
                new[inv[i]] = s * (inv[abs(v) - 1] + 1)
            deg["action"][r] = new
        deg["_perm"] = perm
    for k in (1, 2):
        rows_perm = doc["degrees"][k - 1]["_perm"]
        cols_perm = doc["degrees"][k]["_perm"]
        old = doc["degrees"][k]["boundary"]
        doc["degrees"][k]["boundary"] = [[old[r][c] for c in cols_perm] for r in rows_perm]
    for deg in doc["degrees"]:
        del deg["_perm"]
    ec = EquivariantComplex.from_dict(doc, g)
    assert validate_equivariant_complex(ec) == []
    assert [group_homology(g, n, ec) for n in range(3)] == [AbelianGroup(1), AbelianGroup(1, (2,)), AbelianGroup()]


def test_missing_complex_raises():
    with pytest.raises(ComplexError, match="no equivariant complex available for p6m"):
        shipped_complex(get_group("p6m"))


def test_complex_file_round_trip(tmp_path):
    g = get_group("pmg")
    ec = shipped_complex(g)
    f = tmp_path / "pmg.json"
    f.write_text(json.dumps(ec.to_dict()))
    back = load_complex_file(f, g)
    assert back.to_dict() == ec.to_dict()
    (tmp_path / "bad.json").write_text("{\n  \"group\": }")
    with pytest.raises(ComplexError, match="line 2"):
        load_complex_file(tmp_path / "bad.json", g)


@pytest.mark.parametrize("name", WALLPAPER_NAMES)
def test_generated_complexes_agree_with_factor_systems(name):
    g = get_group(name)
    ec = torus_complex(g)
    assert validate_equivariant_complex(ec) == []
    h2 = group_cohomology(g, 2, "z2", ec)
    assert h2.f2_dimension == classify(g, representatives=False).h2_dimension


@pytest.mark.parametrize("name", ["p1", "p2", "pm", "pg", "cm", "pmm", "pmg", "pgg", "cmm", "p4", "p4m", "p4g"])
def test_shipped_route_matches_reference_z2(name):
    assert group_cohomology(get_group(name), 2, "z2").f2_dimension == Z2_REFERENCE[name]


def test_elementary_divisor_paths_agree_on_total_complex():
    tc = total_complex_for(get_group("pmm"), 3)
    for n in (1, 2, 3):
        m = tc.boundary(n)
        sparse_rows = [{j: v for j, v in enumerate(row) if v} for row in m.entries]
        assert elementary_divisors(sparse_rows, sparse=True) == list(smith_normal_form(m).divisors)


def test_chain_complex_validation():
    d1 = IntegerMatrix.from_rows([[1, 1]], 2)
    d2 = IntegerMatrix.from_rows([[1], [1]], 1)
    c = ChainComplex([1, 2, 1], {1: d1, 2: d2})
    assert c.validate() == ["d_1 o d_2 != 0"]
