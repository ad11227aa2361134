import itertools
import random
from fractions import Fraction

import pytest

from qspacegroup import f2
from qspacegroup.factorsys import (InconsistentFactorSystem, TranslationFactor, apply_coboundary, are_equivalent,
                                   assemble_consistency_system, check_cocycle, check_cocycle_scalar,
                                   check_cocycles, classify, coboundary_space, consistency_violations,
                                   enumerate_solutions, evaluate, from_vector, layout_for, make_factor_system,
                                   restrict_to_point_group, solution_kernel, solve, trivial_factor_system,
                                   wilson_loop)
from qspacegroup.groupcore import NONSYMMORPHIC, WALLPAPER_NAMES, SpaceGroupElement, get_group, shift_origin


def _pg_nontrivial():
    reps = classify(get_group("pg")).representatives
    assert len(reps) == 2
    return next(fs for fs in reps if fs.vector)


def test_p1_has_single_free_flux_unknown():
    g = get_group("p1")
    kernel = solution_kernel(g)
    lay = layout_for(g)
    assert len(kernel) == 1
    assert kernel[0] == 1 << lay.a_index[1, 0]


def test_p2_solution_space_at_least_four():
    assert classify(get_group("p2"), representatives=False).solution_dimension >= 4


@pytest.mark.parametrize("name,dim", [("pg", 1), ("pmg", 2), ("pgg", 1)])
def test_g_part_dimension_nonsymmorphic(name, dim):
    assert classify(get_group(name), representatives=False).g_dimension == dim


def test_p4g_g_part_is_finite():
    # the solver value; a table entry "Z" cannot occur over F2
    assert classify(get_group("p4g"), representatives=False).g_dimension == 2


@pytest.mark.parametrize("name", WALLPAPER_NAMES)
def test_flux_pinning(name):
    g = get_group(name)
    pinned = solve(assemble_consistency_system(g).pin_flux(1))
    if name in NONSYMMORPHIC:
        assert pinned is None
    else:
        assert pinned is not None
        fs = from_vector(g, pinned.particular)
        assert wilson_loop(fs.sigma, (1, 0), (0, 1)) == -1


@pytest.mark.parametrize("name", WALLPAPER_NAMES)
def test_coboundaries_inside_solution_kernel(name):
    g = get_group(name)
    span = f2.EchelonBasis(solution_kernel(g))
    for v in coboundary_space(g):
        assert v in span
        assert consistency_violations(g, v) == []


def test_pg_nontrivial_class_values():
    g = get_group("pg")
    fs = _pg_nontrivial()
    for t1 in itertools.product(range(-2, 3), repeat=2):
        for t2 in itertools.product(range(-2, 3), repeat=2):
            for r2 in g.labels:
                a = SpaceGroupElement(t1, "M")
                b = SpaceGroupElement(t2, r2)
                assert evaluate(fs, a, b) == (-1) ** (t2[1] % 2)
                assert evaluate(fs, SpaceGroupElement(t1, "E"), b) == 1


def test_pg_classes_inequivalent_and_cocycles():
    g = get_group("pg")
    fs = _pg_nontrivial()
    assert check_cocycle(fs, radius=2).ok
    same, _ = are_equivalent(fs, trivial_factor_system(g))
    assert not same


@pytest.mark.parametrize("name", ["p2", "pm", "pg", "cm", "pmg", "pgg", "p4", "p4g", "p3", "p31m"])
def test_representatives_pass_cocycle_check_radius_2(name):
    g = get_group(name)
    reps = classify(g).representatives
    for rep in check_cocycles(g, [fs.vector for fs in reps], radius=2):
        assert rep.ok, rep.violation


@pytest.mark.parametrize("name", ["pm", "pg", "pmg", "p4", "p3m1"])
def test_representatives_pairwise_inequivalent(name):
    reps = classify(get_group(name)).representatives
    for a, b in itertools.combinations(reps, 2):
        assert not are_equivalent(a, b)[0]


@pytest.mark.parametrize("name", ["p2", "pg", "pgg", "cmm", "p4g", "p6"])
def test_gauge_transform_is_detected_with_witness(name):
    g = get_group(name)
    rng = random.Random(name)
    kernel = solution_kernel(g)
    non_identity = [r for r in g.labels if r != g.identity_label]
    for _ in range(5):
        x = 0
        for v in kernel:
            if rng.random() < 0.5:
                x ^= v
        fs = from_vector(g, x)
        kappa = [rng.randint(0, 1) for _ in range(g.dimension)]
        phi = {r: rng.randint(0, 1) for r in non_identity}
        moved = apply_coboundary(fs, kappa, phi)
        ok, witness = are_equivalent(fs, moved)
        assert ok
        assert apply_coboundary(fs, witness.kappa, witness.phi).vector == moved.vector


def test_gauge_transform_preserves_cocycle_values_up_to_coboundary():
    # nu' (g1,g2) = nu(g1,g2) * chi(g1) chi(g2) / chi(g1 g2) for chi({t|R}) = (-1)^(kappa.t + phi(R))
    from qspacegroup.groupcore import multiply
    g = get_group("pgg")
    fs = classify(g).representatives[-1]
    kappa, phi = (1, 0), {"C2": 1, "M[10]": 0, "M[01]": 1}
    moved = apply_coboundary(fs, kappa, phi)

    def chi(x):
        return (-1) ** ((sum(k * t for k, t in zip(kappa, x.t)) + phi.get(x.r, 0)) % 2)

    for a in g.elements(1):
        for b in list(g.elements(1))[::5]:
            expected = evaluate(fs, a, b) * chi(a) * chi(b) * chi(multiply(g, a, b))
            assert evaluate(moved, a, b) == expected


def test_vectorized_and_scalar_cocycle_checks_agree():
    g = get_group("pg")
    lay = layout_for(g)
    rng = random.Random(5)
    good = [fs.vector for fs in classify(g).representatives]
    bad = [rng.getrandbits(lay.n) for _ in range(6)]
    for x in good + bad:
        fs = from_vector(g, x, check=False)
        assert check_cocycle(fs, radius=1).ok == check_cocycle_scalar(fs, radius=1).ok


def test_inconsistent_vector_is_rejected():
    g = get_group("pm")
    lay = layout_for(g)
    x = 1 << lay.alpha_index["E", "M"]
    assert consistency_violations(g, x)
    with pytest.raises(InconsistentFactorSystem):
        from_vector(g, x)


def test_translation_factor_canonical_form_and_wilson_loop():
    with pytest.raises(ValueError):
        TranslationFactor(((0, 1), (0, 0)))
    s = TranslationFactor.flux(1)
    assert s((0, 1), (1, 0)) == -1 and s((1, 0), (0, 1)) == 1
    assert wilson_loop(s, (1, 0), (0, 1)) == -1
    assert wilson_loop(s, (2, 0), (0, 1)) == 1
    assert wilson_loop(TranslationFactor.flux(0), (1, 0), (0, 1)) == 1


def test_make_factor_system_p2_parity_classes():
    g = get_group("p2")
    fs = make_factor_system(g, q_vec={"C2": (1, 0)})
    assert fs.g.exponent((1, 0), "C2") == 1 and fs.g.exponent((0, 1), "C2") == 0
    assert check_cocycle(fs, radius=2).ok


@pytest.mark.parametrize("name", ["pg", "pgg", "p4g", "p6m"])
def test_classification_independent_of_origin(name):
    g = get_group(name)
    moved = shift_origin(g, (Fraction(1, 4), Fraction(1, 2)))
    assert classify(moved, representatives=False).h2_dimension == classify(g, representatives=False).h2_dimension


def test_alpha_restricts_to_point_group_cocycle_for_symmorphic():
    for name in ("p2", "pmm", "p4m", "p6m"):
        for fs in classify(get_group(name)).representatives[:8]:
            _, ok = restrict_to_point_group(fs)
            assert ok


def test_enumerate_solutions_counts():
    g = get_group("pm")
    sols = list(enumerate_solutions(g))
    assert len(sols) == 2 ** len(solution_kernel(g)) == len(set(sols))


def test_payload_shapes():
    res = classify(get_group("pg"))
    p = res.to_payload()
    assert p["dimension"] == 1 and len(p["representatives"]) == 2
    assert set(p["representatives"][0]["g"]) == {"E", "M"}
