from fractions import Fraction

import pytest

from phipoisson.chevalley import (bracket_combo, build_structure_constants, involution_failures,
                                  jacobi_failures, jacobi_residual, property_violations)
from phipoisson.rootsys import build_root_system
from phipoisson.selftest import all_types, chevalley_suite, corrupt_table


def sc_for(name):
    return build_structure_constants(build_root_system(name))


def test_sl2_brackets():
    sc = sc_for("A1")
    f, e, t = 0, 1, 2
    # [e, f] = h = 2t/(a,a) = t for a long root; [t, e] = (a, a) e = 2e
    assert sc.bracket(e, f) == ((t, 1),)
    assert sc.bracket(t, e) == ((e, 2),)
    assert sc.bracket(t, f) == ((f, -2),)
    assert sc.bracket(t, t) == ()


def test_extraspecial_pairs_are_positive():
    rs = build_root_system("G2")
    sc = build_structure_constants(rs)
    a1, a2 = rs.ordinal((1, 0)), rs.ordinal((0, 1))
    # extraspecial pairs are ordered by ordinal, and (0, 1) precedes (1, 0)
    assert sc.N(a2, a1) == 1 and sc.N(a1, a2) == -1
    a12 = rs.ordinal((1, 1))
    assert sc.N(a1, a12) == 2
    a22 = rs.ordinal((2, 1))
    assert sc.N(a1, a22) == 3


# every type up to rank 8 is covered by the acceptance suite
@pytest.mark.parametrize("t", [x for x in all_types(8) if x.rank <= 4 or x.family in "EF"], ids=str)
def test_properties_hold(t):
    assert property_violations(build_structure_constants(build_root_system(t))) == []


@pytest.mark.parametrize("name", ["A2", "B2", "G2", "B3", "C3", "A4", "F4"])
def test_full_jacobi_and_involution(name):
    sc = sc_for(name)
    assert jacobi_failures(sc) == 0
    assert involution_failures(sc) == 0


def test_sampled_jacobi_e8():
    assert jacobi_failures(sc_for("E8"), samples=3000, seed=7) == 0


def test_corrupted_table_is_caught():
    r = chevalley_suite(build_root_system("B3").lie_type, corrupt=True)
    assert r["property_violations"] > 0 or r["jacobi_failures"] > 0


def test_corrupt_table_a1_is_noop():
    assert corrupt_table(sc_for("A1")) is None


def test_single_jacobi_residual_detects_flip():
    sc = sc_for("A2")
    corrupt_table(sc)
    bad = sum(1 for x in range(sc.dim) for y in range(sc.dim) for z in range(sc.dim)
              if jacobi_residual(sc, x, y, z))
    assert bad > 0


def test_bracket_combo_antisymmetric():
    sc = sc_for("B2")
    u = {0: 1, 3: Fraction(1, 2), sc.cartan(0): 2}
    v = {1: 3, 5: -1, sc.cartan(1): 1}
    uv = bracket_combo(sc, u, v)
    vu = bracket_combo(sc, v, u)
    assert uv and {k: -c for k, c in vu.items()} == uv


def test_partners_match_bracket():
    sc = sc_for("G2")
    for x in range(sc.dim):
        assert set(sc.partners(x)) == {y for y in range(sc.dim) if sc.bracket(x, y)}
