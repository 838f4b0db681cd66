import pytest

from phipoisson.multivec import cartan_involution
from phipoisson.quasiroot import (ModelError, alpha_multiplicity, bracket_image_check,
                                  connectivity_check, invariance_defect, invariant_subspace,
                                  weight_zero_monomials)

# root counts of the stabilizer, read off the extended Dynkin diagram with the node removed:
# A1xA1, A2, A3xA1, A4xA4, A5xA2xA1
STABILIZER_ROOTS = {
    ("G2", 2, 2): 4,
    ("G2", 1, 3): 6,
    ("F4", 3, 4): 14,
    ("E8", 5, 5): 40,
    ("E8", 4, 6): 38,
}
DIMS = {
    ("G2", 2, 2): (0, 0, 0),
    ("G2", 1, 3): (1, 1, 0),
    ("F4", 3, 4): (1, 1, 0),
    ("E8", 5, 5): (2, 2, 0),
    ("E8", 4, 6): (2, 3, 2),
}
INSTANCES = sorted(STABILIZER_ROOTS)


@pytest.mark.parametrize("inst", INSTANCES, ids=lambda t: ":".join(map(str, t)))
def test_stabilizer_size_and_class_symmetry(get_model, inst):
    model = get_model(*inst)
    assert len(model.omega_p) == STABILIZER_ROOTS[inst]
    assert len(model.omega_p) + len(model.m_basis) == len(model.rs.roots)
    l = model.l
    for i in range(1, l):
        assert len(model.classes[i]) == len(model.classes[l - i])
        neg = {model.rs.neg(b) for b in model.classes[i]}
        assert neg == set(model.classes[l - i])


@pytest.mark.parametrize("inst", INSTANCES, ids=lambda t: ":".join(map(str, t)))
def test_invariant_dimensions(get_model, inst):
    model = get_model(*inst)
    got = tuple(invariant_subspace(model, p, s).dim for p, s in ((2, -1), (3, 1), (4, -1)))
    assert got == DIMS[inst]


@pytest.mark.parametrize("inst", INSTANCES, ids=lambda t: ":".join(map(str, t)))
def test_connectivity_and_bracket_image(get_model, inst):
    model = get_model(*inst)
    l = model.l
    assert all(connectivity_check(model, i) for i in range(1, l))
    assert all(bracket_image_check(model, i, j)
               for i in range(1, l) for j in range(1, l) if (i + j) % l)


def test_connectivity_fails_without_stabilizer(get_model):
    model = get_model("F4", 3, 4)
    assert not connectivity_check(model, 1, omega_p=())


def test_bracket_image_rejects_zero_class(get_model):
    with pytest.raises(ModelError):
        bracket_image_check(get_model("G2", 1, 3), 1, 2)


def test_level_above_multiplicity_is_rejected(get_algebra):
    from phipoisson.quasiroot import build_model

    rs, sc = get_algebra("A2")
    assert alpha_multiplicity(rs, 0) == 1
    with pytest.raises(ModelError):
        build_model(rs, sc, 0, 2)
    with pytest.raises(ModelError):
        build_model(rs, sc, 5, 2)


@pytest.mark.parametrize("inst", [("F4", 3, 4), ("E8", 5, 5), ("E8", 4, 6)],
                         ids=lambda t: ":".join(map(str, t)))
def test_basis_is_fully_invariant_with_right_theta(get_model, inst):
    model = get_model(*inst)
    for p, sign in ((2, -1), (3, 1), (4, -1)):
        for v in invariant_subspace(model, p, sign).vectors:
            assert invariance_defect(model, v) == []
            assert cartan_involution(model.sc, v) == v.scale(sign)


def test_each_three_vector_block_is_one_dimensional(get_model):
    basis = invariant_subspace(get_model("E8", 4, 6), 3, 1)
    nonzero = [(t, n) for t, n in basis.blocks if n]
    assert [n for _, n in nonzero] == [1, 1, 1]
    assert sorted(t for t, _ in nonzero) == [(1, 1, 4), (1, 2, 3), (2, 2, 2)]


def test_weight_zero_monomials_have_zero_weight(get_model):
    model = get_model("G2", 1, 3)
    for p in (2, 3):
        for mono in weight_zero_monomials(model, p):
            total = [sum(model.rs.roots[x][i] for x in mono) for i in range(2)]
            assert total == [0, 0]


def test_defect_reports_broken_vector(get_model):
    # in G2 each monomial is a determinant of a 3-dim class and already invariant
    model = get_model("F4", 3, 4)
    (v,) = invariant_subspace(model, 3, 1).vectors
    mono = next(iter(v.terms))
    from phipoisson.multivec import Multivector
    broken = v + Multivector(3, {mono: 1})
    assert invariance_defect(model, broken)


def test_bad_theta_sign(get_model):
    with pytest.raises(ModelError):
        invariant_subspace(get_model("G2", 1, 3), 3, 0)
