from fractions import Fraction

from hypothesis import given, settings, strategies as st

from phipoisson.chevalley import build_structure_constants
from phipoisson.multivec import (GaussianRational, Multivector, adjoint_action, basis_vector,
                                 canonical, cartan_involution, lie_bracket, project, schouten,
                                 wedge)
from phipoisson.rootsys import build_root_system

SL2 = build_structure_constants(build_root_system("A1"))
B2 = build_structure_constants(build_root_system("B2"))
F, E, T = 0, 1, 2


def test_canonical_sign_and_repeat():
    assert canonical((2, 0, 1)) == (1, (0, 1, 2))
    assert canonical((1, 0, 2)) == (-1, (0, 1, 2))
    assert canonical((1, 1)) == (0, ())


def test_wedge_graded_commutativity():
    a = Multivector.from_factors((0, 3))
    b = basis_vector(5)
    assert wedge(a, b) == wedge(b, a)
    c = basis_vector(1)
    assert wedge(b, c) == -wedge(c, b)
    assert wedge(b, b).is_zero()


def test_sl2_schouten_oracle():
    ef = Multivector.from_factors((E, F))
    # [[e^f, e^f]] = 2 t^e^f, worked out by hand
    assert schouten(SL2, ef, ef) == Multivector.from_factors((T, E, F), 2)


def test_schouten_on_vectors_is_lie_bracket():
    assert lie_bracket(SL2, basis_vector(E), basis_vector(F)) == basis_vector(T)
    assert schouten(SL2, basis_vector(T), basis_vector(E)) == basis_vector(E, 2)


def test_theta_squared_is_identity_and_acts_on_pairs():
    v = Multivector(2, {(0, 5): 1, (1, B2.cartan(0)): Fraction(2, 3)})
    assert cartan_involution(B2, cartan_involution(B2, v)) == v
    rs = B2.rs
    a = rs.positive[0]
    pair = Multivector.from_factors((a, rs.neg(a)))
    assert cartan_involution(B2, pair) == -pair


def test_project_drops_outside_factors():
    keep = [k % 2 == 0 for k in range(B2.dim)]
    v = Multivector(2, {(0, 2): 1, (0, 1): 5})
    assert project(v, keep) == Multivector(2, {(0, 2): 1})


def test_gaussian_rational_arithmetic():
    i = GaussianRational(0, 1)
    assert i * i == GaussianRational(-1, 0)
    assert complex(GaussianRational(Fraction(1, 2), 3)) == complex(0.5, 3)


mono = st.lists(st.integers(0, B2.dim - 1), min_size=1, max_size=3, unique=True)


def mv(draw_terms, degree):
    return Multivector(degree, {canonical(m)[1]: c for m, c in draw_terms})


@st.composite
def multivectors(draw, degree):
    terms = draw(st.lists(st.tuples(st.lists(st.integers(0, B2.dim - 1), min_size=degree,
                                             max_size=degree, unique=True),
                                    st.integers(-3, 3)), max_size=4))
    acc = {}
    for m, c in terms:
        s, key = canonical(m)
        acc[key] = acc.get(key, 0) + s * c
    return Multivector(degree, acc)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2), st.integers(1, 2), st.data())
def test_graded_antisymmetry(p, q, data):
    u = data.draw(multivectors(p))
    v = data.draw(multivectors(q))
    sign = -((-1) ** ((p - 1) * (q - 1)))
    assert schouten(B2, u, v) == schouten(B2, v, u).scale(sign)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_adjoint_action_is_derivation_of_wedge(data):
    x = data.draw(st.integers(0, B2.dim - 1))
    u = data.draw(multivectors(1))
    v = data.draw(multivectors(2))
    lhs = adjoint_action(B2, x, wedge(u, v))
    rhs = wedge(adjoint_action(B2, x, u), v) + wedge(u, adjoint_action(B2, x, v))
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_schouten_leibniz_in_second_slot(data):
    # [[x, v ^ w]] = [[x, v]] ^ w + v ^ [[x, w]] for a vector x
    x = data.draw(multivectors(1))
    v = data.draw(multivectors(1))
    w = data.draw(multivectors(2))
    lhs = schouten(B2, x, wedge(v, w))
    rhs = wedge(schouten(B2, x, v), w) + wedge(v, schouten(B2, x, w))
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_schouten_keep_equals_projection(data):
    keep = [k % 3 != 0 for k in range(B2.dim)]
    u = data.draw(multivectors(2))
    v = data.draw(multivectors(2))
    assert schouten(B2, u, v, keep=keep) == project(schouten(B2, u, v), keep)
