"""The complex of theta-graded invariant multivectors with d_s = [[s, .]].

Degree p carries theta sign (-1)**(p + 1).  Brackets are taken in the full
algebra and projected back to m before being expanded in the invariant basis
of the next degree.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import least_squares_coords, numeric_rank
from .multivec import Multivector, canonical, project, schouten
from .poisson import PhiPoissonSolution, invariant_bivector, phi_tilde
from .quasiroot import InvariantBasis, MlaModel, class_type, invariant_subspace
from .rootsys import e8_from_chain_marks, is_root

EXPANSION_TOL = 1e-10


class ExpansionError(ArithmeticError):
    """An image of d_s does not lie in the invariant span of the next degree."""


def theta_sign(p: int) -> int:
    return -1 if (p + 1) % 2 else 1


def _basis_matrix(basis: InvariantBasis):
    monos = sorted({m for v in basis.vectors for m in v.terms})
    row = {m: k for k, m in enumerate(monos)}
    mat = np.zeros((len(monos), basis.dim), dtype=complex)
    for j, v in enumerate(basis.vectors):
        for m, c in v.terms.items():
            mat[row[m], j] = complex(c)
    return mat, row


def expand(basis: InvariantBasis, v: Multivector, _cache: dict | None = None):
    """Coordinates of ``v`` in ``basis`` and the inf-norm of what is left over."""
    mat, row = _basis_matrix(basis) if _cache is None else _cache
    target = np.zeros(len(row), dtype=complex)
    outside = 0.0
    for m, c in v.terms.items():
        k = row.get(m)
        if k is None:
            outside = max(outside, abs(complex(c)))
        else:
            target[k] = complex(c)
    coords, resid = least_squares_coords(mat, target)
    return coords, max(resid, outside)


@dataclass
class ComplexSlice:
    model: MlaModel
    solution: PhiPoissonSolution
    s: Multivector
    basis2: InvariantBasis
    basis3: InvariantBasis
    basis4: InvariantBasis
    d2: np.ndarray
    d3: np.ndarray
    expansion_residual: float
    ds_square_residual: float
    # d_s(s) measured against phi_tilde: least-squares factor and leftover
    ds_factor: complex = 0j
    ds_factor_residual: float = 0.0
    images2: list = field(default_factory=list, repr=False)


def d_s(model: MlaModel, s: Multivector, v: Multivector) -> Multivector:
    return project(schouten(model.sc, s, v, keep=model.keep), model.keep)


def _matrix(model, s, source: InvariantBasis, target: InvariantBasis):
    cache = _basis_matrix(target)
    cols = []
    images = []
    worst = 0.0
    for v in source.vectors:
        img = d_s(model, s, v.to_complex())
        images.append(img)
        coords, resid = expand(target, img, cache)
        scale = max(1.0, img.norm_inf())
        worst = max(worst, resid / scale)
        cols.append(coords)
    mat = np.array(cols, dtype=complex).T.reshape(target.dim, source.dim)
    return mat, images, worst


def build_slice(model: MlaModel, solution: PhiPoissonSolution) -> ComplexSlice:
    fam = solution.family
    s = invariant_bivector(model, fam).to_complex()
    b2 = invariant_subspace(model, 2, theta_sign(2))
    b3 = invariant_subspace(model, 3, theta_sign(3))
    b4 = invariant_subspace(model, 4, theta_sign(4))
    d2, images2, r2 = _matrix(model, s, b2, b3)
    d3, _, r3 = _matrix(model, s, b3, b4)
    worst = max(r2, r3)
    if worst > EXPANSION_TOL:
        raise ExpansionError(f"{model.describe()}: d_s image leaves the invariant span ({worst:.3e})")
    square = 0.0
    for img in images2:
        if img.terms:
            square = max(square, d_s(model, s, img).norm_inf())
    slice_ = ComplexSlice(model, solution, s, b2, b3, b4, d2, d3, worst, square, images2=images2)
    phi = phi_tilde(model).to_complex()
    if phi.terms and s.terms:
        ds_s = d_s(model, s, s)
        keys = sorted(set(phi.terms) | set(ds_s.terms))
        a = np.array([phi.terms.get(k, 0) for k in keys], dtype=complex).reshape(-1, 1)
        b = np.array([ds_s.terms.get(k, 0) for k in keys], dtype=complex)
        coef, resid = least_squares_coords(a, b)
        slice_.ds_factor = complex(coef[0]) / (fam.kappa ** 2 if fam.kappa else 1.0)
        slice_.ds_factor_residual = resid
    return slice_


def cohomology_dims(sl: ComplexSlice, rel_tol: float = 1e-8,
                    dead_zone: tuple[float, float] = (1e-10, 1e-6)) -> tuple[int, int]:
    """(dim H^2, dim H^3); degree 1 of the complex is zero, so H^2 = ker d2."""
    r2 = numeric_rank(sl.d2, rel_tol, dead_zone) if sl.d2.size else 0
    r3 = numeric_rank(sl.d3, rel_tol, dead_zone) if sl.d3.size else 0
    h2 = sl.basis2.dim - r2
    h3 = (sl.basis3.dim - r3) - r2
    return h2, h3


def ranks(sl: ComplexSlice) -> tuple[int, int]:
    r2 = numeric_rank(sl.d2) if sl.d2.size else 0
    r3 = numeric_rank(sl.d3) if sl.d3.size else 0
    return r2, r3


# -- the E8 nonvanishing check -------------------------------------------------------

# marks on the 7-chain and the branch node, negated where the root is negative
E8_CHECK_ROOTS = {
    "beta": ((0, 1, 2, 1, 1, 0, 0), 1, 1),
    "gamma": ((1, 2, 2, 2, 2, 2, 1), 1, 1),
    "epsilon": ((1, 2, 3, 3, 3, 2, 1), 2, -1),
    "zeta": ((0, 1, 1, 0, 0, 0, 0), 0, -1),
}


@dataclass
class E8CheckReport:
    roots: dict
    classes_ok: bool
    sum_zero: bool
    sums_are_roots: dict
    sums_not_roots: dict
    upsilon_in_span: float
    ds_upsilon_norm: float
    coefficient: complex

    @property
    def membership_ok(self) -> bool:
        return all(self.sums_are_roots.values()) and not any(self.sums_not_roots.values())

    def passed(self, threshold: float = 1e-6) -> bool:
        return (self.classes_ok and self.sum_zero and self.membership_ok
                and self.upsilon_in_span < EXPANSION_TOL
                and self.ds_upsilon_norm > threshold and abs(self.coefficient) > threshold)


def upsilon(model: MlaModel) -> Multivector:
    """Component of phi_tilde supported on the class types (1, 1, l-2) and their theta image."""
    l = model.l
    types = {(1, 1, l - 2), tuple(sorted((l - 1, l - 1, 2)))}
    phi = phi_tilde(model)
    return Multivector._raw(3, {m: c for m, c in phi.terms.items() if class_type(model, m) in types})


def e8_nonvanishing_check(sl: ComplexSlice) -> E8CheckReport:
    model = sl.model
    rs = model.rs
    if str(rs.lie_type) != "E8" or model.alpha_index != 3 or model.l != 6:
        raise ValueError("the E8 check needs the model (E8, trivalent node, l=6)")
    vec = {name: tuple(sign * x for x in e8_from_chain_marks(chain, branch))
           for name, (chain, branch, sign) in E8_CHECK_ROOTS.items()}
    b, g, e, z = (vec[k] for k in ("beta", "gamma", "epsilon", "zeta"))

    def add(u, v):
        return tuple(x + y for x, y in zip(u, v))

    all_roots = all(is_root(rs, v) for v in vec.values())
    res = {k: v[model.alpha_index] % model.l for k, v in vec.items()}
    classes_ok = all_roots and res == {"beta": 2, "gamma": 2, "epsilon": 3, "zeta": 5}
    sum_zero = add(add(b, g), add(e, z)) == (0,) * rs.rank
    yes = {"beta+gamma": is_root(rs, add(b, g)), "beta+zeta": is_root(rs, add(b, z)),
           "gamma+epsilon": is_root(rs, add(g, e))}
    no = {"gamma+zeta": is_root(rs, add(g, z)), "beta+epsilon": is_root(rs, add(b, e))}
    ups = upsilon(model)
    _, span_resid = expand(sl.basis3, ups.to_complex())
    image = d_s(model, sl.s, ups.to_complex())
    coeff = 0j
    if all_roots:
        sign, mono = canonical(tuple(rs.ordinal(v) for v in (b, g, e, z)))
        coeff = sign * complex(image.terms.get(mono, 0))
    return E8CheckReport(vec, classes_ok, sum_zero, yes, no, span_resid, image.norm_inf(), coeff)
