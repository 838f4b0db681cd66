"""phi-Poisson bivectors on M_{l alpha} and the Drinfeld-Jimbo r-matrix.

All multivectors live in the Chevalley e-basis.  The Killing-normalized
vectors ``X_a = sqrt((a,a)/2) e_a`` only enter through the conversion factors

    X_b ^ X_-b          = (b,b)/2 * e_b ^ e_-b
    N'_ab X_a ^ X_b ^ X_c = N_ab (a,a)(b,b)/4 * e_a ^ e_b ^ e_c     (a + b + c = 0)

where ``N'`` is the normalized constant, so every coefficient stays rational.

Normalization of the invariant 3-vector: ``phi_tilde`` is ``PHI_SCALE`` times
the sum over ordered pairs ``(a, b)`` of m-roots with ``a + b`` a root of m.
With the bivector summed over every class (so each pair ``b, -b`` appears
twice) the bracket satisfies, triple by triple,

    [[s, s]] - kappa^2 phi_tilde = PHI_SCALE * (d_T - kappa^2) * phi_T,
    d_T = c_{i+j} (c_i + c_j) - c_i c_j,

so ``[[s, s]] = kappa^2 phi_tilde`` is literally the coefficient recurrence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .chevalley import StructureConstants
from .multivec import Multivector, adjoint_action, canonical, project, schouten
from .quasiroot import MlaModel
from .rootsys import RootSystem

PHI_SCALE = Fraction(4, 3)


class FamilyError(ValueError):
    pass


@dataclass
class CoefficientFamily:
    """Coefficients ``c[i]`` of the invariant bivector, one per class ``i = 1..l-1``."""

    l: int
    c: dict
    kappa: float = 1.0

    def __post_init__(self):
        if self.kappa < 0:
            raise FamilyError("kappa must be non-negative")
        if set(self.c) != set(range(1, self.l)):
            raise FamilyError(f"need coefficients for classes 1..{self.l - 1}")
        for i in range(1, self.l):
            if abs(complex(self.c[i] + self.c[self.l - i])) > 1e-12:
                raise FamilyError(f"c[{self.l - i}] must equal -c[{i}]")

    @classmethod
    def from_half(cls, l: int, values, kappa: float = 1.0) -> "CoefficientFamily":
        """Build from ``c[1..floor((l-1)/2)]``; the rest follows by c[l-i] = -c[i]."""
        values = list(values)
        half = (l - 1) // 2
        if len(values) != half:
            raise FamilyError(f"expected {half} free coefficients for l={l}")
        c = {}
        for i, v in enumerate(values, start=1):
            c[i] = v
            c[l - i] = -v
        if l % 2 == 0:
            c[l // 2] = 0
        return cls(l, c, kappa)

    def at(self, i: int):
        i %= self.l
        return 0 if i == 0 else self.c[i]

    def free(self) -> list:
        return [self.c[i] for i in range(1, (self.l - 1) // 2 + 1)]


@dataclass
class PhiPoissonSolution:
    family: CoefficientFamily
    residual: float
    branch_label: str
    recurrence: float = 0.0


# -- building blocks ---------------------------------------------------------------

def _phi_terms(sc: StructureConstants, roots_ok, scale) -> dict:
    rs = sc.rs
    norms = rs.norms
    acc: dict = {}
    for (a, b), s in rs.sums.items():
        if not (roots_ok(a) and roots_ok(b) and roots_ok(s)):
            continue
        sign, mono = canonical((a, b, rs.neg(s)))
        acc[mono] = acc.get(mono, 0) + sign * scale * sc.N(a, b) * norms[a] * norms[b] / 4
    return acc


def phi_tilde(model: MlaModel) -> Multivector:
    """The invariant 3-vector on m, scaled so that [[s, s]] = kappa^2 phi_tilde is the recurrence."""
    hit = model._cache.get("phi")
    if hit is None:
        keep = model.keep
        hit = Multivector._raw(3, _phi_terms(model.sc, keep.__getitem__, PHI_SCALE))
        model._cache["phi"] = hit
    return hit


def invariant_bivector(model: MlaModel, family: CoefficientFamily) -> Multivector:
    """Sum over classes i and roots b of class i of c[i] X_b ^ X_-b."""
    if family.l != model.l:
        raise FamilyError(f"family has l={family.l}, model has l={model.l}")
    rs = model.rs
    acc: dict = {}
    for i, members in model.classes.items():
        ci = family.c[i]
        if not ci:
            continue
        for b in members:
            sign, mono = canonical((b, rs.neg(b)))
            acc[mono] = acc.get(mono, 0) + sign * ci * (rs.norms[b] / 2)
    return Multivector._raw(2, acc)


def recurrence_residual(model: MlaModel, family: CoefficientFamily) -> float:
    """max |c[i+j](c[i] + c[j]) - c[i] c[j] - kappa^2| over class pairs with i + j != 0 mod l."""
    l = model.l
    k2 = family.kappa ** 2
    worst = 0.0
    for i in range(1, l):
        for j in range(1, l):
            if (i + j) % l == 0:
                continue
            ci, cj, cij = (complex(family.at(x)) for x in (i, j, i + j))
            worst = max(worst, abs(cij * (ci + cj) - ci * cj - k2))
    return worst


def verify_mcybe(model: MlaModel, v: Multivector, kappa: float = 1.0) -> float:
    """||proj_m [[v, v]] - kappa^2 phi_tilde||_inf, with the bracket taken in the full algebra."""
    if v.degree != 2:
        raise ValueError("verify_mcybe expects a bivector")
    keep = model.keep
    if any(not keep[x] for mono in v.terms for x in mono):
        raise ValueError("bivector is not supported on m")
    if not v.terms:
        return (kappa ** 2) * phi_tilde(model).norm_inf()
    w = project(schouten(model.sc, v, v), keep)
    return (w.to_complex() - phi_tilde(model).to_complex().scale(kappa ** 2)).norm_inf()


# -- exact polynomial helpers (coefficient lists, lowest degree first) ------------------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _padd(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def _pneg(p):
    return [-x for x in p]


def _pmul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def _pmod(p, q):
    p = list(p)
    while len(p) >= len(q):
        f = p[-1] / q[-1]
        shift = len(p) - len(q)
        for i, b in enumerate(q):
            p[shift + i] -= f * b
        p = _trim(p)
        if not p:
            break
    return p


def _pgcd(p, q):
    p, q = _trim(p), _trim(q)
    while q:
        p, q = q, _pmod(p, q)
    return [x / p[-1] for x in p] if p else p


def _radd(u, v):
    return (_padd(_pmul(u[0], v[1]), _pmul(v[0], u[1])), _pmul(u[1], v[1]))


def _rmul(u, v):
    return (_pmul(u[0], v[0]), _pmul(u[1], v[1]))


def _rneg(u):
    return (_pneg(u[0]), u[1])


def coefficient_polynomial(l: int) -> list[Fraction]:
    """Monic gcd of every constraint on x = c[1] at kappa = 1 (lowest degree first).

    c[k+1] is propagated from the pair (1, k); the remaining pairs, the
    antisymmetry c[l-i] = -c[i] and c[l/2] = 0 become polynomial constraints.
    """
    one = [Fraction(1)]
    c = {1: ([Fraction(0), Fraction(1)], one)}
    for k in range(1, l - 1):
        num = _radd(_rmul(c[1], c[k]), (one, one))
        den = _radd(c[1], c[k])
        c[k + 1] = (_pmul(num[0], den[1]), _pmul(num[1], den[0]))
    constraints = []
    for i in range(1, l):
        constraints.append(_radd(c[i], c[l - i])[0])
    for i in range(1, l):
        for j in range(1, l):
            k = (i + j) % l
            if k == 0:
                continue
            lhs = _rmul(c[k], _radd(c[i], c[j]))
            rhs = _radd(_rmul(c[i], c[j]), (one, one))
            constraints.append(_radd(lhs, _rneg(rhs))[0])
    g: list = []
    for p in constraints:
        g = _pgcd(g, p) if g else _pgcd(p, [])
    return g


def _propagate(l: int, x: complex, kappa: float) -> dict:
    c = {1: x}
    for k in range(1, l - 1):
        c[k + 1] = (c[1] * c[k] + kappa ** 2) / (c[1] + c[k])
    return c


def _branch_key(z: complex):
    return (round(z.real, 9), round(z.imag, 9))


def solve_phi_poisson(model: MlaModel, kappa: float = 1.0, accept: float = 1e-9,
                      reject: float = 1e-6) -> list[PhiPoissonSolution]:
    """All coefficient families solving the recurrence, ordered by (re, im) of c[1].

    For l = 2 there is no constraint and no room for a bivector: the zero
    family is returned.  A candidate whose residual lands between ``accept``
    and ``reject`` raises instead of being silently kept or dropped.
    """
    l = model.l
    if l == 2:
        fam = CoefficientFamily(2, {1: 0}, kappa)
        res = verify_mcybe(model, invariant_bivector(model, fam), kappa)
        return [PhiPoissonSolution(fam, res, "l2-zero", recurrence_residual(model, fam))]
    poly = coefficient_polynomial(l)
    if len(poly) < 2:
        return []
    roots = np.roots([float(x) for x in reversed(poly)])
    out = []
    for x in sorted((complex(r) for r in roots), key=_branch_key):
        if abs(x) < 1e-12:
            continue
        try:
            c = _propagate(l, x * kappa, kappa)
        except ZeroDivisionError:
            continue
        values = [c[i] for i in range(1, (l - 1) // 2 + 1)]
        fam = CoefficientFamily.from_half(l, values, kappa)
        rec = recurrence_residual(model, fam)
        if rec > reject:
            continue
        if rec > accept:
            raise ArithmeticError(f"recurrence residual {rec:.3e} is indeterminate")
        res = verify_mcybe(model, invariant_bivector(model, fam), kappa)
        out.append(PhiPoissonSolution(fam, res, f"l{l}-b{len(out)}", rec))
    return out


def perturbed(family: CoefficientFamily, delta: complex = 0.1) -> CoefficientFamily:
    """Copy of ``family`` with c[1] (and c[l-1]) shifted by ``delta``."""
    vals = list(family.free())
    if not vals:
        raise FamilyError("nothing to perturb for l=2")
    vals[0] = vals[0] + delta
    return CoefficientFamily.from_half(family.l, vals, family.kappa)


# -- Drinfeld-Jimbo ---------------------------------------------------------------

def drinfeld_jimbo_r(rs: RootSystem, sc: StructureConstants) -> Multivector:
    """Sum over positive roots a of X_a ^ X_-a."""
    acc = {}
    for a in rs.positive:
        sign, mono = canonical((a, rs.neg(a)))
        acc[mono] = acc.get(mono, 0) + sign * rs.norms[a] / 2
    return Multivector._raw(2, acc)


def phi_tilde_g(rs: RootSystem, sc: StructureConstants) -> Multivector:
    """Canonical invariant 3-vector sum_{i,j} x^i ^ x^j ^ [x_i, x_j] over Killing-dual bases.

    Its root part is minus the ordered-pair sum over all of the root system;
    the pairs (a, -a) contribute the Cartan part 3 sum_a t_a ^ X_-a ^ X_a.
    """
    acc = _phi_terms(sc, lambda k: True, Fraction(-1))
    R = len(rs.roots)
    for a, root in enumerate(rs.roots):
        na = rs.norms[a]
        for i, ai in enumerate(root):
            if not ai:
                continue
            sign, mono = canonical((R + i, rs.neg(a), a))
            acc[mono] = acc.get(mono, 0) + sign * 3 * ai * na / 2
    return Multivector._raw(3, acc)


@dataclass
class DJCheck:
    lam: Fraction
    residual: float
    invariant: bool
    cartan_terms: int
    bracket: Multivector = field(repr=False, default=None)


def verify_dj(rs: RootSystem, sc: StructureConstants) -> DJCheck:
    """[[r, r]] for the Drinfeld-Jimbo r: invariance, Cartan content and the fit against phi_tilde_g.

    Everything is exact; lambda is the least-squares constant <w, phi>/<phi, phi>.
    """
    r = drinfeld_jimbo_r(rs, sc)
    w = schouten(sc, r, r)
    invariant = all(adjoint_action(sc, x, w).is_zero() for x in range(sc.dim))
    phi = phi_tilde_g(rs, sc)
    num = sum((Fraction(c) * Fraction(phi.terms[m]) for m, c in w.terms.items() if m in phi.terms),
              Fraction(0))
    den = sum((Fraction(c) ** 2 for c in phi.terms.values()), Fraction(0))
    lam = num / den if den else Fraction(0)
    residual = (w - phi.scale(lam)).norm_inf()
    R = sc.num_roots
    cartan = sum(1 for mono in w.terms if any(x >= R for x in mono))
    return DJCheck(lam, float(residual), invariant, cartan, w)


def closed_form_l5() -> list[complex]:
    """Roots of 5c^4 + 10c^2 + 1 = 0 via c^2 = (-5 +- 2 sqrt 5)/5."""
    out = []
    for s in (1, -1):
        c2 = (-5 + s * 2 * math.sqrt(5)) / 5
        r = complex(0, math.sqrt(-c2))
        out += [r, -r]
    return sorted(out, key=_branch_key)


def closed_forms(l: int, kappa: float = 1.0) -> list[tuple[complex, ...]]:
    """Known free coefficients (c[1], ..., c[floor((l-1)/2)]) for l = 2..6, in branch order."""
    k = kappa
    if l == 2:
        forms = [()]
    elif l == 3:
        forms = [(s * 1j * k / math.sqrt(3),) for s in (1, -1)]
    elif l == 4:
        forms = [(s * 1j * k,) for s in (1, -1)]
    elif l == 5:
        forms = [(c * k, (c * c + 1) / (2 * c) * k) for c in closed_form_l5()]
    elif l == 6:
        forms = [(s * 1j * math.sqrt(3) * k, s * 1j * k / math.sqrt(3)) for s in (1, -1)]
    else:
        raise ValueError(f"no closed form recorded for l={l}")
    return sorted(forms, key=lambda f: _branch_key(f[0]) if f else (0, 0))
