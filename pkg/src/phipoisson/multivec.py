"""Sparse exterior algebra over the Chevalley basis.

A monomial is a strictly increasing tuple of basis ordinals (see
:mod:`phipoisson.chevalley` for the numbering).  A :class:`Multivector` maps
monomials of one degree to scalars; scalars may be ``int``/``Fraction``,
:class:`GaussianRational` or ``complex``.  Float coefficients whose magnitude
falls below ``FLOAT_ZERO`` are dropped.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable

from .chevalley import StructureConstants

FLOAT_ZERO = 1e-14


class GaussianRational:
    """Exact element of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, Rational):
            return GaussianRational(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return complex(self) + other
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return complex(self) * other
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return complex(self) / other
        d = o.re * o.re + o.im * o.im
        return self * GaussianRational(o.re / d, -o.im / d)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return complex(self) == other
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


def _is_zero(c) -> bool:
    if isinstance(c, (complex, float)):
        return abs(c) < FLOAT_ZERO
    return not c


def canonical(seq) -> tuple[int, tuple[int, ...]]:
    """Sort a factor list; returns (sign, monomial) or (0, ()) on a repeated factor."""
    a = list(seq)
    sign = 1
    for i in range(1, len(a)):
        x = a[i]
        j = i - 1
        while j >= 0 and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
            sign = -sign
        if j >= 0 and a[j] == x:
            return 0, ()
        a[j + 1] = x
    return sign, tuple(a)


class Multivector:
    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: dict | None = None):
        self.degree = degree
        self.terms = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != degree:
                    raise ValueError(f"monomial {mono} has wrong degree for {degree}")
                if not _is_zero(c):
                    self.terms[mono] = c

    @classmethod
    def from_factors(cls, factors: Iterable[int], coeff=1) -> "Multivector":
        factors = list(factors)
        sign, mono = canonical(factors)
        if not sign:
            return cls(len(factors))
        return cls(len(factors), {mono: sign * coeff})

    @classmethod
    def _raw(cls, degree, acc) -> "Multivector":
        mv = cls.__new__(cls)
        mv.degree = degree
        mv.terms = {k: c for k, c in acc.items() if not _is_zero(c)}
        return mv

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self):
        return iter(self.terms.items())

    def __add__(self, other: "Multivector") -> "Multivector":
        if other.degree != self.degree and self.terms and other.terms:
            raise ValueError("degree mismatch")
        acc = dict(self.terms)
        for k, c in other.terms.items():
            acc[k] = acc.get(k, 0) + c
        return Multivector._raw(self.degree if self.terms else other.degree, acc)

    def __neg__(self):
        return Multivector._raw(self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "Multivector":
        return Multivector._raw(self.degree, {k: s * c for k, c in self.terms.items()})

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return (self - other).is_zero()

    def norm_inf(self) -> float:
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)

    def map_coeffs(self, f: Callable) -> "Multivector":
        return Multivector._raw(self.degree, {k: f(c) for k, c in self.terms.items()})

    def to_complex(self) -> "Multivector":
        return self.map_coeffs(complex)

    def weight(self, sc: StructureConstants, mono: tuple[int, ...]) -> tuple[int, ...]:
        roots = sc.rs.roots
        w = [0] * sc.rs.rank
        for x in mono:
            if x < len(roots):
                for i, c in enumerate(roots[x]):
                    w[i] += c
        return tuple(w)

    def records(self) -> list[tuple[list[int], float, float]]:
        """Canonical serialization: (ordinals, re, im) sorted by monomial."""
        out = []
        for mono in sorted(self.terms):
            c = complex(self.terms[mono])
            out.append((list(mono), c.real, c.imag))
        return out

    def __repr__(self):
        return f"Multivector(degree={self.degree}, terms={len(self.terms)})"


def basis_vector(x: int, coeff=1) -> Multivector:
    return Multivector(1, {(x,): coeff})


def wedge(u: Multivector, v: Multivector) -> Multivector:
    acc: dict = {}
    for mu, cu in u.terms.items():
        for mv, cv in v.terms.items():
            sign, mono = canonical(mu + mv)
            if sign:
                acc[mono] = acc.get(mono, 0) + sign * cu * cv
    return Multivector._raw(u.degree + v.degree, acc)


def schouten(sc: StructureConstants, u: Multivector, v: Multivector,
             keep: list[bool] | None = None) -> Multivector:
    """Schouten bracket; ``keep`` restricts the output to monomials whose factors all pass.

    With ``keep`` equal to a subspace mask this equals projecting the full bracket
    afterwards, since the projection acts monomial by monomial.

    Convention: [[X_1..X_p, Y_1..Y_q]] = sum_{i,j} (-1)^{i+j} [X_i, Y_j] ^ (X without X_i) ^ (Y without Y_j).
    The factors of ``v`` are indexed so each X_i only meets the Y_j it has a
    nonzero bracket with.
    """
    if u.degree < 1 or v.degree < 1:
        raise ValueError("Schouten bracket needs degrees >= 1")
    index: dict = {}
    for mv, cv in v.terms.items():
        for j, y in enumerate(mv):
            index.setdefault(y, []).append((mv, j, cv))
    acc: dict = {}
    for mu, cu in u.terms.items():
        for i, x in enumerate(mu):
            rest_x = mu[:i] + mu[i + 1:]
            if keep is not None and not all(keep[z] for z in rest_x):
                continue
            for y in sc.partners(x):
                hits = index.get(y)
                if not hits:
                    continue
                br = sc.bracket(x, y)
                if keep is not None:
                    br = tuple((z, c) for z, c in br if keep[z])
                    if not br:
                        continue
                for mv, j, cv in hits:
                    rest_y = mv[:j] + mv[j + 1:]
                    if keep is not None and not all(keep[z] for z in rest_y):
                        continue
                    rest = rest_x + rest_y
                    coef = (cu * cv) if (i + j) % 2 == 0 else -(cu * cv)
                    for z, c in br:
                        s, mono = canonical((z,) + rest)
                        if s:
                            acc[mono] = acc.get(mono, 0) + s * c * coef
    return Multivector._raw(u.degree + v.degree - 1, acc)


def adjoint_action(sc: StructureConstants, x: int, v: Multivector) -> Multivector:
    """Action of the basis element ``x`` on ``v``, extended as a derivation."""
    if v.degree == 0:
        return Multivector(0)
    acc: dict = {}
    for mono, c in v.terms.items():
        for j, y in enumerate(mono):
            for z, b in sc.bracket(x, y):
                s, m = canonical(mono[:j] + (z,) + mono[j + 1:])
                if s:
                    acc[m] = acc.get(m, 0) + s * b * c
    return Multivector._raw(v.degree, acc)


def cartan_involution(sc: StructureConstants, v: Multivector) -> Multivector:
    """e_a -> -e_{-a}, t -> -t applied factorwise."""
    R = sc.num_roots
    neg = sc.rs.negation
    sign = -1 if v.degree % 2 else 1
    acc: dict = {}
    for mono, c in v.terms.items():
        s, m = canonical(tuple(neg[x] if x < R else x for x in mono))
        acc[m] = acc.get(m, 0) + s * sign * c
    return Multivector._raw(v.degree, acc)


def project(v: Multivector, keep: list[bool]) -> Multivector:
    return Multivector._raw(v.degree, {m: c for m, c in v.terms.items() if all(keep[x] for x in m)})


def lie_bracket(sc: StructureConstants, u: Multivector, v: Multivector) -> Multivector:
    """Degree-one bracket, identical to :func:`schouten` on vectors."""
    if u.degree != 1 or v.degree != 1:
        raise ValueError("lie_bracket takes two vectors")
    return schouten(sc, u, v)
