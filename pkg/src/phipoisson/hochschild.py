"""Hochschild cochains on small finite-dimensional algebras.

A p-cochain is a dense array of shape ``(dim,)*p + (dim,)``:
``xi[i1, ..., ip, k]`` is the e_k-coordinate of ``xi(e_i1, ..., e_ip)``.
Entries are Python ints or Fractions held in object arrays, so every identity
is checked exactly.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import exact_nullspace


class AlgebraError(ValueError):
    pass


def _zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


@dataclass
class FiniteCommAlgebra:
    """Unital associative algebra given by ``mult[i, j, k]`` = coefficient of e_k in e_i e_j.

    ``strict`` demands commutativity; the noncommutative control algebra is
    built with ``strict=False``.
    """

    name: str
    dim: int
    mult: np.ndarray
    unit: tuple
    strict: bool = True

    def __post_init__(self):
        if self.mult.shape != (self.dim,) * 3:
            raise AlgebraError("structure cube has the wrong shape")
        if not self.is_associative():
            raise AlgebraError(f"{self.name} is not associative")
        if not self.is_unital():
            raise AlgebraError(f"{self.name}: unit does not act as identity")
        if self.strict and not self.is_commutative():
            raise AlgebraError(f"{self.name} is not commutative")

    def product(self, a, b) -> np.ndarray:
        return np.tensordot(np.tensordot(np.asarray(a, dtype=object), self.mult, axes=([0], [0])),
                            np.asarray(b, dtype=object), axes=([0], [0]))

    def is_commutative(self) -> bool:
        return bool(np.all(self.mult == self.mult.transpose(1, 0, 2)))

    def is_associative(self) -> bool:
        # (e_i e_j) e_k versus e_i (e_j e_k)
        left = np.tensordot(self.mult, self.mult, axes=([2], [0]))          # i j k out
        right = np.tensordot(self.mult, self.mult, axes=([1], [2]))         # i out j k
        right = right.transpose(0, 2, 3, 1)
        return bool(np.all(left == right))

    def is_unital(self) -> bool:
        u = np.asarray(self.unit, dtype=object)
        eye = _zeros((self.dim, self.dim))
        for i in range(self.dim):
            eye[i, i] = 1
        left = np.tensordot(u, self.mult, axes=([0], [0]))
        right = np.tensordot(u, self.mult, axes=([0], [1]))
        return bool(np.all(left == eye) and np.all(right == eye))


@dataclass
class Cochain:
    arity: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.ndim != self.arity + 1:
            raise AlgebraError("coefficient array does not match the arity")

    @property
    def dim(self) -> int:
        return self.coeffs.shape[-1]

    def __add__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.arity, self.coeffs + other.coeffs)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return Cochain(self.arity, self.coeffs - other.coeffs)

    def scale(self, s) -> "Cochain":
        return Cochain(self.arity, self.coeffs * s)

    def is_zero(self) -> bool:
        return not any(x != 0 for x in self.coeffs.flat)

    def __eq__(self, other):
        if not isinstance(other, Cochain):
            return NotImplemented
        return self.arity == other.arity and (self - other).is_zero()


def zero_cochain(dim: int, p: int) -> Cochain:
    return Cochain(p, _zeros((dim,) * (p + 1)))


def random_cochain(dim: int, p: int, rng: random.Random, bound: int = 3) -> Cochain:
    arr = _zeros((dim,) * (p + 1))
    for idx in itertools.product(range(dim), repeat=p + 1):
        arr[idx] = rng.randint(-bound, bound)
    return Cochain(p, arr)


def coboundary(alg: FiniteCommAlgebra, xi: Cochain) -> Cochain:
    """a0 xi(a1..ap) + sum_k (-1)^k xi(.., a_{k-1} a_k, ..) + (-1)^{p+1} xi(a0..a_{p-1}) ap."""
    p = xi.arity
    M = alg.mult
    x = xi.coeffs
    # a0 * xi(a1..ap): axes (a0, out, a1..ap) -> (a0, a1..ap, out)
    first = np.tensordot(M, x, axes=([1], [p]))
    order = [0] + list(range(2, p + 2)) + [1]
    total = first.transpose(order)
    for k in range(1, p + 1):
        # xi with the product a_{k-1} a_k fed into its slot k-1
        t = np.tensordot(M, x, axes=([2], [k - 1]))   # (a_{k-1}, a_k, xi axes without k-1)
        rest = list(range(2, p + 2))                   # remaining xi axes incl. output
        axes = rest[:k - 1] + [0, 1] + rest[k - 1:]
        total = total + (-1) ** k * t.transpose(axes)
    last = np.tensordot(x, M, axes=([p], [0]))         # (a0..a_{p-1}, ap, out)
    total = total + (-1) ** (p + 1) * last
    return Cochain(p + 1, total)


def tau(xi: Cochain) -> Cochain:
    p = xi.arity
    sign = -1 if (p * (p + 1) // 2) % 2 else 1
    axes = list(range(p - 1, -1, -1)) + [p]
    return Cochain(p, sign * xi.coeffs.transpose(axes))


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def alt(xi: Cochain) -> Cochain:
    """(1/p!) sum over permutations of sign * xi with permuted arguments."""
    p = xi.arity
    acc = _zeros(xi.coeffs.shape)
    for perm in itertools.permutations(range(p)):
        acc = acc + _perm_sign(perm) * xi.coeffs.transpose(list(perm) + [p])
    f = Fraction(1, math.factorial(p))
    return Cochain(p, np.vectorize(lambda v: v * f, otypes=[object])(acc) if acc.size else acc)


def parity_split(xi: Cochain) -> tuple[Cochain, Cochain]:
    """(xi_plus, xi_minus) with tau fixing the first and negating the second."""
    t = tau(xi)
    half = Fraction(1, 2)
    return (xi + t).scale(half), (xi - t).scale(half)


def is_skew(xi: Cochain) -> bool:
    p = xi.arity
    for i in range(p - 1):
        axes = list(range(p + 1))
        axes[i], axes[i + 1] = axes[i + 1], axes[i]
        if not np.all(xi.coeffs == -xi.coeffs.transpose(axes)):
            return False
    return True


def leibniz_defect(alg: FiniteCommAlgebra, xi: Cochain, slot: int) -> np.ndarray:
    """xi(.., a'a'', ..) - a' xi(.., a'', ..) - a'' xi(.., a', ..) on basis elements."""
    p = xi.arity
    M = alg.mult
    x = xi.coeffs
    # lhs axes: (a', a'', other xi axes incl. out) -> place a', a'' at slot, slot+1
    lhs = np.tensordot(M, x, axes=([2], [slot]))
    rest = list(range(2, p + 2))
    lhs = lhs.transpose(rest[:slot] + [0, 1] + rest[slot:])
    # a' * xi(.., a'', ..): M[a', n, out] xi[.., a'', .., n]
    t = np.tensordot(x, M, axes=([p], [1]))            # (xi args..., a', out)
    args = list(range(p))
    # want (args before slot, a', a''=xi arg at slot, args after, out)
    a1 = t.transpose(args[:slot] + [p] + [slot] + args[slot + 1:] + [p + 1])
    a2 = t.transpose(args[:slot] + [slot] + [p] + args[slot + 1:] + [p + 1])
    return lhs - a1 - a2


def is_polyderivation(alg: FiniteCommAlgebra, xi: Cochain) -> bool:
    return all(not np.any(leibniz_defect(alg, xi, k) != 0) for k in range(xi.arity))


def skew_cocycle_is_polyderivation(alg: FiniteCommAlgebra, xi: Cochain) -> bool:
    if not is_skew(xi):
        raise AlgebraError("cochain is not skew symmetric")
    if not coboundary(alg, xi).is_zero():
        raise AlgebraError("cochain is not a cocycle")
    return is_polyderivation(alg, xi)


def skew_cocycles(alg: FiniteCommAlgebra, p: int) -> list[Cochain]:
    """Exact basis of skew-symmetric p-cocycles, by a kernel solve on skew generators."""
    d = alg.dim
    gens = []
    for idx in itertools.combinations(range(d), p):
        for out in range(d):
            arr = _zeros((d,) * (p + 1))
            for perm in itertools.permutations(range(p)):
                arr[tuple(idx[i] for i in perm) + (out,)] = _perm_sign(perm)
            gens.append(Cochain(p, arr))
    images = [coboundary(alg, g).coeffs.ravel() for g in gens]
    n_rows = images[0].size if images else 0
    rows = []
    for r in range(n_rows):
        row = {c: images[c][r] for c in range(len(gens)) if images[c][r] != 0}
        if row:
            rows.append(row)
    out = []
    for vec in exact_nullspace(rows, range(len(gens))):
        acc = zero_cochain(d, p)
        for c, v in vec.items():
            acc = acc + gens[c].scale(v)
        out.append(acc)
    return out


def cocycles(alg: FiniteCommAlgebra, p: int) -> list[Cochain]:
    """Exact basis of all p-cocycles."""
    d = alg.dim
    size = d ** (p + 1)
    gens = []
    for flat in range(size):
        arr = _zeros((d,) * (p + 1))
        arr.flat[flat] = 1
        gens.append(Cochain(p, arr))
    images = [coboundary(alg, g).coeffs.ravel() for g in gens]
    rows = []
    for r in range(images[0].size):
        row = {c: images[c][r] for c in range(size) if images[c][r] != 0}
        if row:
            rows.append(row)
    out = []
    for vec in exact_nullspace(rows, range(size)):
        arr = _zeros((d,) * (p + 1))
        for c, v in vec.items():
            arr.flat[c] = v
        out.append(Cochain(p, arr))
    return out


# -- test algebras ----------------------------------------------------------------

def truncated_polynomial(n: int) -> FiniteCommAlgebra:
    """Q[x]/(x^n) with basis 1, x, ..., x^{n-1}."""
    m = _zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            if i + j < n:
                m[i, j, i + j] = 1
    return FiniteCommAlgebra(f"Q[x]/(x^{n})", n, m, tuple(int(k == 0) for k in range(n)))


def square_zero(k: int = 2) -> FiniteCommAlgebra:
    """Q[x1..xk] modulo all quadratic monomials; basis 1, x1, ..., xk."""
    n = k + 1
    m = _zeros((n, n, n))
    for i in range(n):
        m[0, i, i] = 1
        m[i, 0, i] = 1
    return FiniteCommAlgebra(f"Q[x1..x{k}]/(deg 2)", n, m, tuple(int(i == 0) for i in range(n)))


def upper_triangular() -> FiniteCommAlgebra:
    """2x2 upper-triangular matrices, basis E11, E12, E22 (noncommutative control)."""
    m = _zeros((3, 3, 3))
    m[0, 0, 0] = 1   # E11 E11 = E11
    m[0, 1, 1] = 1   # E11 E12 = E12
    m[1, 2, 1] = 1   # E12 E22 = E12
    m[2, 2, 2] = 1   # E22 E22 = E22
    return FiniteCommAlgebra("UT2", 3, m, (1, 0, 1), strict=False)


def test_algebras() -> list[FiniteCommAlgebra]:
    return [truncated_polynomial(3), square_zero(2), truncated_polynomial(4)]


# -- identity suite ---------------------------------------------------------------

@dataclass
class LabResult:
    algebra: str
    cochains: int
    d_squared: int
    tau_commutes: int
    alt_d: int
    tau_involution: int
    skew_cocycles: int
    non_polyderivations: int

    @property
    def failures(self) -> int:
        return (self.d_squared + self.tau_commutes + self.alt_d + self.tau_involution
                + self.non_polyderivations)


def run_lab(alg: FiniteCommAlgebra, count: int = 200, seed: int = 0, max_arity: int = 3) -> LabResult:
    """Check d^2 = 0, tau d = d tau, Alt d = 0 and tau^2 = 1 on seeded random cochains."""
    rng = random.Random(f"{seed}:{alg.name}")
    bad_dd = bad_tau = bad_alt = bad_inv = 0
    for k in range(count):
        p = k % (max_arity + 1)
        xi = random_cochain(alg.dim, p, rng)
        dxi = coboundary(alg, xi)
        bad_dd += not coboundary(alg, dxi).is_zero()
        bad_tau += not (tau(dxi) == coboundary(alg, tau(xi)))
        bad_alt += not alt(dxi).is_zero()
        bad_inv += not (tau(tau(xi)) == xi)
    skew = [c for p in (1, 2) for c in skew_cocycles(alg, p)]
    bad_poly = sum(1 for c in skew if not skew_cocycle_is_polyderivation(alg, c))
    return LabResult(alg.name, count, bad_dd, bad_tau, bad_alt, bad_inv, len(skew), bad_poly)


def alt_d_violations(alg: FiniteCommAlgebra, count: int = 200, seed: int = 0, max_arity: int = 3) -> int:
    """Number of seeded random cochains with Alt(d xi) != 0."""
    rng = random.Random(f"{seed}:{alg.name}")
    bad = 0
    for k in range(count):
        xi = random_cochain(alg.dim, k % (max_arity + 1), rng)
        bad += not alt(coboundary(alg, xi)).is_zero()
    return bad
