"""Chevalley basis structure constants and the Lie bracket on basis elements.

Basis ordinals: ``0 .. R-1`` are the root vectors ``e_beta`` in root-system
order, ``R .. R+r-1`` are the Cartan elements ``t_i`` dual to the simple roots
(``beta(t_i) = (alpha_i, beta)``).

The integer table satisfies ``[e_a, e_b] = N_ab e_{a+b}`` with ``|N_ab| = p+1``
and ``[e_a, e_-a] = h_a = 2 t_a / (a, a)``.  The Killing-normalized vectors
``X_a = sqrt((a, a)/2) e_a`` have ``(X_a, X_-a) = 1`` and ``[X_a, X_-a] = t_a``;
their constants ``N_ab sqrt((a,a)(b,b) / (2 (a+b, a+b)))`` are the ones with full
cyclic symmetry.  For simply-laced types the two tables coincide.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .rootsys import RootSystem, root_string


@dataclass(eq=False)
class StructureConstants:
    rs: RootSystem
    n: dict[tuple[int, int], int]
    # coroot_pairing[i][k] = beta_k(t_i) = (alpha_i, beta_k)
    coroot_pairing: list[list[Fraction]]
    _table: dict = field(default_factory=dict, repr=False)

    @property
    def num_roots(self) -> int:
        return len(self.rs.roots)

    @property
    def dim(self) -> int:
        return self.num_roots + self.rs.rank

    def is_cartan(self, x: int) -> bool:
        return x >= self.num_roots

    def cartan(self, i: int) -> int:
        return self.num_roots + i

    def N(self, a: int, b: int) -> int:
        return self.n.get((a, b), 0)

    def h_expansion(self, a: int) -> tuple[tuple[int, Fraction], ...]:
        """[e_a, e_-a] as a combination of the t_i."""
        rs = self.rs
        root = rs.roots[a]
        scale = 2 / rs.norms[a]
        return tuple((self.cartan(i), scale * c) for i, c in enumerate(root) if c)

    def normalized_sq(self, a: int, b: int) -> tuple[int, Fraction]:
        """Sign and square of the Killing-normalized constant for the pair (a, b)."""
        c = self.N(a, b)
        if c == 0:
            return 0, Fraction(0)
        norms = self.rs.norms
        s = self.rs.add(a, b)
        ratio = norms[a] * norms[b] / (2 * norms[s])
        return (1 if c > 0 else -1), c * c * ratio

    def partners(self, x: int) -> tuple[int, ...]:
        """Basis ordinals y with [x, y] != 0."""
        hit = self._table.get(("partners", x))
        if hit is None:
            hit = self._table[("partners", x)] = tuple(y for y in range(self.dim) if self.bracket(x, y))
        return hit

    def bracket(self, x: int, y: int) -> tuple[tuple[int, object], ...]:
        key = (x, y)
        hit = self._table.get(key)
        if hit is None:
            hit = self._table[key] = self._bracket(x, y)
        return hit

    def _bracket(self, x, y):
        R = self.num_roots
        rs = self.rs
        if x >= R and y >= R:
            return ()
        if x >= R:
            w = self.coroot_pairing[x - R][y]
            return ((y, w),) if w else ()
        if y >= R:
            w = self.coroot_pairing[y - R][x]
            return ((x, -w),) if w else ()
        s = rs.add(x, y)
        if s is not None:
            return ((s, self.n[(x, y)]),)
        if rs.neg(x) == y:
            return self.h_expansion(x)
        return ()


def _pairing_matrix(rs: RootSystem) -> list[list[Fraction]]:
    return [[rs.pair(simple, r) for r in rs.roots] for simple in rs.simple_roots]


def build_structure_constants(rs: RootSystem) -> StructureConstants:
    """Integer Chevalley constants with +(p+1) on every extraspecial pair.

    Positive roots are processed by height; the remaining special pairs of each
    root are fixed by the four-root relation, other sign patterns by
    antisymmetry, ``N_{-a,-b} = -N_ab`` and the weighted cyclic relation
    ``N_ab/(c,c) = N_bc/(a,a) = N_ca/(b,b)`` for ``a+b+c = 0``.
    """
    roots = rs.roots
    norm = rs.norms
    positive = rs.positive
    is_pos = [sum(r) > 0 for r in roots]
    neg = [rs.neg(k) for k in range(len(roots))]
    npos: dict[tuple[int, int], int] = {}

    def get(x, y):
        if is_pos[x] and is_pos[y]:
            return npos[(x, y)]
        if not is_pos[x] and not is_pos[y]:
            return -npos[(neg[x], neg[y])]
        if not is_pos[x]:
            return -get(y, x)
        s = rs.add(x, y)
        if is_pos[s]:
            val = -norm[s] / norm[x] * npos[(neg[y], s)]
        else:
            z = neg[s]
            val = norm[z] / norm[y] * npos[(z, x)]
        assert val.denominator == 1
        return int(val)

    def term(a, b, c, d):
        # N_ab N_cd / (a+b, a+b), zero when a+b is not a root
        s = rs.add(a, b)
        if s is None:
            return Fraction(0)
        return Fraction(get(a, b) * get(c, d)) / norm[s]

    for xi in positive:
        specials = []
        for a in positive:
            if a >= xi:
                break
            b = rs.add(neg[a], xi)
            if b is not None and is_pos[b] and a < b:
                specials.append((a, b))
        if not specials:
            continue
        alpha, beta = specials[0]
        p, _ = root_string(rs, roots[alpha], roots[beta])
        npos[(alpha, beta)] = p + 1
        npos[(beta, alpha)] = -(p + 1)
        for gamma, delta in specials[1:]:
            inner = term(beta, neg[gamma], alpha, neg[delta]) + term(neg[gamma], alpha, beta, neg[delta])
            val = norm[xi] / npos[(alpha, beta)] * inner
            assert val.denominator == 1
            npos[(gamma, delta)] = int(val)
            npos[(delta, gamma)] = -int(val)

    n = {pair: get(*pair) for pair in rs.sums}
    return StructureConstants(rs, n, _pairing_matrix(rs))


# -- verification helpers ------------------------------------------------------

def bracket_combo(sc: StructureConstants, u: dict, v: dict) -> dict:
    """Bracket of two linear combinations {ordinal: coeff}."""
    out: dict = {}
    for x, cx in u.items():
        for y, cy in v.items():
            for z, c in sc.bracket(x, y):
                out[z] = out.get(z, 0) + cx * cy * c
    return {k: c for k, c in out.items() if c != 0}


def jacobi_residual(sc: StructureConstants, x: int, y: int, z: int) -> dict:
    """[[x,y],z] + [[y,z],x] + [[z,x],y] as a combination; empty when Jacobi holds."""
    total: dict = {}
    for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
        inner = dict(sc.bracket(a, b))
        for k, val in bracket_combo(sc, inner, {c: 1}).items():
            total[k] = total.get(k, 0) + val
    return {k: c for k, c in total.items() if c != 0}


def property_violations(sc: StructureConstants) -> list[str]:
    """Check the structure-constant identities over every ordered root pair.

    Tags: ``support`` (N_ab != 0 exactly when a+b is a root), ``antisym``
    (N_ba = -N_ab), ``negation`` (N_{-a,-b} = -N_ab), ``string`` (|N_ab| = p+1)
    and ``cyclic`` (N_ab = N_bc = N_ca for a+b+c = 0).  The cyclic identity is
    checked exactly on the Killing-normalized constants via sign and square, the
    rest on the integer table.  An empty list means everything holds.
    """
    rs = sc.rs
    R = len(rs.roots)
    bad = []
    for a in range(R):
        for b in range(R):
            if a == b or rs.neg(a) == b:
                continue
            s = rs.add(a, b)
            nab = sc.N(a, b)
            if (nab != 0) != (s is not None):
                bad.append(f"support:{a},{b}")
                continue
            if sc.N(b, a) != -nab:
                bad.append(f"antisym:{a},{b}")
            if sc.N(rs.neg(a), rs.neg(b)) != -nab:
                bad.append(f"negation:{a},{b}")
            if s is None:
                continue
            p, _ = root_string(rs, rs.roots[a], rs.roots[b])
            if abs(nab) != p + 1:
                bad.append(f"string:{a},{b}")
            c = rs.neg(s)
            ref = sc.normalized_sq(a, b)
            if sc.normalized_sq(b, c) != ref or sc.normalized_sq(c, a) != ref:
                bad.append(f"cyclic:{a},{b}")
    return bad


def jacobi_failures(sc: StructureConstants, samples: int | None = None, seed: int = 0) -> int:
    """Count basis triples violating Jacobi; all triples when ``samples`` is None."""
    dim = sc.dim
    if samples is None:
        triples = ((x, y, z) for x in range(dim) for y in range(x + 1, dim) for z in range(y + 1, dim))
    else:
        rng = random.Random(seed)
        triples = ((rng.randrange(dim), rng.randrange(dim), rng.randrange(dim)) for _ in range(samples))
    return sum(1 for t in triples if jacobi_residual(sc, *t))


def involution_failures(sc: StructureConstants) -> int:
    """Pairs where the Chevalley involution fails to commute with the bracket."""
    rs = sc.rs
    R = len(rs.roots)

    def theta(x):
        return (x, -1) if x >= R else (rs.neg(x), -1)

    bad = 0
    for x in range(sc.dim):
        for y in range(sc.dim):
            lhs = {}
            for z, c in sc.bracket(x, y):
                tz, sz = theta(z)
                lhs[tz] = lhs.get(tz, 0) + sz * c
            (tx, sx), (ty, sy) = theta(x), theta(y)
            rhs = {z: sx * sy * c for z, c in sc.bracket(tx, ty)}
            lhs = {k: v for k, v in lhs.items() if v}
            if lhs != {k: v for k, v in rhs.items() if v}:
                bad += 1
    return bad
