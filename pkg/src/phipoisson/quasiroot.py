"""Homogeneous models M_{l alpha}: quasi-root classes and invariant subspaces.

Fix a simple root ``alpha`` and a level ``l``.  Roots whose alpha-coefficient
is divisible by ``l`` form the subsystem ``omega_p`` (the roots of the
stabilizer ``k``); every other root lands in the class of its coefficient mod
``l``.  The complement ``m`` is spanned by the root vectors of the classes.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

from .chevalley import StructureConstants
from .linalg import SparseEchelon, exact_rank
from .multivec import Multivector, adjoint_action, canonical
from .rootsys import RootSystem, highest_root


class ModelError(ValueError):
    pass


@dataclass(eq=False)
class MlaModel:
    rs: RootSystem
    sc: StructureConstants
    alpha_index: int
    l: int
    omega_p: frozenset
    classes: dict
    m_basis: tuple
    _cache: dict = field(default_factory=dict, repr=False)

    @cached_property
    def residue(self) -> tuple[int, ...]:
        """Class index of every root ordinal; 0 for roots of omega_p."""
        return tuple(r[self.alpha_index] % self.l for r in self.rs.roots)

    @cached_property
    def keep(self) -> list[bool]:
        """Mask over all basis ordinals selecting the root vectors of m."""
        mask = [False] * self.sc.dim
        for k in self.m_basis:
            mask[k] = True
        return mask

    @cached_property
    def raising(self) -> tuple[int, ...]:
        """Simple roots of omega_p relative to the ambient positive system."""
        rs = self.rs
        pos = [k for k in self.omega_p if sum(rs.roots[k]) > 0]
        pos_set = set(pos)
        decomposable = {rs.add(a, b) for a in pos for b in pos if rs.add(a, b) in pos_set}
        return tuple(sorted(k for k in pos if k not in decomposable))

    def describe(self) -> str:
        return f"{self.rs.lie_type}/node{self.alpha_index + 1}/l={self.l}"


def alpha_multiplicity(rs: RootSystem, alpha_index: int) -> int:
    return highest_root(rs)[alpha_index]


def build_model(rs: RootSystem, sc: StructureConstants, alpha_index: int, l: int) -> MlaModel:
    if not 0 <= alpha_index < rs.rank:
        raise ModelError(f"node index {alpha_index} outside 0..{rs.rank - 1}")
    top = alpha_multiplicity(rs, alpha_index)
    if not 2 <= l <= top:
        raise ModelError(f"level {l} outside [2, {top}] for node {alpha_index + 1} of {rs.lie_type}")
    classes: dict[int, list[int]] = {i: [] for i in range(1, l)}
    omega = []
    for k, r in enumerate(rs.roots):
        res = r[alpha_index] % l
        (omega.append(k) if res == 0 else classes[res].append(k))
    m_basis = tuple(sorted(k for ks in classes.values() for k in ks))
    return MlaModel(rs, sc, alpha_index, l, frozenset(omega),
                    {i: tuple(ks) for i, ks in classes.items()}, m_basis)


# -- structural checks ---------------------------------------------------------

def connectivity_check(model: MlaModel, i: int, omega_p=None) -> bool:
    """Is classes[i] connected by steps beta -> beta + gamma with gamma in omega_p?"""
    if not 1 <= i < model.l:
        raise ModelError(f"class index {i} outside 1..{model.l - 1}")
    members = model.classes[i]
    if not members:
        return True
    steps = model.omega_p if omega_p is None else frozenset(omega_p)
    inside = set(members)
    rs = model.rs
    seen = {members[0]}
    stack = [members[0]]
    while stack:
        b = stack.pop()
        for g in steps:
            s = rs.add(b, g)
            if s is not None and s in inside and s not in seen:
                seen.add(s)
                stack.append(s)
    return len(seen) == len(inside)


def bracket_image_check(model: MlaModel, i: int, j: int) -> bool:
    """Do brackets of m_i with m_j span exactly m_{i+j}?"""
    l = model.l
    if (i + j) % l == 0:
        raise ModelError("bracket_image_check needs i + j != 0 mod l")
    target = set(model.classes[(i + j) % l])
    rows = []
    for x in model.classes[i]:
        for y in model.classes[j]:
            for z, c in model.sc.bracket(x, y):
                if z not in target:
                    return False
                rows.append({z: c})
    return exact_rank(rows) == len(target)


# -- invariant subspaces ---------------------------------------------------------

@dataclass
class InvariantBasis:
    degree: int
    theta_sign: int
    vectors: list
    # (class-type, number of vectors) per theta-orbit of class types
    blocks: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.vectors)


def weight_zero_monomials(model: MlaModel, p: int) -> list[tuple[int, ...]]:
    """Sorted monomials of p distinct m-roots whose root vectors sum to zero."""
    rs = model.rs
    m = model.m_basis
    roots = rs.roots
    neg = rs.negation
    if p == 2:
        return sorted((b, neg[b]) for b in m if b < neg[b])
    if p == 3:
        keep = model.keep
        out = []
        for ia, a in enumerate(m):
            for b in m[ia + 1:]:
                s = rs.add(a, b)
                if s is None:
                    continue
                c = neg[s]
                if c > b and keep[c]:
                    out.append((a, b, c))
        return sorted(out)
    if p == 4:
        groups = defaultdict(list)
        for ia, a in enumerate(m):
            ra = roots[a]
            for b in m[ia + 1:]:
                groups[tuple(x + y for x, y in zip(ra, roots[b]))].append((a, b))
        out = []
        for key, pairs in groups.items():
            opp = groups.get(tuple(-x for x in key))
            if not opp:
                continue
            for a, b in pairs:
                for c, d in opp:
                    if b < c:
                        out.append((a, b, c, d))
        return sorted(out)
    raise ModelError(f"degree {p} not supported (2, 3 or 4)")


def class_type(model: MlaModel, mono) -> tuple[int, ...]:
    res = model.residue
    return tuple(sorted(res[x] for x in mono))


def _theta_type(model: MlaModel, t):
    l = model.l
    return tuple(sorted((l - i) % l for i in t))


def _theta_monomial(model: MlaModel, mono):
    neg = model.rs.negation
    s, m = canonical(tuple(neg[x] for x in mono))
    return (s if len(mono) % 2 == 0 else -s), m


def _theta_generators(model: MlaModel, monos: list, theta_sign: int) -> list[dict]:
    """Spanning set of the theta-eigenspace on ``monos``: M + sign * theta(M) per orbit."""
    seen = set()
    gens = []
    for m in monos:
        if m in seen:
            continue
        sgn, image = _theta_monomial(model, m)
        seen.update((m, image))
        if image == m:
            if sgn == theta_sign:
                gens.append({m: 1})
        else:
            gens.append({m: 1, image: theta_sign * sgn})
    return gens


def _block_kernel(model: MlaModel, monos: list, theta_sign: int) -> list[dict]:
    """Invariant theta-eigenvectors supported on ``monos``, as {monomial: int}."""
    sc = model.sc
    gens = _theta_generators(model, monos, theta_sign)
    ech = SparseEchelon()
    for g in model.raising:
        rows: dict = defaultdict(dict)
        for k, gen in enumerate(gens):
            for m, w in gen.items():
                for j, y in enumerate(m):
                    for z, b in sc.bracket(g, y):
                        s, t = canonical(m[:j] + (z,) + m[j + 1:])
                        if s:
                            r = rows[t]
                            r[k] = r.get(k, 0) + s * b * w
        for t in sorted(rows):
            ech.add({c: v for c, v in rows[t].items() if v})
    out = []
    for vec in ech.nullspace(range(len(gens))):
        acc: dict = {}
        for k, v in vec.items():
            for m, w in gens[k].items():
                acc[m] = acc.get(m, 0) + v * w
        out.append({m: c for m, c in acc.items() if c})
    return out


def invariant_subspace(model: MlaModel, p: int, theta_sign: int) -> InvariantBasis:
    """Exact basis of the k-invariant weight-zero p-vectors on m with theta = theta_sign.

    Weight zero takes care of the Cartan part of k.  For the root part it is
    enough to impose annihilation by the raising operators of the simple roots
    of omega_p: a weight-zero highest-weight vector of a finite-dimensional
    module spans a trivial summand.  Callers wanting the full generator set can
    confirm with :func:`invariance_defect`.
    """
    if theta_sign not in (1, -1):
        raise ModelError("theta_sign must be +1 or -1")
    key = ("inv", p, theta_sign)
    hit = model._cache.get(key)
    if hit is not None:
        return hit
    by_type = defaultdict(list)
    for mono in weight_zero_monomials(model, p):
        by_type[class_type(model, mono)].append(mono)
    vectors = []
    blocks = []
    done = set()
    for t in sorted(by_type):
        if t in done:
            continue
        tt = _theta_type(model, t)
        done.update((t, tt))
        monos = sorted(set(by_type[t]) | set(by_type.get(tt, [])))
        kernel = _block_kernel(model, monos, theta_sign)
        for vec in kernel:
            vectors.append(Multivector(p, vec))
        blocks.append((t, len(kernel)))
    basis = InvariantBasis(p, theta_sign, vectors, blocks)
    model._cache[key] = basis
    return basis


def invariance_defect(model: MlaModel, v: Multivector) -> list[int]:
    """Generators of k (root ordinals of omega_p) that fail to annihilate ``v``.

    Cartan elements are covered by the weight check, reported as ``-1``.
    """
    bad = []
    weights = {_weight(model, mono) for mono in v.terms}
    if weights and weights != {(0,) * model.rs.rank}:
        bad.append(-1)
    for g in sorted(model.omega_p):
        if adjoint_action(model.sc, g, v):
            bad.append(g)
    return bad


def _weight(model: MlaModel, mono) -> tuple[int, ...]:
    roots = model.rs.roots
    R = len(roots)
    w = [0] * model.rs.rank
    for x in mono:
        if x < R:
            for i, c in enumerate(roots[x]):
                w[i] += c
    return tuple(w)
