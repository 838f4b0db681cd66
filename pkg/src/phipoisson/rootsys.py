"""Root systems of the simple Lie algebras A-G (Bourbaki node labels).

Roots are integer coefficient vectors over the simple roots.  The bilinear
form is normalized so that long roots have squared length 2.

E8 labels follow Bourbaki: the chain is 1-3-4-5-6-7-8 and node 2 hangs off
node 4.  A diagram drawn as a 7-chain with the branch under the third chain
node therefore maps as

    chain positions (a1, ..., a7; branch) -> nodes (1, 3, 4, 5, 6, 7, 8; 2)

see :func:`e8_from_chain_marks`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from pathlib import Path
from typing import Sequence

CACHE_FORMAT_VERSION = 1

_RANK_RULES = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}

MAX_RANK = 8


class RootSystemError(ValueError):
    pass


@dataclass(frozen=True)
class SimpleLieType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in _RANK_RULES:
            raise RootSystemError(f"unknown family {self.family!r}")
        if not isinstance(self.rank, int) or not _RANK_RULES[self.family](self.rank):
            raise RootSystemError(f"invalid rank {self.rank} for family {self.family}")

    @classmethod
    def parse(cls, text: str) -> "SimpleLieType":
        text = text.strip().upper()
        if len(text) < 2 or not text[1:].isdigit():
            raise RootSystemError(f"cannot parse Lie type {text!r}")
        return cls(text[0], int(text[1:]))

    def __str__(self):
        return f"{self.family}{self.rank}"


def _simple_root_form(t: SimpleLieType) -> list[list[Fraction]]:
    """Gram matrix (alpha_i, alpha_j) of the simple roots, long roots of length 2."""
    n = t.rank
    lengths = [Fraction(2)] * n
    edges: list[tuple[int, int]] = []
    f = t.family
    if f in "ABC":
        edges = [(i, i + 1) for i in range(n - 1)]
        if f == "B":
            lengths[n - 1] = Fraction(1)
        elif f == "C":
            lengths = [Fraction(1)] * (n - 1) + [Fraction(2)]
    elif f == "D":
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    elif f == "E":
        # 1-3, 3-4, 2-4, 4-5, 5-6, ... (0-based below)
        edges = [(0, 2), (2, 3), (1, 3)] + [(i, i + 1) for i in range(3, n - 1)]
    elif f == "F":
        edges = [(0, 1), (1, 2), (2, 3)]
        lengths = [Fraction(2), Fraction(2), Fraction(1), Fraction(1)]
    elif f == "G":
        edges = [(0, 1)]
        lengths = [Fraction(2, 3), Fraction(2)]
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = lengths[i]
    for i, j in edges:
        gram[i][j] = gram[j][i] = -max(lengths[i], lengths[j]) / 2
    return gram


@dataclass(frozen=True)
class CartanMatrix:
    entries: tuple[tuple[int, ...], ...]
    symmetrizer: tuple[Fraction, ...]

    @property
    def rank(self) -> int:
        return len(self.entries)


@dataclass(frozen=True, eq=False)
class RootSystem:
    lie_type: SimpleLieType
    roots: tuple[tuple[int, ...], ...]
    bilinear_form: tuple[tuple[Fraction, ...], ...]
    index: dict = field(repr=False)

    @property
    def rank(self) -> int:
        return self.lie_type.rank

    def __len__(self):
        return len(self.roots)

    def pair(self, u: Sequence[int], v: Sequence[int]) -> Fraction:
        g = self.bilinear_form
        n = self.rank
        return sum((u[i] * v[j] * g[i][j] for i in range(n) for j in range(n) if u[i] and v[j]),
                   Fraction(0))

    def norm2(self, u: Sequence[int]) -> Fraction:
        return self.pair(u, u)

    @cached_property
    def norms(self) -> tuple[Fraction, ...]:
        """Squared length of every root, by ordinal."""
        return tuple(self.pair(r, r) for r in self.roots)

    @cached_property
    def negation(self) -> tuple[int, ...]:
        return tuple(self.index[tuple(-x for x in r)] for r in self.roots)

    @cached_property
    def sums(self) -> dict[tuple[int, int], int]:
        """(a, b) -> ordinal of roots[a] + roots[b] for every pair summing to a root."""
        out = {}
        for a, ra in enumerate(self.roots):
            for b, rb in enumerate(self.roots):
                s = self.index.get(tuple(x + y for x, y in zip(ra, rb)))
                if s is not None:
                    out[(a, b)] = s
        return out

    def height(self, u: Sequence[int]) -> int:
        return sum(u)

    @property
    def simple_roots(self) -> list[tuple[int, ...]]:
        n = self.rank
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]

    @property
    def positive(self) -> list[int]:
        return [k for k, r in enumerate(self.roots) if sum(r) > 0]

    def ordinal(self, v: Sequence[int]) -> int:
        return self.index[tuple(v)]

    def neg(self, k: int) -> int:
        return self.negation[k]

    def add(self, a: int, b: int) -> int | None:
        """Ordinal of roots[a] + roots[b], or None when the sum is not a root."""
        return self.sums.get((a, b))

    def cartan_matrix(self) -> CartanMatrix:
        g = self.bilinear_form
        n = self.rank
        entries = tuple(tuple(int(2 * g[i][j] / g[i][i]) for j in range(n)) for i in range(n))
        return CartanMatrix(entries, tuple(g[i][i] / 2 for i in range(n)))


def _reflect(gram, v, i):
    n = len(v)
    c = 2 * sum(v[j] * gram[j][i] for j in range(n)) / gram[i][i]
    assert c.denominator == 1
    w = list(v)
    w[i] -= int(c)
    return tuple(w)


def _sort_key(r):
    return (sum(r), r)


def build_root_system(t: SimpleLieType) -> RootSystem:
    """Close the simple roots under simple reflections; order by height, then lex."""
    if isinstance(t, str):
        t = SimpleLieType.parse(t)
    gram = _simple_root_form(t)
    n = t.rank
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                w = _reflect(gram, v, i)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    roots = tuple(sorted(seen, key=_sort_key))
    return RootSystem(
        lie_type=t,
        roots=roots,
        bilinear_form=tuple(tuple(row) for row in gram),
        index={r: k for k, r in enumerate(roots)},
    )


def classical_root_count(t: SimpleLieType) -> int:
    n = t.rank
    return {
        "A": n * n + n,
        "B": 2 * n * n,
        "C": 2 * n * n,
        "D": 2 * n * n - 2 * n,
        "E": {6: 72, 7: 126, 8: 240}.get(n, 0),
        "F": 48,
        "G": 12,
    }[t.family]


def is_root(rs: RootSystem, v: Sequence[int]) -> bool:
    if len(v) != rs.rank:
        raise RootSystemError(f"vector of length {len(v)} for rank {rs.rank}")
    return tuple(int(x) for x in v) in rs.index


def highest_root(rs: RootSystem) -> tuple[int, ...]:
    return rs.roots[-1]


def root_string(rs: RootSystem, alpha: Sequence[int], beta: Sequence[int]) -> tuple[int, int]:
    """(p, q) with p = max{k : beta - k alpha is a root}, q likewise for beta + k alpha."""
    a, b = tuple(alpha), tuple(beta)
    if a not in rs.index or b not in rs.index:
        raise RootSystemError("root_string needs two roots")
    if a == b or a == tuple(-x for x in b):
        raise RootSystemError("root_string needs alpha != +-beta")
    p = 0
    while tuple(y - (p + 1) * x for x, y in zip(a, b)) in rs.index:
        p += 1
    q = 0
    while tuple(y + (q + 1) * x for x, y in zip(a, b)) in rs.index:
        q += 1
    return p, q


def e8_from_chain_marks(chain: Sequence[int], branch: int) -> tuple[int, ...]:
    """Map marks on a 7-chain (branch below chain node 3) to Bourbaki E8 coordinates."""
    if len(chain) != 7:
        raise RootSystemError("expected 7 chain marks")
    a1, a3, a4, a5, a6, a7, a8 = chain
    return (a1, branch, a3, a4, a5, a6, a7, a8)


# -- on-disk cache -----------------------------------------------------------

def dump_cache(rs: RootSystem, path: str | Path) -> None:
    doc = {
        "version": CACHE_FORMAT_VERSION,
        "type": rs.lie_type.family,
        "rank": rs.rank,
        "roots": [list(r) for r in rs.roots],
    }
    Path(path).write_text(json.dumps(doc, separators=(",", ":")) + "\n")


def load_cache(path: str | Path) -> RootSystem:
    doc = json.loads(Path(path).read_text())
    if doc.get("version") != CACHE_FORMAT_VERSION:
        raise RootSystemError(f"unsupported cache version {doc.get('version')}")
    t = SimpleLieType(doc["type"], int(doc["rank"]))
    roots = tuple(tuple(int(x) for x in r) for r in doc["roots"])
    gram = _simple_root_form(t)
    return RootSystem(t, roots, tuple(tuple(row) for row in gram),
                      {r: k for k, r in enumerate(roots)})
