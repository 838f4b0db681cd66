"""Exact and floating-point rank / kernel routines.

Exact routines work on sparse integer rows (``{column: int}``) with
fraction-free elimination: a row update is ``b*row - a*pivot_row`` followed by
division by the content gcd, so entries stay integral and small.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable

import numpy as np


class RankIndeterminate(ArithmeticError):
    """A pivot fell inside the dead zone between the accept and reject thresholds."""


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {k: v // g for k, v in row.items()}
    return row


def _to_int_row(row: dict) -> dict:
    den = 1
    for v in row.values():
        if isinstance(v, Fraction) and v.denominator != 1:
            den = den * v.denominator // gcd(den, v.denominator)
    out = {}
    for k, v in row.items():
        v = v * den
        if v:
            out[k] = int(v)
    return out


class SparseEchelon:
    """Incremental fraction-free row echelon form over Q."""

    def __init__(self):
        self.pivots: dict[int, dict] = {}
        self.order: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.order)

    def reduce(self, row: dict) -> dict:
        row = _to_int_row(row)
        pivots = self.pivots
        while row:
            hit = [c for c in row if c in pivots]
            if not hit:
                break
            for col in hit:
                a = row.get(col)
                if not a:
                    continue
                prow = pivots[col]
                b = prow[col]
                g = gcd(a, b)
                fa, fb = a // g, b // g
                new = {k: v * fb for k, v in row.items()}
                for k, v in prow.items():
                    nv = new.get(k, 0) - fa * v
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                row = new
        return _primitive(row) if row else row

    def add(self, row: dict) -> bool:
        """Insert a row; returns True when it raised the rank."""
        row = self.reduce(row)
        if not row:
            return False
        col = min(row, key=lambda c: (abs(row[c]) != 1, c))
        self.pivots[col] = row
        self.order.append(col)
        return True

    def nullspace(self, columns: Iterable[int]) -> list[dict]:
        """Kernel basis over the given column set, one vector per free column.

        Rows inserted later never contain earlier pivot columns, so substitution
        runs from the last pivot back to the first.
        """
        cols = sorted(columns)
        free = [c for c in cols if c not in self.pivots]
        basis = []
        for f in free:
            x: dict[int, Fraction] = {f: Fraction(1)}
            for col in reversed(self.order):
                row = self.pivots[col]
                s = sum((v * x[k] for k, v in row.items() if k != col and k in x), Fraction(0))
                if s:
                    x[col] = -s / row[col]
            basis.append(_integral(x))
        return basis


def _integral(vec: dict) -> dict:
    return _primitive(_to_int_row(vec))


def exact_rank(rows: Iterable[dict]) -> int:
    ech = SparseEchelon()
    for r in rows:
        ech.add(r)
    return ech.rank


def exact_nullspace(rows: Iterable[dict], columns: Iterable[int]) -> list[dict]:
    ech = SparseEchelon()
    for r in rows:
        ech.add(r)
    return ech.nullspace(columns)


def independent_subset(vectors: list[dict]) -> list[int]:
    """Indices of a maximal linearly independent prefix-greedy subset (exact)."""
    ech = SparseEchelon()
    return [i for i, v in enumerate(vectors) if ech.add(v)]


# -- floating point ------------------------------------------------------------

def numeric_rank(a: np.ndarray, rel_tol: float = 1e-8,
                 dead_zone: tuple[float, float] = (1e-10, 1e-6)) -> int:
    """Rank by complete-pivoting elimination, relative to the largest pivot.

    Pivots with relative size above ``rel_tol`` count; any relative pivot
    inside ``dead_zone`` raises :class:`RankIndeterminate` instead of being
    rounded either way.
    """
    m = np.array(a, dtype=complex)
    if m.size == 0:
        return 0
    scale = np.abs(m).max()
    if scale == 0:
        return 0
    m = m / scale
    rank = 0
    rows, cols = m.shape
    for k in range(min(rows, cols)):
        sub = np.abs(m[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        piv = sub[i, j]
        if dead_zone[0] <= piv <= dead_zone[1]:
            raise RankIndeterminate(f"pivot {piv:.3e} inside dead zone {dead_zone}")
        if piv <= rel_tol:
            break
        i += k
        j += k
        m[[k, i]] = m[[i, k]]
        m[:, [k, j]] = m[:, [j, k]]
        m[k + 1:] -= np.outer(m[k + 1:, k] / m[k, k], m[k])
        rank += 1
    return rank


def least_squares_coords(basis: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, float]:
    """Coordinates of ``target`` in the column span of ``basis`` and the inf-norm residual."""
    if basis.shape[1] == 0:
        return np.zeros(0, dtype=complex), float(np.abs(target).max(initial=0.0))
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    resid = target - basis @ coef
    return coef, float(np.abs(resid).max(initial=0.0))
