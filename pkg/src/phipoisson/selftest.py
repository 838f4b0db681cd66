"""Structure-constant and Hochschild identity suites behind ``phipoisson selftest``."""
from __future__ import annotations

import sys
from typing import TextIO

from .chevalley import (build_structure_constants, involution_failures, jacobi_failures,
                        property_violations)
from .hochschild import alt_d_violations, run_lab, test_algebras, upper_triangular
from .rootsys import MAX_RANK, RootSystemError, SimpleLieType, build_root_system

FULL_JACOBI_MAX_RANK = 4
SAMPLED_TRIPLES = 10_000


def all_types(max_rank: int = MAX_RANK) -> list[SimpleLieType]:
    out = []
    for fam in "ABCDEFG":
        for n in range(1, max_rank + 1):
            try:
                out.append(SimpleLieType(fam, n))
            except RootSystemError:
                pass
    return out


def corrupt_table(sc) -> tuple[int, int] | None:
    """Flip the sign of one entry in place; returns the pair touched (None for A1)."""
    if not sc.n:
        return None
    pair = min(sc.n)
    sc.n[pair] = -sc.n[pair]
    sc._table.clear()
    return pair


def chevalley_suite(t: SimpleLieType, seed: int = 0, corrupt: bool = False) -> dict:
    rs = build_root_system(t)
    sc = build_structure_constants(rs)
    if corrupt:
        corrupt_table(sc)
    samples = None if t.rank <= FULL_JACOBI_MAX_RANK else SAMPLED_TRIPLES
    return {
        "type": str(t),
        "property_violations": len(property_violations(sc)),
        "jacobi_failures": jacobi_failures(sc, samples, seed),
        "jacobi_mode": "all" if samples is None else f"{samples} sampled",
        "involution_failures": involution_failures(sc) if t.rank <= FULL_JACOBI_MAX_RANK else 0,
    }


def run_selftest(seed: int = 0, max_rank: int = 4, corrupt: bool = False,
                 out: TextIO = sys.stdout) -> bool:
    ok = True
    for t in all_types(max_rank):
        r = chevalley_suite(t, seed, corrupt)
        bad = r["property_violations"] + r["jacobi_failures"] + r["involution_failures"]
        ok &= bad == 0
        print(f"chevalley {r['type']:<4} properties={r['property_violations']} "
              f"jacobi({r['jacobi_mode']})={r['jacobi_failures']} "
              f"involution={r['involution_failures']} {'ok' if not bad else 'FAIL'}", file=out)
    for alg in test_algebras():
        lab = run_lab(alg, seed=seed)
        ok &= lab.failures == 0
        print(f"hochschild {lab.algebra:<20} cochains={lab.cochains} d2={lab.d_squared} "
              f"tau={lab.tau_commutes} alt={lab.alt_d} skew_cocycles={lab.skew_cocycles} "
              f"non_polyderivations={lab.non_polyderivations} "
              f"{'ok' if not lab.failures else 'FAIL'}", file=out)
    control = alt_d_violations(upper_triangular(), seed=seed)
    ok &= control > 0
    print(f"hochschild control UT2 alt_violations={control} "
          f"{'ok' if control else 'FAIL (control did not fail)'}", file=out)
    print("selftest " + ("passed" if ok else "FAILED"), file=out)
    return ok
