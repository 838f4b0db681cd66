"""Per-instance verification pipeline and report rendering.

Every instance goes through: model, quasi-root structure, invariant
dimensions, coefficient solve, mCYBE residuals, the d_s complex and (for the
E8 trivalent model) the nonvanishing check.  Each step becomes a named check;
the report is plain data, rendered either as a table or as canonical JSON.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from functools import lru_cache

from . import __version__
from .chevalley import build_structure_constants, jacobi_failures
from .cohomology import (EXPANSION_TOL, build_slice, cohomology_dims, e8_nonvanishing_check, ranks)
from .linalg import RankIndeterminate
from .multivec import cartan_involution
from .poisson import (closed_forms, invariant_bivector, perturbed, phi_tilde,
                      recurrence_residual, solve_phi_poisson, verify_dj, verify_mcybe)
from .quasiroot import (bracket_image_check, build_model, connectivity_check,
                        invariance_defect, invariant_subspace)
from .rootsys import build_root_system

# (algebra, Bourbaki node, l) -> (dim (w^2 m)^k, dim (w^3 m)^{k,theta})
EXPECTED_DIMS = {
    ("G2", 2, 2): (0, 0),
    ("G2", 1, 3): (1, 1),
    ("F4", 3, 4): (1, 1),
    ("E8", 5, 5): (2, 2),
    ("E8", 4, 6): (2, 3),
}
DEFAULT_INSTANCES = tuple(EXPECTED_DIMS)
DJ_ALGEBRAS = ("A2", "B2", "G2")
JACOBI_SAMPLES = 2000


@dataclass(frozen=True)
class InstanceSpec:
    algebra: str
    node: int        # 1-based Bourbaki label
    l: int

    def label(self) -> str:
        return f"{self.algebra}:{self.node}:{self.l}"


@dataclass(frozen=True)
class Settings:
    kappa: float = 1.0
    accept: float = 1e-9
    reject: float = 1e-6
    seed: int = 0
    perturb: float | None = None


@lru_cache(maxsize=None)
def algebra(name: str):
    rs = build_root_system(name)
    return rs, build_structure_constants(rs)


@lru_cache(maxsize=None)
def instance_model(spec: "InstanceSpec"):
    """Model for an instance, shared so invariant-subspace caches are reused."""
    rs, sc = algebra(spec.algebra)
    return build_model(rs, sc, spec.node - 1, spec.l)


def _num(x: float) -> float:
    """Canonical float for reports: 6 significant digits, no negative zero."""
    return float(f"{x:.6e}") + 0.0


def _cnum(z: complex) -> list[float]:
    return [round(z.real, 12) + 0.0, round(z.imag, 12) + 0.0]


class Checks:
    def __init__(self, accept: float, reject: float):
        self.accept = accept
        self.reject = reject
        self.items: list[dict] = []

    def flag(self, name: str, ok: bool, detail=None):
        item = {"name": name, "status": "pass" if ok else "fail"}
        if detail is not None:
            item["detail"] = detail
        self.items.append(item)
        return ok

    def small(self, name: str, value: float):
        """Residual check with the accept / reject band; the gap is indeterminate."""
        if value < self.accept:
            status = "pass"
        elif value > self.reject:
            status = "fail"
        else:
            status = "indeterminate"
        self.items.append({"name": name, "status": status, "value": _num(value)})
        return status == "pass"

    def large(self, name: str, value: float, floor: float):
        self.items.append({"name": name, "status": "pass" if value > floor else "fail",
                           "value": _num(value)})


def verify_instance(spec: InstanceSpec, st: Settings) -> dict:
    checks = Checks(st.accept, st.reject)
    row: dict = {"instance": spec.label(), "algebra": spec.algebra, "node": spec.node, "l": spec.l}
    _, sc = algebra(spec.algebra)
    model = instance_model(spec)
    l = spec.l
    row["omega_p"] = len(model.omega_p)
    row["m"] = len(model.m_basis)
    row["class_sizes"] = [len(model.classes[i]) for i in range(1, l)]

    checks.flag("jacobi_sampled", jacobi_failures(sc, JACOBI_SAMPLES, st.seed) == 0)
    checks.flag("connectivity", all(connectivity_check(model, i) for i in range(1, l)))
    checks.flag("bracket_image", all(bracket_image_check(model, i, j)
                                     for i in range(1, l) for j in range(1, l) if (i + j) % l))

    b2 = invariant_subspace(model, 2, -1)
    b3 = invariant_subspace(model, 3, 1)
    row["dim2"], row["dim3"] = b2.dim, b3.dim
    row["v_blocks"] = [[list(t), n] for t, n in b3.blocks if n]
    expected = EXPECTED_DIMS.get((spec.algebra, spec.node, spec.l))
    if expected is not None:
        checks.flag("table_dims", (b2.dim, b3.dim) == expected, list(expected))
    checks.flag("dim2_formula", b2.dim == (l - 1) // 2)
    checks.flag("invariance", not any(invariance_defect(model, v) for v in b2.vectors + b3.vectors))
    phi = phi_tilde(model)
    checks.flag("phi_theta", (cartan_involution(sc, phi) - phi).is_zero())

    sols = solve_phi_poisson(model, st.kappa, st.accept, st.reject)
    if 2 <= l <= 6:
        forms = closed_forms(l, st.kappa)
        got = [tuple(complex(c) for c in s.family.free()) for s in sols]
        dev = float("inf")
        if len(forms) == len(got):
            dev = max((abs(a - b) for f, g in zip(forms, got) for a, b in zip(f, g)), default=0.0)
        checks.small("closed_forms", dev)

    solutions = []
    for sol in sols:
        srow: dict = {"branch": sol.branch_label,
                      "c": [_cnum(complex(c)) for c in sol.family.free()]}
        sc_checks = Checks(st.accept, st.reject)
        fam = sol.family
        if st.perturb is not None and l > 2:
            fam = perturbed(fam, st.perturb)
            srow["perturbed_by"] = st.perturb
        sc_checks.small("recurrence", recurrence_residual(model, fam))
        sc_checks.small("mcybe", verify_mcybe(model, invariant_bivector(model, fam), st.kappa))
        if st.perturb is None:
            _cohomology(model, sol, srow, sc_checks, st)
        srow["checks"] = sc_checks.items
        solutions.append(srow)
    row["solutions"] = solutions
    row["checks"] = checks.items
    return row


def _cohomology(model, sol, srow, checks: Checks, st: Settings):
    try:
        sl = build_slice(model, sol)
    except ArithmeticError as exc:
        checks.flag("expansion", False, str(exc))
        return
    srow["expansion_residual"] = _num(sl.expansion_residual)
    try:
        h2, h3 = cohomology_dims(sl)
        r2, r3 = ranks(sl)
    except RankIndeterminate as exc:
        checks.flag("rank", False, str(exc))
        return
    srow.update({"h2": h2, "h3": h3, "rank_d2": r2, "rank_d3": r3,
                 "dim4": sl.basis4.dim, "ds_factor": _cnum(sl.ds_factor)})
    checks.flag("expansion", sl.expansion_residual < EXPANSION_TOL)
    if model.l > 2:
        checks.flag("h2_zero", h2 == 0)
        checks.flag("h3_zero", h3 == 0)
        checks.small("ds_factor_fit", sl.ds_factor_residual)
    if model.l in (5, 6):
        checks.flag("d2_injective", r2 == sl.basis2.dim)
    checks.small("ds_square", sl.ds_square_residual)
    if str(model.rs.lie_type) == "E8" and model.alpha_index == 3 and model.l == 6:
        rep = e8_nonvanishing_check(sl)
        srow["e8_coefficient"] = _cnum(rep.coefficient)
        checks.flag("e8_roots", rep.classes_ok and rep.sum_zero)
        checks.flag("e8_membership", rep.membership_ok)
        checks.small("e8_upsilon_span", rep.upsilon_in_span)
        checks.large("e8_coefficient", abs(rep.coefficient), 1e-6)


def dj_rows(names=DJ_ALGEBRAS, accept: float = 1e-9, reject: float = 1e-6) -> list[dict]:
    rows = []
    for name in names:
        rs, sc = algebra(name)
        res = verify_dj(rs, sc)
        checks = Checks(accept, reject)
        checks.flag("invariant", res.invariant)
        checks.small("fit", res.residual)
        rows.append({"algebra": name, "lambda": str(res.lam), "cartan_monomials": res.cartan_terms,
                     "checks": checks.items})
    return rows


def _run_one(args):
    spec, st = args
    return verify_instance(spec, st)


def build_report(instances, st: Settings, jobs: int = 1, config_echo: dict | None = None) -> dict:
    work = [(spec, st) for spec in instances]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_one, work))
    else:
        rows = [_run_one(w) for w in work]
    dj = dj_rows(accept=st.accept, reject=st.reject)
    factors = [tuple(s["ds_factor"]) for r in rows for s in r["solutions"] if "ds_factor" in s and r["l"] > 2]
    consistent = all(abs(complex(*f) - complex(*factors[0])) < st.accept for f in factors) if factors else True
    statuses = [c["status"] for r in rows for c in r["checks"]]
    statuses += [c["status"] for r in rows for s in r["solutions"] for c in s["checks"]]
    statuses += [c["status"] for r in dj for c in r["checks"]]
    statuses.append("pass" if consistent else "fail")
    summary = {
        "checks": len(statuses),
        "passed": statuses.count("pass"),
        "failed": statuses.count("fail"),
        "indeterminate": statuses.count("indeterminate"),
        "ds_factor_consistent": consistent,
    }
    return {
        "toolkit": "phipoisson",
        "version": __version__,
        "config": config_echo or {},
        "instances": rows,
        "drinfeld_jimbo": dj,
        "summary": summary,
    }


def report_ok(report: dict) -> bool:
    s = report["summary"]
    return s["failed"] == 0 and s["indeterminate"] == 0


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def _fmt_c(c) -> str:
    re_, im = c
    if abs(re_) < 1e-12:
        return f"{im:+.6f}i"
    return f"{re_:+.6f}{im:+.6f}i"


def render_table(report: dict) -> str:
    lines = [f"phipoisson {report['version']}", ""]
    head = f"{'instance':<10} {'|k|':>4} {'|m|':>4} {'w2':>3} {'w3':>3}  {'branch':<8} {'coefficients':<30} {'mCYBE':>9} {'H2':>3} {'H3':>3}  status"
    lines.append(head)
    lines.append("-" * len(head))
    for r in report["instances"]:
        base_fail = [c["name"] for c in r["checks"] if c["status"] != "pass"]
        for k, s in enumerate(r["solutions"] or [{}]):
            cs = s.get("checks", [])
            fails = base_fail + [c["name"] for c in cs if c["status"] != "pass"]
            mc = next((c.get("value") for c in cs if c["name"] == "mcybe"), None)
            coeffs = ", ".join(_fmt_c(c) for c in s.get("c", [])) or "0"
            prefix = (f"{r['instance']:<10} {r['omega_p']:>4} {r['m']:>4} {r['dim2']:>3} {r['dim3']:>3}"
                      if k == 0 else " " * 29)
            lines.append(f"{prefix}  {s.get('branch', '-'):<8} {coeffs:<30} "
                         f"{(f'{mc:.1e}' if mc is not None else '-'):>9} "
                         f"{str(s.get('h2', '-')):>3} {str(s.get('h3', '-')):>3}  "
                         f"{'ok' if not fails else 'FAIL ' + ','.join(fails)}")
    lines.append("")
    for d in report["drinfeld_jimbo"]:
        fails = [c["name"] for c in d["checks"] if c["status"] != "pass"]
        lines.append(f"DJ {d['algebra']}: lambda={d['lambda']} cartan_monomials={d['cartan_monomials']} "
                     f"{'ok' if not fails else 'FAIL ' + ','.join(fails)}")
    s = report["summary"]
    lines.append("")
    lines.append(f"checks {s['checks']}  passed {s['passed']}  failed {s['failed']}  "
                 f"indeterminate {s['indeterminate']}")
    return "\n".join(lines) + "\n"


def settings_dict(st: Settings) -> dict:
    return asdict(st)
