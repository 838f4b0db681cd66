"""Command line: ``roots``, ``verify`` and ``selftest``.

Exit codes: 0 everything passed, 1 a verification check failed, 2 usage or
configuration error.

Settings precedence for ``verify`` (lowest to highest): built-in defaults,
environment (``PHIPOISSON_ACCEPT``, ``PHIPOISSON_REJECT``), the JSON config
file given by ``--config``, command-line flags.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .rootsys import RootSystemError, SimpleLieType, build_root_system, highest_root

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ENV_ACCEPT = "PHIPOISSON_ACCEPT"
ENV_REJECT = "PHIPOISSON_REJECT"
CONFIG_KEYS = {"instances", "kappa", "tolerances", "format", "output", "jobs", "seed", "perturb"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    instances: list = field(default_factory=list)
    kappa: float = 1.0
    accept: float = 1e-9
    reject: float = 1e-6
    fmt: str = "table"
    output: str | None = None
    jobs: int = 1
    seed: int = 0
    perturb: float | None = None

    def validate(self) -> "RunConfig":
        from .quasiroot import ModelError, alpha_multiplicity

        if not self.instances:
            raise ConfigError("no instances to verify")
        if not 0 < self.accept < self.reject:
            raise ConfigError(f"need 0 < accept < reject, got {self.accept} and {self.reject}")
        if self.kappa <= 0:
            raise ConfigError("kappa must be positive")
        if self.fmt not in ("table", "json"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        for spec in self.instances:
            try:
                t = SimpleLieType.parse(spec.algebra)
                rs = build_root_system(t)
                if not 1 <= spec.node <= rs.rank:
                    raise ModelError(f"node {spec.node} outside 1..{rs.rank}")
                top = alpha_multiplicity(rs, spec.node - 1)
                if not 2 <= spec.l <= top:
                    raise ModelError(f"l={spec.l} outside [2, {top}] for {spec.label()}")
            except (RootSystemError, ModelError) as exc:
                raise ConfigError(str(exc)) from exc
        return self

    def echo(self) -> dict:
        return {
            "instances": [s.label() for s in self.instances],
            "kappa": self.kappa,
            "tolerances": [self.accept, self.reject],
            "seed": self.seed,
            "perturb": self.perturb,
        }


def parse_instance(text: str):
    from .report import InstanceSpec

    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"instance {text!r} is not TYPE:NODE:L")
    name, node, l = parts
    try:
        return InstanceSpec(str(SimpleLieType.parse(name)), int(node), int(l))
    except (ValueError, RootSystemError) as exc:
        raise ConfigError(f"bad instance {text!r}: {exc}") from exc


def _instance_from_json(obj):
    if isinstance(obj, str):
        return parse_instance(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 3:
        return parse_instance(":".join(str(x) for x in obj))
    if isinstance(obj, dict):
        return parse_instance(f"{obj.get('algebra')}:{obj.get('node')}:{obj.get('l')}")
    raise ConfigError(f"cannot read instance {obj!r}")


def load_config(args, environ=None) -> RunConfig:
    from .report import DEFAULT_INSTANCES, InstanceSpec

    environ = os.environ if environ is None else environ
    cfg = RunConfig()
    instances = None
    try:
        if ENV_ACCEPT in environ:
            cfg.accept = float(environ[ENV_ACCEPT])
        if ENV_REJECT in environ:
            cfg.reject = float(environ[ENV_REJECT])
    except ValueError as exc:
        raise ConfigError(f"bad tolerance in environment: {exc}") from exc

    if args.config:
        try:
            doc = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(doc) - CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "instances" in doc:
            instances = [_instance_from_json(x) for x in doc["instances"]]
        tol = doc.get("tolerances")
        if tol is not None:
            if isinstance(tol, dict):
                cfg.accept = float(tol.get("accept", cfg.accept))
                cfg.reject = float(tol.get("reject", cfg.reject))
            else:
                cfg.accept, cfg.reject = (float(x) for x in tol)
        for key, attr, conv in (("kappa", "kappa", float), ("format", "fmt", str),
                                ("output", "output", str), ("jobs", "jobs", int),
                                ("seed", "seed", int), ("perturb", "perturb", float)):
            if doc.get(key) is not None:
                setattr(cfg, attr, conv(doc[key]))

    if args.instance:
        instances = [parse_instance(x) for x in args.instance]
    for attr in ("kappa", "accept", "reject", "output", "jobs", "seed", "perturb"):
        val = getattr(args, attr)
        if val is not None:
            setattr(cfg, attr, val)
    if args.format is not None:
        cfg.fmt = args.format
    if instances is None:
        instances = [InstanceSpec(*t) for t in DEFAULT_INSTANCES]
    cfg.instances = instances
    return cfg.validate()


# -- subcommands -----------------------------------------------------------------

def cmd_roots(args) -> int:
    try:
        rs = build_root_system(SimpleLieType.parse(args.type))
    except RootSystemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    top = highest_root(rs)
    print(f"type {rs.lie_type}")
    print(f"roots {len(rs.roots)}")
    print(f"positive {len(rs.positive)}")
    print(f"highest_root {' '.join(map(str, top))}")
    nodes = range(1, rs.rank + 1) if args.node is None else [args.node]
    for n in nodes:
        if not 1 <= n <= rs.rank:
            print(f"error: node {n} outside 1..{rs.rank}", file=sys.stderr)
            return EXIT_USAGE
        print(f"node {n} coefficient {top[n - 1]}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .report import Settings, build_report, render_json, render_table, report_ok

    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    st = Settings(cfg.kappa, cfg.accept, cfg.reject, cfg.seed, cfg.perturb)
    report = build_report(cfg.instances, st, cfg.jobs, cfg.echo())
    text = render_json(report) if cfg.fmt == "json" else render_table(report)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report_ok(report) else EXIT_FAIL


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    ok = run_selftest(seed=args.seed, max_rank=args.max_rank, corrupt=args.inject_sign_error,
                      out=sys.stdout)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phipoisson", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("roots", help="root count and highest root of a simple type")
    r.add_argument("type", help="e.g. E8, G2, B4")
    r.add_argument("--node", type=int, help="only this (1-based Bourbaki) node")
    r.set_defaults(func=cmd_roots)

    v = sub.add_parser("verify", help="run the verification pipeline")
    v.add_argument("--config", help="JSON config file")
    v.add_argument("--instance", action="append", metavar="TYPE:NODE:L",
                   help="model to verify, node in Bourbaki numbering (repeatable)")
    v.add_argument("--kappa", type=float)
    v.add_argument("--accept", type=float, help="residuals below this pass")
    v.add_argument("--reject", type=float, help="residuals above this fail")
    v.add_argument("--format", choices=("table", "json"))
    v.add_argument("--output", help="write the report here instead of stdout")
    v.add_argument("--jobs", type=int, help="worker processes")
    v.add_argument("--seed", type=int)
    v.add_argument("--perturb", type=float, metavar="DELTA",
                   help="shift c[1] of every solution by DELTA before the mCYBE check")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", help="structure-constant and Hochschild suites")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-rank", type=int, default=4)
    s.add_argument("--inject-sign-error", action="store_true",
                   help="flip one structure constant first (mutation control)")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
