"""Command-line front end.

    qcl verify --theorem fueter32 --f const:1 --surface sphere:r=1 --quad 32
    qcl convergence --theorem alt48 --orders 8,16,32
    qcl table
    qcl kernel-eval --kernel alt-x --at 0.3,0.5,0.2,0.1
    qcl residue

Exit codes: 0 pass, 1 tolerance failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np

from .algebra import BiQuat
from .contour import (
    INV_LIN,
    INV_SQ,
    WIDE_SECOND,
    ContourRule,
    Rational,
    contour_integrate,
    real_line_contour,
    residue_analytic,
    residue_numeric,
)
from .errors import ConfigError, QclError
from .fields import PolyField, QField, gen_exp_poly, kernel_from_name, kernel_series_oracle, parse_poly
from .geometry import AngularRule, QuadRule, parse_surface
from .theorems import (
    SPECS,
    TheoremId,
    default_f,
    default_q0,
    default_surface,
    full_table,
    reports_to_csv,
    run,
    run_bi_narrow,
    run_bi_wide,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    theorem: str = "fueter32"
    f: str | None = None
    q0: tuple = (0.0, 0.0, 0.0, 0.0)
    surface: str | None = None
    quad: int = 24
    tol: float | None = None
    format: str = "json"
    seed: int = 0
    route: str = "auto"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["q0"] = list(self.q0)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    def validate(self) -> "RunConfig":
        try:
            TheoremId.parse(self.theorem)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        self.q0 = tuple(float(v) for v in self.q0)
        if len(self.q0) != 4:
            raise ConfigError("q0 needs four coordinates")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if self.route not in ("auto", "surface", "narrow", "wide"):
            raise ConfigError("route must be auto, surface, narrow or wide")
        if int(self.quad) < 2:
            raise ConfigError("quadrature order must be at least 2")
        self.quad = int(self.quad)
        self.seed = int(self.seed)
        if self.tol is not None:
            self.tol = float(self.tol)
        if self.f is not None:
            parse_field(self.f, self.q0)
        if self.surface is not None:
            parse_surface(self.surface)
        return self


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------


def parse_point(text: str) -> tuple:
    try:
        vals = tuple(complex(v.strip().replace("i", "j")) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad point {text!r}") from exc
    if len(vals) != 4:
        raise ConfigError(f"point {text!r} needs four coordinates")
    if all(v.imag == 0 for v in vals):
        return tuple(v.real for v in vals)
    return vals


def parse_field(spec: str, q0=(0, 0, 0, 0)) -> QField:
    """``const:<value>``, ``poly:<polynomial>``, ``gen:<variant>:<generator>`` or ``kernel:<name>``."""
    kind, sep, body = spec.partition(":")
    if not sep:
        raise ConfigError(f"field spec {spec!r} needs a prefix (const:, poly:, gen:, kernel:)")
    try:
        if kind in ("const", "poly"):
            return parse_poly(body)
        if kind == "gen":
            variant, _, text = body.partition(":")
            return gen_exp_poly(parse_poly(text), variant)
        if kind == "kernel":
            return kernel_from_name(body, q0)
    except (ValueError, QclError) as exc:
        raise ConfigError(f"bad field spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown field kind {kind!r}")


def _orders(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad order list {text!r}") from exc
    if len(vals) < 2:
        raise ConfigError("need at least two orders")
    return vals


def _threads_env() -> None:
    raw = os.environ.get("QCL_THREADS")
    if raw is None:
        return
    try:
        if int(raw) < 1:
            raise ValueError
    except ValueError as exc:
        raise ConfigError(f"QCL_THREADS must be a positive integer, got {raw!r}") from exc


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _evaluate(cfg: RunConfig, order: int | None = None):
    tid = TheoremId.parse(cfg.theorem)
    spec = SPECS[tid]
    f = parse_field(cfg.f, cfg.q0) if cfg.f else default_f(tid)
    q0 = cfg.q0 if any(cfg.q0) or cfg.f else default_q0(tid)
    order = order or cfg.quad
    route = cfg.route
    if route == "auto":
        route = "narrow" if spec.light_cone else "surface"
    if route == "surface":
        surface = cfg.surface or default_surface(tid)
        return [run(tid, f, q0, surface, QuadRule(order), cfg.tol)]
    crule, arule = ContourRule(order=order), AngularRule(order=order)
    if route == "narrow":
        return [run_bi_narrow(tid, f, q0, crule=crule, arule=arule, tolerance=cfg.tol)]
    return [run_bi_wide(tid, f, q0, crule=crule, arule=arule, tolerance=cfg.tol)]


def _emit(reports, fmt: str, out, timing: bool = True) -> None:
    if fmt == "csv":
        out.write(reports_to_csv(reports, timing))
    else:
        for r in reports:
            out.write(r.to_json(timing) + "\n")


def cmd_verify(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    reports = _evaluate(cfg)
    _emit(reports, cfg.format, out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def convergence_rows(cfg: RunConfig, orders: Sequence[int]):
    rows = []
    for o in orders:
        rep = _evaluate(cfg, o)[0]
        rows.append((o, rep.value, rep.abs_err))
    return rows


FLOOR = 1e-12


def monotone_until_floor(errors: Sequence[float], floor: float = FLOOR) -> bool:
    for a, b in zip(errors, errors[1:]):
        if a <= floor and b <= 10 * floor:
            continue
        if not b < a:
            return False
    return True


def cmd_convergence(cfg: RunConfig, orders: Sequence[int], self_test: bool = False, out=None) -> int:
    out = out or sys.stdout
    rows = convergence_rows(cfg, orders)
    out.write("order," + ",".join(f"value_{k}" for k in range(8)) + ",error\n")
    for o, v, e in rows:
        out.write(f"{o}," + ",".join(repr(c) for c in v.components()) + f",{e!r}\n")
    errs = [e for _, _, e in rows]
    tol = cfg.tol if cfg.tol is not None else SPECS[TheoremId.parse(cfg.theorem)].tolerance
    ok = errs[-1] <= tol
    if self_test:
        ok = ok and monotone_until_floor(errs)
    return EXIT_OK if ok else EXIT_FAIL


QUOTED_RESIDUES = (
    ("1/(z^2-1)^2", INV_SQ, 1.0, 2, -0.25),
    ("1/(z^2-1)", INV_LIN, -1.0, 1, -0.5),
    ("(5z^2-3)/(z^2-1)^2", WIDE_SECOND, -1.0, 2, -2.0),
)


def residue_rows():
    rows = []
    for name, f, pole, order, exact in QUOTED_RESIDUES:
        ana = residue_analytic(f, pole, order)
        num = residue_numeric(f, pole, 0.25)
        rows.append((name, pole, order, ana, num, exact))
    return rows


def cmd_residue(args, out=None) -> int:
    out = out or sys.stdout
    ok = True
    out.write("integrand,pole,order,analytic_re,analytic_im,numeric_re,numeric_im,expected\n")
    if args.num is not None or args.den is not None:
        if args.num is None or args.den is None or args.pole is None:
            raise ConfigError("custom residues need --num, --den and --pole")
        f = Rational.parse(args.num, args.den)
        pole = complex(args.pole.replace("i", "j"))
        ana = residue_analytic(f, pole, args.order)
        others = [p for p in f.poles() if abs(p - pole) > 1e-6]
        radius = min(0.25, 0.25 * min((abs(p - pole) for p in others), default=1.0))
        num = residue_numeric(f, pole, radius)
        ok = abs(ana - num) <= 1e-8 * max(1.0, abs(num))
        out.write(f"custom,{pole!r},{args.order},{ana.real!r},{ana.imag!r},{num.real!r},{num.imag!r},\n")
        return EXIT_OK if ok else EXIT_FAIL
    for name, pole, order, ana, num, exact in residue_rows():
        ok &= abs(ana - exact) <= 1e-12 and abs(num - exact) <= 1e-8
        out.write(f"{name},{pole!r},{order},{ana.real!r},{ana.imag!r},{num.real!r},{num.imag!r},{exact!r}\n")
    c = contour_integrate(INV_SQ, real_line_contour([(1.0, "include"), (-1.0, "exclude")], eps=0.05))
    ok &= abs(c - (-0.5j * math.pi)) <= 1e-8
    out.write(f"contour include(+1),1.0,2,{c.real!r},{c.imag!r},,,{-0.5 * math.pi!r}j\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_table(order: int, seed: int, fmt: str, out=None, timing: bool = True) -> int:
    out = out or sys.stdout
    reports = full_table(order, seed)
    _emit(reports, fmt, out, timing)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_kernel_eval(args, out=None) -> int:
    out = out or sys.stdout
    q0 = parse_point(args.q0)
    if any(isinstance(v, complex) for v in q0):
        raise ConfigError("kernel centre must be real")
    try:
        k = kernel_from_name(args.kernel, q0)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    at = np.array(parse_point(args.at), dtype=complex)
    value = k.at(at)
    d = {"kernel": repr(k), "at": [[float(v.real), float(v.imag)] for v in at], "value": value.components()}
    if args.series:
        d["series"] = kernel_series_oracle(k, at, args.series).components()
    out.write(json.dumps(d) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def _run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with run options; flags override it")
    p.add_argument("--theorem", help="theorem id, e.g. fueter32, alt48, bialt71")
    p.add_argument("--f", help="test function: const:1, poly:'x - w*I', gen:regular:'x*y', kernel:alt-x")
    p.add_argument("--q0", help="singular point w,x,y,z")
    p.add_argument("--surface", help="sphere:r=1, capsphere:r=1,delta=0.3, box:h=1, prism:rho=1,t1=2, dprism:rho=1, wprism:rho=2,t1=1")
    p.add_argument("--quad", type=int, help="Gauss-Legendre order")
    p.add_argument("--tol", type=float, help="pass tolerance (defaults per theorem)")
    p.add_argument("--format", choices=("json", "csv"))
    p.add_argument("--seed", type=int)
    p.add_argument("--route", choices=("auto", "surface", "narrow", "wide"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcl", description="Quaternionic integral theorem verification")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="evaluate one theorem and compare with its constant")
    _run_options(p)
    p.add_argument("--output", help="write the report here instead of stdout")

    p = sub.add_parser("convergence", help="values and errors over a list of quadrature orders")
    _run_options(p)
    p.add_argument("--orders", default="8,16,32")
    p.add_argument("--self-test", action="store_true", help="also require errors to fall until the floor")
    p.add_argument("--residues", action="store_true", help="print the residue self-test table instead")

    p = sub.add_parser("table", help="reproduce every theorem constant")
    p.add_argument("--order", type=int, default=24)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--no-timing", action="store_true", help="omit wall times (byte-identical reruns)")

    p = sub.add_parser("kernel-eval", help="evaluate a kernel at one point")
    p.add_argument("--kernel", required=True, help="fueter, alt-x, zero-radial, bi-alt-x, bi-fueter (+ -conj)")
    p.add_argument("--q0", default="0,0,0,0")
    p.add_argument("--at", required=True, help="w,x,y,z (complex entries like 1+0.5j allowed)")
    p.add_argument("--series", type=int, default=0, help="also print the n-term series value")

    p = sub.add_parser("residue", help="the prism residues, or a custom rational function")
    p.add_argument("--num", help="numerator coefficients, highest power first: 5,0,-3")
    p.add_argument("--den", help="denominator coefficients: 1,0,-2,0,1")
    p.add_argument("--pole")
    p.add_argument("--order", type=int, default=1, choices=(1, 2))
    return parser


def config_from_args(args) -> RunConfig:
    base: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
        if not isinstance(base, dict):
            raise ConfigError("config file must hold a JSON object")
    cfg = RunConfig.from_dict(base) if base else RunConfig()
    overrides = {
        "theorem": args.theorem,
        "f": args.f,
        "q0": parse_point(args.q0) if args.q0 else None,
        "surface": args.surface,
        "quad": args.quad,
        "tol": args.tol,
        "format": args.format,
        "seed": args.seed,
        "route": args.route,
    }
    for k, v in overrides.items():
        if v is not None:
            setattr(cfg, k, v)
    if any(isinstance(v, complex) for v in cfg.q0):
        raise ConfigError("q0 must be real")
    return cfg.validate()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _threads_env()
        if args.command == "verify":
            cfg = config_from_args(args)
            if args.output:
                with open(args.output, "w") as fh:
                    return cmd_verify(cfg, fh)
            return cmd_verify(cfg)
        if args.command == "convergence":
            if args.residues:
                return cmd_residue(argparse.Namespace(num=None, den=None, pole=None, order=1))
            return cmd_convergence(config_from_args(args), _orders(args.orders), args.self_test)
        if args.command == "table":
            return cmd_table(args.order, args.seed, args.format, timing=not args.no_timing)
        if args.command == "kernel-eval":
            return cmd_kernel_eval(args)
        if args.command == "residue":
            return cmd_residue(args)
    except ConfigError as exc:
        print(f"qcl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QclError, ValueError) as exc:
        print(f"qcl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser.error("unknown command")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
