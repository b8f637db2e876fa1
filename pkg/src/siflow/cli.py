"""``siflow`` command line: build, verify, integrate, classify, appendix, novichkov.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad config or arguments,
3 domain error (state outside the admissible interval, trajectory escaping).
Reports are ``key: value`` lines; with identical inputs and seed they are
byte-identical (no timings or paths are printed).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .appendix import NovichkovParams, novichkov_residuals, random_novichkov_params, run_suite
from .brackets import verify_superintegrability, verify_superintegrability_numeric
from .config import ConfigError, ConfigFile, load_config
from .families import classify_global
from .geodesic import PhaseState, integrate
from .model import apply_op_n, assemble_model, build_coefficients, op_n_rhs, verify_b_recurrence
from .radical import DomainError

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2, 3

COMMANDS = ("build", "verify", "integrate", "classify", "appendix", "novichkov")


class UsageError(Exception):
    pass


class Report:
    """Ordered key/value report, rendered as text and JSON."""

    def __init__(self, command: str, seed: int):
        self.items: list[tuple[str, str]] = []
        self.add("command", command)
        self.add("seed", seed)

    def add(self, key: str, value) -> None:
        self.items.append((key, str(value)))

    def text(self) -> str:
        return "".join(f"{k}: {v}\n" for k, v in self.items)

    def as_json(self) -> str:
        return json.dumps({"report": [{"key": k, "value": v} for k, v in self.items]}, indent=2) + "\n"


def precision() -> int:
    raw = os.environ.get("SIFLOW_PRECISION", "40")
    try:
        dps = int(raw)
    except ValueError:
        raise UsageError(f"SIFLOW_PRECISION must be an integer, got {raw!r}") from None
    if dps < 15:
        raise UsageError("SIFLOW_PRECISION must be at least 15")
    return dps


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _need(cfg: ConfigFile, section: str):
    value = {"model": cfg.model, "integrate": cfg.integrate, "classify": cfg.classify}[section]
    if value is None:
        raise ConfigError(f"config has no [{section}] section")
    return value


# ----------------------------------------------------------------------
# commands


def cmd_build(cfg: ConfigFile, args, rep: Report) -> int:
    spec = _need(cfg, "model")
    model = assemble_model(spec)
    rep.add("model", spec.label())
    rep.add("domain", _domain(spec))
    rep.add("x", repr(model.coeffs.x))
    for name in ("H", "G", "Q1", "Q2", "S1", "S2"):
        P = getattr(model, name)
        rep.add(f"{name}.monomials", len(P.terms))
        rep.add(f"{name}.terms", P.coefficient_terms())
    rep.add("status", "pass")
    return EXIT_OK


def _domain(spec) -> str:
    lo, hi = spec.domain
    return f"({'-inf' if lo is None else lo}, {'inf' if hi is None else hi})"


def cmd_verify(cfg: ConfigFile, args, rep: Report) -> int:
    spec = _need(cfg, "model")
    rep.add("model", spec.label())
    ok = True
    coeffs = build_coefficients(spec)
    if "ode" in cfg.checks:
        good = (apply_op_n(spec, coeffs.x) - op_n_rhs(spec)).is_zero()
        ok &= good
        rep.add("ode", "exact-zero" if good else "nonzero")
    if "recurrence" in cfg.checks:
        for name, res in verify_b_recurrence(coeffs, spec):
            good = res.is_zero()
            ok &= good
            rep.add(f"recurrence[{name}]", "exact-zero" if good else "nonzero")
        for k in range(coeffs.k_min, spec.n + 1):
            good = (coeffs.c_at(k).diff() + coeffs.b_at(k) * coeffs.dx).is_zero()
            ok &= good
            rep.add(f"recurrence[c'_{k} = -b_{k} x']", "exact-zero" if good else "nonzero")
    if "brackets" in cfg.checks:
        model = assemble_model(spec, coeffs)
        if spec.n <= args.symbolic_max_n:
            rep.add("brackets.mode", "exact")
            report = verify_superintegrability(model)
        else:
            dps = precision()
            # 15 digits of headroom: 1e-25 at the default 40 digits
            tol = 10.0 ** -(dps - 15)
            rep.add("brackets.mode", f"numeric ({dps} digits, 20 points, tolerance {tol:.0e})")
            report = verify_superintegrability_numeric(model, points=20, dps=dps, seed=args.seed, tol=tol)
        for c in report.checks:
            rep.add(f"bracket[{c.name}]", c.status())
            if c.detail:
                rep.add(f"bracket[{c.name}].detail", c.detail)
            if not c.passed and c.residual:
                rep.add(f"bracket[{c.name}].residual", "; ".join(c.residual))
        ok &= report.passed
    rep.add("status", _status(ok))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_integrate(cfg: ConfigFile, args, rep: Report) -> int:
    spec = _need(cfg, "model")
    st = _need(cfg, "integrate")
    model = assemble_model(spec)
    a, y, Pi, Py = st.s0
    rep.add("model", spec.label())
    rep.add("s0", f"a={a!r} y={y!r} Pi={Pi!r} Py={Py!r}")
    rep.add("T", repr(st.T))
    rep.add("h", repr(st.h))
    s0 = PhaseState.from_pi(spec, a, y, Pi, Py)
    traj = integrate(model, s0, st.T, st.h, every=st.every)
    csv_path = Path(args.csv or "trajectory.csv")
    traj.to_csv(csv_path)
    rep.add("samples", len(traj.times))
    rep.add("steps", traj.steps)
    for k in ("H", "Py", "S1", "S2"):
        rep.add(f"drift.{k}", f"{traj.drift[k]:.3e}")
    if traj.exited:
        rep.add("exit", f"{traj.exit_reason} at t = {traj.steps * st.h:.6g}")
        rep.add("status", "domain-error")
        return EXIT_DOMAIN
    ok = all(traj.drift[k] < args.drift_tol for k in ("H", "S1", "S2"))
    rep.add("drift.tolerance", f"{args.drift_tol:.1e}")
    rep.add("status", _status(ok))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_classify(cfg: ConfigFile, args, rep: Report) -> int:
    g = _need(cfg, "classify")
    res = classify_global(g)
    rep.add("family", g.family)
    rep.add("mu", ", ".join(str(m) for m in g.mu))
    for name, good in res.checks.items():
        rep.add(f"check[{name}]", _status(good))
    rep.add("result", res.tag)
    if res.reason:
        rep.add("reason", res.reason)
    rep.add("status", _status(res.accepted))
    return EXIT_OK if res.accepted else EXIT_FAIL


def cmd_appendix(cfg, args, rep: Report) -> int:
    report = run_suite(args.suite, cases=args.cases, seed=args.seed)
    rep.add("suite", args.suite)
    rep.add("cases", args.cases)
    for t in report.tallies:
        rep.add(t.name, f"{t.passed}/{t.cases}")
        for what in t.failures[:3]:
            rep.add(f"{t.name}.failure", what)
    rep.add("status", _status(report.ok))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_novichkov(cfg, args, rep: Report) -> int:
    ok = True
    ref = NovichkovParams(1, 2, 1, 1, "distinct")
    res = novichkov_residuals(ref)
    ref_ok = res.ok and (res.B5, res.B6) == (Fraction(3, 2), Fraction(-1, 2))
    rep.add("reference", "a1=1 a2=2 xi1=1 xi2=1")
    rep.add("reference.B5", res.B5)
    rep.add("reference.B6", res.B6)
    rep.add("reference.status", _status(ref_ok))
    ok &= ref_ok
    rng = random.Random(args.seed)
    for branch in ("distinct", "multiple"):
        passed = 0
        first_bad = None
        for _ in range(args.cases):
            p = random_novichkov_params(branch, rng)
            if novichkov_residuals(p).ok:
                passed += 1
            elif first_bad is None:
                first_bad = p
        rep.add(f"{branch}", f"{passed}/{args.cases}")
        if first_bad is not None:
            rep.add(f"{branch}.failure", f"a1={first_bad.a1} a2={first_bad.a2} p1={first_bad.p1} p2={first_bad.p2}")
        ok &= passed == args.cases
    rep.add("status", _status(ok))
    return EXIT_OK if ok else EXIT_FAIL


_HANDLERS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "integrate": cmd_integrate,
    "classify": cmd_classify,
    "appendix": cmd_appendix,
    "novichkov": cmd_novichkov,
}
_NEEDS_CONFIG = {"build", "verify", "integrate", "classify"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="siflow", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"siflow {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("config", nargs="?", help="config file (needed by build, verify, integrate, classify)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--suite", choices=("A", "B", "C", "all"), default="all")
    p.add_argument("--symbolic-max-n", type=int, default=3, help="largest n verified exactly; numeric above")
    p.add_argument("--drift-tol", type=float, default=1e-9)
    p.add_argument("--out", help="write the text report here as well as to stdout")
    p.add_argument("--json", dest="json_path", help="write a JSON copy of the report")
    p.add_argument("--csv", help="trajectory CSV path for integrate (default trajectory.csv)")
    return p


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    rep = Report(args.command, args.seed)
    try:
        if args.cases < 1:
            raise UsageError("--cases must be positive")
        cfg = None
        if args.command in _NEEDS_CONFIG:
            if not args.config:
                raise UsageError(f"{args.command} needs a config file")
            cfg = load_config(args.config)
        elif args.config:
            cfg = load_config(args.config)
        code = _HANDLERS[args.command](cfg, args, rep)
    except (ConfigError, UsageError, OSError) as exc:
        rep.add("error", exc)
        rep.add("status", "parse-error")
        code = EXIT_PARSE
    except DomainError as exc:
        rep.add("error", exc)
        rep.add("status", "domain-error")
        code = EXIT_DOMAIN
    rep.add("exit", code)
    text = rep.text()
    stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)
    if args.json_path:
        Path(args.json_path).write_text(rep.as_json())
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
