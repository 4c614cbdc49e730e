"""Command-line front end: eval, check, sweep, selftest.

Exit codes: 0 pass, 1 identity failure or numerical failure, 2 usage or
parse error, 3 inadmissible input (domain error).
"""

from __future__ import annotations

import argparse
import csv
import inspect
import io
import json
import math
import re
import sys
import warnings
from typing import Any, Sequence

from . import acceptance
from .bernoulli import multiple_bernoulli_poly
from .errors import ConvergenceError, DomainError, PoleProximity
from .gammafuncs import log_multiple_elliptic_gamma
from .multisine import log_multiple_sine_integral, log_multiple_sine_product
from .policy import DEFAULT_POLICY, TruncationPolicy
from .qseries import (log_q_shifted_factorial, q_polylog, q_shifted_factorial_product,
                      zero_pole_lattice)
from .quadrature import log_psi2
from .registry import ALIASES, REGISTRY, resolve, sweep
from .report import _cjson

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^(?:(?P<re>[+-]?{_NUM})(?:(?P<im>[+-]{_NUM})i)?|(?P<io>[+-]?{_NUM})i)$")


def parse_complex(text: str) -> complex:
    """Strict literal: ``a``, ``bi``, or ``a+bi`` / ``a-bi``; no whitespace."""
    m = _COMPLEX.match(text)
    if not m:
        raise argparse.ArgumentTypeError(f"malformed complex literal {text!r} (expected a+bi)")
    if m.group("io") is not None:
        return complex(0.0, float(m.group("io")))
    return complex(float(m.group("re")), float(m.group("im") or 0.0))


def parse_vector(text: str) -> list[complex]:
    if not text:
        raise argparse.ArgumentTypeError("empty vector")
    return [parse_complex(part) for part in text.split(",")]


class UsageError(Exception):
    pass


# --- output ------------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, complex):
        return _cjson(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def _fmt_c(z: complex) -> str:
    return f"{z.real:.16g}{z.imag:+.16g}i"


class Output:
    def __init__(self, path: str | None):
        self.path = path
        self.buf = io.StringIO()

    def write(self, text: str):
        self.buf.write(text)

    def close(self):
        text = self.buf.getvalue()
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True) + "\n"


def _csv(rows: list[dict[str, Any]]) -> str:
    out = io.StringIO()
    if rows:
        w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow(row)
    return out.getvalue()


# --- policy --------------------------------------------------------------------

POLICY_FLAGS = {
    "tail_tol": float, "max_terms": int, "unit_circle_guard": float, "pole_guard": float,
    "quad_eps": float, "quad_rho": float, "quad_T": float, "panel_order": int, "quad_tol": float,
    "threshold_series": float, "threshold_quadrature": float, "prefactor_shift": float,
    "fast_path_radius": float, "max_panels": int,
}


def _add_policy(p: argparse.ArgumentParser):
    g = p.add_argument_group("truncation policy")
    for name, typ in POLICY_FLAGS.items():
        g.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, default=None, metavar=typ.__name__.upper())


def _policy(ns) -> TruncationPolicy:
    over = {k: getattr(ns, k) for k in POLICY_FLAGS if getattr(ns, k, None) is not None}
    try:
        return DEFAULT_POLICY.with_(**over)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _add_format(p):
    p.add_argument("--format", choices=("json", "csv", "human"), default="human")
    p.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")


def _add_params(p):
    p.add_argument("--z", type=parse_complex)
    p.add_argument("--x", type=parse_complex)
    p.add_argument("--tau", type=parse_vector)
    p.add_argument("--sigma", type=parse_complex)
    p.add_argument("--omega", type=parse_vector)
    p.add_argument("--q", type=parse_vector)
    p.add_argument("--r", type=int)
    p.add_argument("--n", type=int)


# --- eval ------------------------------------------------------------------------

EVAL_FUNCTIONS = ("bernoulli", "q_factorial", "q_polylog", "theta0", "elliptic_gamma",
                  "G_r", "S_r_product", "S_r_integral", "psi2")


def _need(ns, *names):
    missing = [n for n in names if getattr(ns, n, None) is None]
    if missing:
        raise UsageError("missing parameter(s): " + ", ".join("--" + m for m in missing))


def _lattice_flag(r: int, z: complex, tau: list[complex]):
    """Classify a pole-proximity hit as a zero or a pole of G_r when possible."""
    if any(t.imag <= 0 for t in tau):
        return None
    h = 1e-6
    pts = zero_pole_lattice(r, tau, (z.real - h, z.real + h, z.imag - h, z.imag + h))
    if not pts:
        return None
    order = sum(o for _, o in pts)
    return ("lattice_zero", 0j) if order > 0 else ("lattice_pole", complex(math.inf, 0))


def _eval_gamma(r, z, tau, policy, representation):
    try:
        lv, err = log_multiple_elliptic_gamma(r, z, tau, policy)
    except PoleProximity:
        hit = _lattice_flag(r, z, list(tau))
        if hit is None:
            raise
        flag, value = hit
        return value, 0.0, representation, [flag]
    v = complex(math.e ** lv.real) * complex(math.cos(lv.imag), math.sin(lv.imag))
    return v, abs(v) * err, representation, []


def _exp_est(lv, err):
    v = complex(math.e ** lv.real) * complex(math.cos(lv.imag), math.sin(lv.imag))
    return v, abs(v) * err


def cmd_eval(ns, policy) -> tuple[dict, int]:
    f = ns.function
    flags: list[str] = []
    inputs = {k: getattr(ns, k) for k in ("r", "n", "z", "x", "tau", "sigma", "omega", "q") if getattr(ns, k) is not None}
    if f == "bernoulli":
        _need(ns, "r", "n", "z", "omega")
        value, err, rep = multiple_bernoulli_poly(ns.r, ns.n, ns.omega)(ns.z), 0.0, "generating-function coefficients"
    elif f == "q_factorial":
        _need(ns, "x", "q")
        if ns.method == "product":
            value, err = q_shifted_factorial_product(ns.x, ns.q, policy)
            rep = "truncated multiple product"
        else:
            value, err = _exp_est(*log_q_shifted_factorial(ns.x, ns.q, policy))
            rep = "moduli inverted into the unit disk, exp(-Li) with explicit leading factors"
    elif f == "q_polylog":
        _need(ns, "x", "q")
        value, err = q_polylog(ns.x, ns.q, policy)
        rep = "power series with geometric tail bound"
    elif f == "theta0":
        _need(ns, "z", "tau")
        value, err, rep, flags = _eval_gamma(0, ns.z, ns.tau[:1], policy, "q-shifted factorial product, r = 0")
    elif f == "elliptic_gamma":
        _need(ns, "z", "tau", "sigma")
        value, err, rep, flags = _eval_gamma(1, ns.z, [ns.tau[0], ns.sigma], policy,
                                             "q-shifted factorial quotient, r = 1")
    elif f == "G_r":
        _need(ns, "r", "z", "tau")
        value, err, rep, flags = _eval_gamma(ns.r, ns.z, ns.tau, policy, "q-shifted factorial quotient")
    elif f == "S_r_product":
        _need(ns, "r", "z", "omega")
        value, err = _exp_est(*log_multiple_sine_product(ns.r, ns.z, ns.omega, ns.variant, policy))
        rep = f"infinite product ({ns.variant})"
    elif f == "S_r_integral":
        _need(ns, "r", "z", "omega")
        value, err = _exp_est(*log_multiple_sine_integral(ns.r, ns.z, ns.omega, ns.side, policy))
        rep = f"indented real-line quadrature ({ns.side})"
    else:
        _need(ns, "z")
        value, err = _exp_est(*log_psi2(ns.z, policy))
        rep = "vertical-path quadrature from -i infinity"
    doc = {"schema": SCHEMA, "command": "eval", "function": f, "inputs": inputs,
           "value": complex(value), "error_bound": float(err), "representation": rep, "flags": flags}
    return doc, EXIT_OK


def _render_eval(doc, fmt) -> str:
    if fmt == "json":
        return _dump(doc)
    if fmt == "csv":
        v = doc["value"]
        return _csv([{"function": doc["function"], "value_re": repr(v.real), "value_im": repr(v.imag),
                      "error_bound": repr(doc["error_bound"]), "representation": doc["representation"],
                      "flags": ";".join(doc["flags"])}])
    line = f"{doc['function']} = {_fmt_c(doc['value'])}  (error <= {doc['error_bound']:.3g})  via {doc['representation']}"
    if doc["flags"]:
        line += "  [" + ", ".join(doc["flags"]) + "]"
    return line + "\n"


# --- check / sweep -------------------------------------------------------------

SCALAR_TAU = {"jacobi", "felder_varchenko", "equal_period_gamma"}


def _check_kwargs(entry, ns) -> dict[str, Any]:
    params = inspect.signature(entry.check).parameters
    given = {k: getattr(ns, k, None) for k in
             ("r", "z", "x", "tau", "sigma", "omega", "q", "K", "j", "sign", "kind", "which", "form", "side")}
    if entry.name in SCALAR_TAU and given["tau"] is not None:
        if len(given["tau"]) != 1:
            raise UsageError("--tau takes a single modulus here")
        given["tau"] = given["tau"][0]
    if entry.name == "summation" and given["tau"] is not None:
        given["params"] = given["tau"][:1] + ([given["sigma"]] if given["sigma"] is not None else [])
    if getattr(ns, "lower", False):
        given["lower"] = True
    kwargs = {}
    for name, p in params.items():
        if name == "policy":
            continue
        if given.get(name) is not None:
            kwargs[name] = given[name]
        elif p.default is inspect.Parameter.empty:
            raise UsageError(f"{entry.name} needs --{name}")
    return kwargs


def _report_row(rep) -> dict[str, Any]:
    return {"identity": rep.identity_id, "index": rep.sample.get("index", ""), "seed": rep.sample.get("seed", ""),
            "lhs_re": repr(rep.lhs.real), "lhs_im": repr(rep.lhs.imag),
            "rhs_re": repr(rep.rhs.real), "rhs_im": repr(rep.rhs.imag),
            "abs_residual": repr(rep.abs_residual), "rel_residual": repr(rep.rel_residual),
            "threshold": repr(rep.threshold), "pass": rep.passed}


def _human_report(rep) -> str:
    verdict = "PASS" if rep.passed else "FAIL"
    idx = f"#{rep.sample['index']} " if "index" in rep.sample else ""
    return (f"{verdict} {idx}{rep.identity_id}: rel residual {rep.rel_residual:.3e} "
            f"(threshold {rep.threshold:g}); lhs {_fmt_c(rep.lhs)}, rhs {_fmt_c(rep.rhs)}\n")


def cmd_check(ns, policy, out: Output) -> int:
    entry = _entry(ns.identity)
    kwargs = _check_kwargs(entry, ns)
    rep = entry.check(**kwargs, policy=policy)
    if ns.format == "json":
        out.write(_dump({"schema": SCHEMA, "command": "check", "report": rep.as_dict()}))
    elif ns.format == "csv":
        out.write(_csv([_report_row(rep)]))
    else:
        out.write(_human_report(rep))
    return EXIT_OK if rep.passed else EXIT_FAIL


def _entry(name):
    try:
        return resolve(name)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from exc


def cmd_sweep(ns, policy, out: Output) -> int:
    if ns.count < 1:
        raise UsageError("--count must be at least 1")
    entry = _entry(ns.identity)
    opts = {k: getattr(ns, k) for k in entry.options if getattr(ns, k, None) is not None}
    extra = {k for k in ("r", "sign", "kind", "which", "form", "side", "K")
             if getattr(ns, k, None) is not None} - set(opts)
    if extra:
        raise UsageError(f"{entry.name} does not take " + ", ".join("--" + e for e in sorted(extra)))
    res = sweep(entry.name, ns.count, ns.seed, policy, **opts)
    summary = res.summary()
    if ns.format == "json":
        out.write(_dump({"schema": SCHEMA, "command": "sweep", "options": opts,
                         "reports": [r.as_dict() for r in res.reports], "summary": summary}))
    elif ns.format == "csv":
        out.write(_csv([_report_row(r) for r in res.reports]))
        out.write(f"# summary pass_count={summary['pass_count']} count={summary['count']} "
                  f"max_residual={summary['max_residual']!r} seed={summary['seed']}\n")
    else:
        for r in res.reports:
            out.write(_human_report(r))
        out.write(f"summary: {summary['pass_count']}/{summary['count']} pass, "
                  f"max residual {summary['max_residual']:.3e}, seed {summary['seed']}\n")
    return EXIT_OK if res.passed else EXIT_FAIL


def cmd_selftest(ns, policy, out: Output) -> int:
    def progress(res):
        if ns.json:
            out.write(_dump({"schema": SCHEMA, "command": "selftest", **res.as_dict()}))
        else:
            out.write(res.line() + "\n")
            for f in res.failures[:5]:
                out.write(f"    {f}\n")
    results = acceptance.run_all(scale=ns.scale, seed=ns.seed, policy=policy, progress=progress)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# --- parser ------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="multigamma", description="Multiple elliptic gamma and multiple sine functions.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate a function")
    e.add_argument("function", choices=EVAL_FUNCTIONS)
    _add_params(e)
    e.add_argument("--variant", choices=("upper_39", "lower_40"), default="upper_39",
                   help="product representation for S_r_product")
    e.add_argument("--side", choices=("plus_i0", "minus_i0"), default="plus_i0",
                   help="notch side for S_r_integral")
    e.add_argument("--method", choices=("series", "product"), default="series",
                   help="q_factorial evaluation path")
    _add_format(e)
    _add_policy(e)

    ids = sorted(REGISTRY) + sorted(ALIASES)
    for name, helptext in (("check", "check an identity at one point"),
                           ("sweep", "check an identity at seeded random samples")):
        c = sub.add_parser(name, help=helptext)
        c.add_argument("identity", metavar="IDENTITY", help="one of: " + ", ".join(ids))
        _add_params(c)
        c.add_argument("--sign", choices=("minus_one", "plus_one"))
        c.add_argument("--kind")
        c.add_argument("--which", choices=("theta", "elliptic_gamma"))
        c.add_argument("--form", choices=("c1", "r_plus_eps_1", "r_plus_eps_2"))
        c.add_argument("--side", choices=("plus_i0", "minus_i0"))
        c.add_argument("--K", type=int)
        if name == "check":
            c.add_argument("--j", type=int)
            c.add_argument("--lower", action="store_true", help="lower product variant (sine_literal)")
        else:
            c.add_argument("--count", type=int, required=True)
            c.add_argument("--seed", type=int, default=0)
        _add_format(c)
        _add_policy(c)

    s = sub.add_parser("selftest", help="run the acceptance suite at reduced sample counts")
    s.add_argument("--json", action="store_true", help="one JSON record per suite")
    s.add_argument("--scale", type=float, default=0.2, help="fraction of the full sample counts")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", metavar="PATH")
    _add_policy(s)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    out = Output(getattr(ns, "out", None))
    code = EXIT_OK
    try:
        policy = _policy(ns)
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            if ns.command == "eval":
                doc, code = cmd_eval(ns, policy)
                out.write(_render_eval(doc, ns.format))
            elif ns.command == "check":
                code = cmd_check(ns, policy, out)
            elif ns.command == "sweep":
                code = cmd_sweep(ns, policy, out)
            else:
                code = cmd_selftest(ns, policy, out)
    except UsageError as exc:
        print(f"multigamma: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"multigamma: inadmissible input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"multigamma: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, OverflowError) as exc:
        print(f"multigamma: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
