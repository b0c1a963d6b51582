"""Command line front end.

Usage::

    varweyl SUBCOMMAND [--config PATH] [--out PATH] [--seed N] [--tol X] [--jobs N] [...]

Subcommands
-----------
norm        Luxemburg norm of ``f`` on an interval.
seminorm    One seminorm value ``(f, tau, l)``.
membership  Almost-period membership verdict.
vanishing   Vanishing verdict for the iterated limit.
convolve    Infinite convolution ``R * g`` on an ``x`` grid (and ``H``, ``H1``, ``H2`` when ``q`` is given).
check       Hypothesis table of a convolution theorem.
frac        Caputo / Weyl-Liouville derivative or mild solution.
paper-suite Recompute the pinned example table and compare it with the stored one.
export      Write the stored example table or the defaults table.

Exit status: 0 when everything is satisfied, 1 on a violation or a suite
mismatch, 2 on a usage or configuration error.

Configuration grammar
---------------------
A configuration is read line by line::

    config      := { line }
    line        := blank | comment | section | assignment
    comment     := ("#" | ";") any-text
    section     := "[" name "]"
    assignment  := key "=" value

Keys must belong to the section they are written in (see ``DEFAULTS``);
unknown sections or keys are errors reported with their line number.
Values are numbers, booleans (``true``/``false``), bare words for
enumerations, comma-separated number lists, or spec expressions such as
``Indicator(0, 0.5)``, ``Periodic(Indicator(0, 0.5), 1)``,
``PowerOfL(-1)``, ``PolyDecay(1, 1, 2)`` and ``geometric(1, 256, 9)``.
Only the constructors listed in ``SPEC_NAMES`` may be called.
"""
from __future__ import annotations

import argparse
import ast
import configparser
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import funcspace as fs

# ---------------------------------------------------------------------------
# expression language
# ---------------------------------------------------------------------------


class ConfigError(ValueError):
    """Invalid configuration; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, key: str | None = None):
        self.line, self.key = line, key
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


def _psi_power(sigma: float, p=1.0):
    return fs.PsiPower.power(float(sigma), _as_exponent(p))


def _piecewise_exponent(breaks, values):
    return fs.PiecewiseConstantExponent(list(breaks), list(values))


SPEC_NAMES: dict[str, Callable] = {
    # functions
    "Indicator": fs.Indicator,
    "Heaviside": fs.Heaviside,
    "Constant": fs.Constant,
    "SpikeTrain": fs.SpikeTrain,
    "Periodic": fs.Periodic,
    "Sinusoid": fs.Sinusoid,
    "PiecewiseConstant": fs.PiecewiseConstant,
    "Sampled": fs.Sampled,
    "Scale": fs.Scale,
    "Sum": lambda *parts: fs.Sum(list(parts)),
    "Translate": fs.Translate,
    "Reflect": fs.Reflect,
    "Restrict": fs.Restrict,
    # exponents
    "Exponent": lambda p: fs.ConstantExponent(float(p)),
    "PiecewiseExponent": _piecewise_exponent,
    # phi
    "Identity": fs.IdentityPhi,
    "Power": fs.PowerPhi,
    "Catalog": fs.CatalogPhi,
    # weights
    "PowerOfL": fs.PowerOfL,
    "PsiPower": _psi_power,
    "One": fs.ConstantOne,
    # kernels
    "PolyDecay": fs.PolyDecay,
    "ExpDecay": fs.ExpDecay,
    "TableKernel": fs.TableKernel,
    # sequences
    "Geometric": fs.Geometric,
    "TwoSidedGeometric": fs.TwoSidedGeometric,
    # grids
    "geometric": fs.GridSpec.geometric,
    "uniform": fs.GridSpec.uniform,
    "linspace": fs.GridSpec.linspace,
    "points": lambda *xs: fs.GridSpec.explicit([float(x) for x in xs]),
}

_CONSTANTS = {"pi": math.pi, "e": math.e, "inf": math.inf}
_NUMPY_FUNCS = {name: getattr(np, name) for name in
                ("sin", "cos", "tan", "exp", "log", "log1p", "expm1", "sqrt", "abs", "tanh", "sinh", "cosh",
                 "arctan", "heaviside", "sign", "minimum", "maximum")}
_BINOPS = {ast.Add: lambda a, b: a + b, ast.Sub: lambda a, b: a - b, ast.Mult: lambda a, b: a * b,
           ast.Div: lambda a, b: a / b, ast.Pow: lambda a, b: a ** b}


def evaluate_expression(text: str, names: dict[str, Any]) -> Any:
    """Evaluate ``text`` allowing only literals, arithmetic and calls of ``names``.

    >>> evaluate_expression("Indicator(0, 0.5)", SPEC_NAMES)
    Indicator(0, 0.5)
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, str)):
            return node.value
        if isinstance(node, (ast.Tuple, ast.List)):
            return [ev(e) for e in node.elts]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.Name):
            if node.id in names and not callable(names[node.id]):
                return names[node.id]
            if node.id in _CONSTANTS:
                return _CONSTANTS[node.id]
            if node.id in names:
                return names[node.id]()
            raise ValueError(f"unknown name {node.id!r}")
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            if node.func.id not in names or not callable(names[node.func.id]):
                raise ValueError(f"unknown name {node.func.id!r}")
            args = [ev(a) for a in node.args]
            kwargs = {k.arg: ev(k.value) for k in node.keywords if k.arg is not None}
            return names[node.func.id](*args, **kwargs)
        raise ValueError(f"expression element {type(node).__name__} is not allowed")

    return ev(tree)


def function_of_t(text: str) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized function of ``t`` from an arithmetic expression such as ``"t**2 + sin(t)"``."""
    names = dict(_NUMPY_FUNCS)

    def fn(t):
        t = np.asarray(t, dtype=float)
        out = evaluate_expression(text, {**names, "t": t})
        return np.broadcast_to(np.asarray(out, dtype=float), t.shape)

    fn(np.array([1.0]))  # fail early on bad expressions
    return fn


def _as_exponent(value) -> fs.ExponentSpec:
    if isinstance(value, fs.ExponentSpec):
        return value
    return fs.ConstantExponent(float(value))


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

_KINDS = ("function", "exponent", "phi", "weight", "kernel", "sequence", "grid", "float", "int", "floats",
          "bool", "word", "text")

DEFAULTS: dict[str, dict[str, tuple[str, str, str]]] = {
    # section: key: (kind, default, description)
    "data": {
        "f": ("function", "Indicator(0, 0.5)", "function under study"),
        "g": ("function", "Sinusoid(1)", "input of the infinite convolution"),
        "q": ("function", "", "half-line forcing of the finite convolution"),
        "kernel": ("kernel", "ExpDecay(1, 1, 1)", "convolution kernel R"),
    },
    "class": {
        "p": ("exponent", "1", "exponent of the class"),
        "q": ("exponent", "", "kernel exponent; conjugate of p when empty"),
        "phi": ("phi", "Identity", "inner map"),
        "varphi": ("phi", "Identity", "companion map of the convolution checks"),
        "F": ("weight", "One", "weight of the class"),
        "F1": ("weight", "One", "weight of the target class"),
        "family": ("word", "paren", "paren or bracket"),
        "variant": ("word", "base", "base, sub1 or sub2"),
        "domain": ("word", "R", "R or half"),
        "equi": ("bool", "true", "equi class (one l per epsilon)"),
        "order": ("word", "equi", "iterated-limit order: equi or weyl"),
        "eps": ("floats", "0.5, 0.2, 0.1", "strictly decreasing tolerances"),
        "theorem": ("word", "jensen", "theorem checked by the check subcommand"),
        "a": ("sequence", "Geometric(0.5)", "weights a_k"),
        "b": ("float", "1", "constant b_k"),
    },
    "grid": {
        "tau": ("float", "1", "shift"),
        "l": ("float", "1", "window length"),
        "interval": ("floats", "0, 1", "interval of the norm subcommand"),
        "l_grid": ("grid", "", "window-length grid; module default when empty"),
        "t_grid": ("grid", "", "position grid; module default when empty"),
        "x_grid": ("grid", "linspace(-10, 10, 21)", "evaluation points of convolve"),
        "L": ("floats", "1, 2, 4, 8", "relative-density lengths"),
        "scan_start": ("float", "", "left end of the scanned shifts; module default when empty"),
        "x_points": ("int", "256", "x samples of the vanishing functional"),
    },
    "frac": {
        "op": ("word", "caputo", "caputo, weyl or mild"),
        "zeta": ("float", "0.5", "order in (0, 1]"),
        "fn": ("text", "t", "function of t"),
        "t": ("float", "1", "evaluation point"),
        "step": ("float", "", "difference step; 1e-3 max(1, t) when empty"),
        "u0": ("float", "1", "initial value of the mild solution"),
    },
    "run": {
        "tol": ("float", "1e-10", "tolerance"),
        "seed": ("int", "0", "seed of randomized suites"),
        "jobs": ("int", "1", "worker processes"),
    },
}


@dataclass
class RunConfig:
    """Validated configuration: ``values[section][key]`` holds parsed values (None when empty)."""

    subcommand: str = ""
    values: dict[str, dict[str, Any]] = field(default_factory=dict)
    out: str | None = None

    def get(self, section: str, key: str) -> Any:
        return self.values[section][key]


def _parse_value(kind: str, raw: str, key: str):
    raw = raw.strip()
    if raw == "":
        return None
    if kind == "float":
        return float(evaluate_expression(raw, {}))
    if kind == "int":
        return int(raw)
    if kind == "floats":
        vals = evaluate_expression(raw if raw.startswith("[") else f"[{raw}]", {})
        return tuple(float(v) for v in vals)
    if kind == "bool":
        low = raw.lower()
        if low not in ("true", "false", "yes", "no", "1", "0"):
            raise ValueError(f"{raw!r} is not a boolean")
        return low in ("true", "yes", "1")
    if kind in ("word", "text"):
        return raw
    value = evaluate_expression(raw, SPEC_NAMES)
    expected = {"function": fs.FunctionSpec, "phi": fs.PhiSpec, "weight": fs.WeightSpec, "kernel": fs.KernelSpec,
                "sequence": fs.SequenceSpec, "grid": fs.GridSpec}
    if kind == "exponent":
        value = _as_exponent(value)
        if value.p_minus < 1.0:
            raise ValueError("exponent below 1")
        return value
    if not isinstance(value, expected[kind]):
        raise ValueError(f"expected a {kind} specification, got {type(value).__name__}")
    return value


def _key_lines(text: str) -> dict[tuple[str, str], int]:
    lines: dict[tuple[str, str], int] = {}
    section = None
    for i, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            section = s[1:-1].strip()
        elif "=" in s and not s.startswith(("#", ";")) and section is not None:
            lines[(section, s.split("=", 1)[0].strip())] = i
        elif section is None and s and not s.startswith(("#", ";")):
            raise ConfigError("assignment outside a section", i)
    return lines


def parse_config(text: str, subcommand: str = "") -> RunConfig:
    """Parse and validate a configuration text; every key gets its default when absent.

    Raises
    ------
    ConfigError
        Syntax errors and unknown sections or keys carry the line number;
        invalid values name their key.
    """
    lines = _key_lines(text)
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#", ";"), interpolation=None,
                                       strict=True, empty_lines_in_values=False)
    parser.optionxform = str  # keys are case sensitive (F and F1)
    try:
        parser.read_string(text)
    except configparser.DuplicateOptionError as exc:
        raise ConfigError(f"duplicate key {exc.option!r}", exc.lineno) from exc
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section {exc.section!r}", exc.lineno) from exc
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError("cannot parse line", lineno) from exc
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0]) from exc
    values: dict[str, dict[str, Any]] = {}
    for section in parser.sections():
        if section not in DEFAULTS:
            line = next((i for i, l in enumerate(text.splitlines(), 1) if l.strip() == f"[{section}]"), None)
            raise ConfigError(f"unknown section [{section}]", line)
        for key in parser[section]:
            if key not in DEFAULTS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]", lines.get((section, key)), key)
    for section, table in DEFAULTS.items():
        values[section] = {}
        for key, (kind, default, _) in table.items():
            given = parser.has_option(section, key)
            raw = parser[section][key] if given else default
            try:
                values[section][key] = _parse_value(kind, raw, key)
            except Exception as exc:  # noqa: BLE001 - every failure becomes a config error
                raise ConfigError(f"invalid value for {key!r}: {exc}", lines.get((section, key)) if given else None,
                                  key) from exc
    cls = values["class"]
    for key, allowed in (("family", ("paren", "bracket")), ("variant", ("base", "sub1", "sub2")),
                         ("domain", ("R", "half")), ("order", ("equi", "weyl"))):
        if cls[key] not in allowed:
            raise ConfigError(f"{key} must be one of {allowed}", lines.get(("class", key)), key)
    if values["frac"]["op"] not in ("caputo", "weyl", "mild"):
        raise ConfigError("op must be caputo, weyl or mild", lines.get(("frac", "op")), "op")
    return RunConfig(subcommand, values)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _fmt(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    if isinstance(v, (tuple, list)):
        return " ".join(_fmt(x) for x in v)
    return str(v)


def write_csv(rows: list[dict], path: str | None, stream=None) -> str:
    """Comma-separated table with a header row (union of keys in first-seen order)."""
    header: list[str] = []
    for r in rows:
        for k in r:
            if k not in header:
                header.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(r.get(k)) for k in header])
    text = buf.getvalue()
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    elif stream is not None:
        stream.write(text)
    return text


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _require(cfg: RunConfig, section: str, key: str):
    v = cfg.get(section, key)
    if v is None:
        raise ConfigError(f"[{section}] {key} is required by {cfg.subcommand}", key=key)
    return v


def _status_code(status) -> int:
    from .verdict import Status

    return 1 if status is Status.VIOLATED else 0


def cmd_norm(cfg: RunConfig, out) -> int:
    from .varlebesgue import luxemburg_norm

    a, b = _require(cfg, "grid", "interval")
    f = _require(cfg, "data", "f")
    res = luxemburg_norm(f, cfg.get("class", "p"), a, b, tol=cfg.get("run", "tol"))
    rows = [{"a": a, "b": b, "norm": float(res)}]
    print(f"norm on [{a:g}, {b:g}] = {float(res):.12g}", file=out)
    write_csv(rows, cfg.out)
    return 0


def _seminorm_request(cfg: RunConfig):
    from .weylnorms import SeminormRequest

    c, g = cfg.values["class"], cfg.values["grid"]
    return SeminormRequest(_require(cfg, "data", "f"), g["tau"], c["p"], c["phi"], c["F"], g["l"], c["family"],
                           c["variant"], g["t_grid"], c["domain"])


def cmd_seminorm(cfg: RunConfig, out) -> int:
    from .weylnorms import seminorm

    req = _seminorm_request(cfg)
    res = seminorm(req)
    print(f"seminorm(tau={req.tau:g}, l={req.l:g}) = {res.value:.12g} at t = {res.argmax_t:.6g}", file=out)
    write_csv([{"t": t, "value": v} for t, v in zip(res.curve_t, res.curve_values)], cfg.out)
    return 0


def _class_config(cfg: RunConfig):
    from .apclass import ClassConfig

    c, g = cfg.values["class"], cfg.values["grid"]
    kw = dict(p=c["p"], phi=c["phi"], F=c["F"], family=c["family"], variant=c["variant"], domain=c["domain"],
              equi=c["equi"], eps=c["eps"], L_ladder=g["L"], scan_start=g["scan_start"], t_grid=g["t_grid"])
    if g["l_grid"] is not None:
        kw["l_search" if c["equi"] else "limsup_l_grid"] = g["l_grid"]
    return ClassConfig(**kw)


def _print_verdict(v, out) -> None:
    print(str(v), file=out)


def cmd_membership(cfg: RunConfig, out) -> int:
    from .apclass import membership_report

    v = membership_report(_require(cfg, "data", "f"), _class_config(cfg))
    _print_verdict(v, out)
    write_csv(v.diagnostics, cfg.out)
    return _status_code(v.status)


def _vanishing_config(cfg: RunConfig):
    from .ergodic import VanishingConfig

    c, g = cfg.values["class"], cfg.values["grid"]
    return VanishingConfig(p=c["p"], phi=c["phi"], F=c["F"], variant=c["variant"], order=c["order"],
                           l_grid=g["l_grid"], t_grid=g["t_grid"], x_points=g["x_points"])


def cmd_vanishing(cfg: RunConfig, out) -> int:
    from .ergodic import vanishing_verdict

    v = vanishing_verdict(_require(cfg, "data", "f"), _vanishing_config(cfg))
    _print_verdict(v, out)
    write_csv(v.diagnostics, cfg.out)
    return _status_code(v.status)


def cmd_convolve(cfg: RunConfig, out) -> int:
    from .convolution import ConvolutionFunction, finite_convolution_split

    R = cfg.get("data", "kernel")
    g = cfg.get("data", "g")
    q = cfg.get("data", "q")
    tol = cfg.get("run", "tol")
    xs = cfg.get("grid", "x_grid").points()
    rows = []
    if q is None:
        G = ConvolutionFunction(R, g, tol=tol)
        vals = G.values(xs)[:, 0]
        rows = [{"x": x, "G": v} for x, v in zip(xs, vals)]
    else:
        for x in xs:
            if x < 0:
                continue
            s = finite_convolution_split(R, g, q, float(x), tol)
            rows.append({"t": x, "H": s.H, "H1": s.H1, "H2": s.H2, "G": s.G})
    print(f"{len(rows)} points", file=out)
    write_csv(rows, cfg.out, None if cfg.out else out)
    return 0


def _convolution_config(cfg: RunConfig):
    from .convolution import ConvolutionConfig

    c, g = cfg.values["class"], cfg.values["grid"]
    kw = dict(R=cfg.get("data", "kernel"), p=c["p"], q=c["q"], phi=c["phi"], varphi=c["varphi"], F=c["F"],
              F1=c["F1"], a=c["a"], b=c["b"], eps=c["eps"], tol=max(cfg.get("run", "tol"), 1e-8))
    if g["l_grid"] is not None:
        kw["l_grid"] = g["l_grid"]
    if g["t_grid"] is not None:
        kw["t_grid"] = g["t_grid"]
    return ConvolutionConfig(**kw)


def cmd_check(cfg: RunConfig, out) -> int:
    from .convolution import check_theorem

    rep = check_theorem(cfg.get("class", "theorem"), _convolution_config(cfg))
    print(f"{rep.theorem}: {rep.verdict}; conclusion {rep.conclusion}", file=out)
    for note in rep.notes:
        print(f"  note: {note}", file=out)
    write_csv(rep.condition_table, cfg.out)
    return _status_code(rep.verdict.status)


def cmd_frac(cfg: RunConfig, out) -> int:
    from .fractional import FracConfig, caputo_derivative, mild_solution_dfp, weyl_liouville_derivative

    fr = cfg.values["frac"]
    fn = function_of_t(fr["fn"])
    t = fr["t"]
    if fr["op"] == "caputo":
        u = fs.CallableFunction(fn, lower=0.0, name=fr["fn"])
        value = caputo_derivative(u, fr["zeta"], t, FracConfig(zeta=fr["zeta"], step=fr["step"]))
        extra = {}
    elif fr["op"] == "weyl":
        u = fs.CallableFunction(fn, name=fr["fn"])
        res = weyl_liouville_derivative(u, fr["zeta"], t, FracConfig(zeta=fr["zeta"], step=fr["step"]))
        value, extra = res.value, {"status": str(res.status), "tail_bound": res.tail_bound}
    else:
        f = fs.CallableFunction(fn, lower=0.0, name=fr["fn"])
        value = mild_solution_dfp(cfg.get("data", "kernel"), fr["u0"], f, t)
        extra = {}
    print(f"{fr['op']}(zeta={fr['zeta']:g}, t={t:g}) = {value:.12g}", file=out)
    write_csv([{"op": fr["op"], "zeta": fr["zeta"], "t": t, "value": value, **extra}], cfg.out)
    return 0


def cmd_paper_suite(cfg: RunConfig, out, selection: str) -> int:
    from .suite import compare_with_expected, run_suite

    rows = run_suite(selection, seed=cfg.get("run", "seed"), jobs=cfg.get("run", "jobs"))
    mismatches = compare_with_expected(rows)
    for r in rows:
        mark = "MISMATCH" if r["case"] in mismatches else "ok"
        print(f"{mark:8s} {r['case']:40s} {r['verdict']:22s} {_fmt(r['value'])}", file=out)
    write_csv(rows, cfg.out)
    for case, why in mismatches.items():
        print(f"mismatch in {case}: {why}", file=out)
    print(f"{len(rows)} cases, {len(mismatches)} mismatches", file=out)
    return 1 if mismatches else 0


def cmd_export(cfg: RunConfig, out, what: str) -> int:
    from .suite import expected_rows

    if what == "suite":
        write_csv(expected_rows(), cfg.out, None if cfg.out else out)
    else:
        rows = [{"section": s, "key": k, "kind": kind, "default": d, "description": desc}
                for s, table in DEFAULTS.items() for k, (kind, d, desc) in table.items()]
        write_csv(rows, cfg.out, None if cfg.out else out)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

SUBCOMMANDS = ("norm", "seminorm", "membership", "vanishing", "convolve", "check", "frac", "paper-suite", "export")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="configuration file")
    common.add_argument("--out", metavar="PATH", help="CSV output file")
    common.add_argument("--seed", type=int, help="seed of randomized suites")
    common.add_argument("--tol", type=float, help="tolerance")
    common.add_argument("--jobs", type=int, help="worker processes")
    parser = argparse.ArgumentParser(prog="varweyl", description="Weyl almost periodicity toolkit")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, parents=[common])
        if name == "paper-suite":
            from .suite import SELECTIONS

            sp.add_argument("selection", nargs="?", default="all", choices=SELECTIONS)
        elif name == "export":
            sp.add_argument("what", nargs="?", default="suite", choices=("suite", "defaults"))
        elif name == "frac":
            sp.add_argument("op", nargs="?", choices=("caputo", "weyl", "mild"))
            sp.add_argument("--zeta", type=float)
            sp.add_argument("--fn", metavar="EXPR", help="function of t, e.g. 't**2'")
            sp.add_argument("--t", type=float, dest="t_value")
        elif name == "check":
            sp.add_argument("theorem", nargs="?")
    return parser


def load_config(args) -> RunConfig:
    text = ""
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from exc
    cfg = parse_config(text, args.subcommand)
    cfg.out = args.out
    run = cfg.values["run"]
    for key in ("seed", "tol", "jobs"):
        if getattr(args, key, None) is not None:
            run[key] = getattr(args, key)
    if run["jobs"] < 1 or not run["tol"] > 0:
        raise ConfigError("jobs must be at least 1 and tol positive")
    if args.subcommand == "frac":
        fr = cfg.values["frac"]
        for attr, key in (("op", "op"), ("zeta", "zeta"), ("fn", "fn"), ("t_value", "t")):
            if getattr(args, attr, None) is not None:
                fr[key] = getattr(args, attr)
        if not 0 < fr["zeta"] <= 1:
            raise ConfigError("zeta must lie in (0, 1]", key="zeta")
    if args.subcommand == "check" and getattr(args, "theorem", None):
        cfg.values["class"]["theorem"] = args.theorem
    return cfg


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    try:
        cfg = load_config(args)
        if args.subcommand == "paper-suite":
            return cmd_paper_suite(cfg, out, args.selection)
        if args.subcommand == "export":
            return cmd_export(cfg, out, args.what)
        handler = {"norm": cmd_norm, "seminorm": cmd_seminorm, "membership": cmd_membership,
                   "vanishing": cmd_vanishing, "convolve": cmd_convolve, "check": cmd_check,
                   "frac": cmd_frac}[args.subcommand]
        return handler(cfg, out)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
