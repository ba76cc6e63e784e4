"""Command-line interface.

Every subcommand accepts ``--format text|json``; ``svg-domain`` also
accepts ``svg`` (its default).  JSON is printed on one line with compact
separators.  Rationals are always strings ``"p/q"``; complex numbers are
objects ``{"re": x, "im": y}``.

Exit status: 0 on success, 2 for usage errors, 3 for domain errors
(singular curve, level out of range, divergent integral, ...).  In JSON
mode a domain error prints ``{"error": message, "type": name}`` on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

from . import analytic, cubic, levels, modforms, orbifold, qseries, sl2z
from .errors import InvalidArgumentError, ModcurveError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3


# ---------------------------------------------------------------------------
# argument parsing


def parse_complex(text: str) -> complex:
    """Parse ``"a+bi"``, ``"bi"``, ``"a"`` or ``"i"`` with decimal literals."""
    raw = text.strip().replace(" ", "")
    if not raw or "j" in raw.lower():
        raise argparse.ArgumentTypeError(f"expected a complex number a+bi, got {text!r}")
    try:
        return complex(raw.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a complex number a+bi, got {text!r}") from None


def parse_scalar(text: str) -> complex | Fraction:
    """Exact ``"p/q"`` (or integer) when possible, else a complex ``"a+bi"``."""
    raw = text.strip()
    if not any(ch in raw for ch in ".eEiI"):
        try:
            return qseries.parse_rational(raw)
        except InvalidArgumentError:
            pass
    return parse_complex(raw)


def parse_matrix(text: str) -> tuple[int, int, int, int]:
    parts = text.split(",")
    try:
        values = tuple(int(p) for p in parts)
    except ValueError:
        values = ()
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"expected four integers a,b,c,d, got {text!r}")
    return values  # type: ignore[return-value]


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value


# ---------------------------------------------------------------------------
# output helpers


def _fmt_float(x: float) -> str:
    return format(x, ".15g")


def fmt_complex(z: complex) -> str:
    """Text form ``a+bi`` with the zero parts dropped."""
    z = complex(z)
    re, im = z.real, z.imag
    if im == 0:
        return _fmt_float(re)
    imag = "i" if im == 1 else "-i" if im == -1 else _fmt_float(im) + "i"
    if re == 0:
        return imag
    return _fmt_float(re) + ("" if imag.startswith("-") else "+") + imag


def json_complex(z: complex) -> dict[str, float]:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def json_scalar(x) -> Any:
    if isinstance(x, (int, Fraction)):
        return qseries.format_rational(Fraction(x))
    return json_complex(x)


def text_scalar(x) -> str:
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    return fmt_complex(x)


def dump_json(payload: Any) -> str:
    return json.dumps(payload, separators=(",", ":"), allow_nan=False)


def _text_lines(pairs: Sequence[tuple[str, Any]]) -> str:
    return "\n".join(f"{k} = {v}" for k, v in pairs)


class Output:
    """A command result with a JSON payload and a text rendering."""

    def __init__(self, payload: Any, text: Optional[str] = None, raw: Optional[str] = None):
        self.payload = payload
        self.text = text
        self.raw = raw

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return dump_json(self.payload)
        if fmt == "svg":
            return self.raw or ""
        return self.text if self.text is not None else dump_json(self.payload)


# ---------------------------------------------------------------------------
# JSON output schemas (JSON Schema draft 2020-12), one per subcommand

_RATIONAL = {"type": "string", "pattern": "^-?[0-9]+/[0-9]+$"}
_COMPLEX = {
    "type": "object",
    "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
    "required": ["re", "im"],
    "additionalProperties": False,
}
_SCALAR = {"oneOf": [_RATIONAL, _COMPLEX]}
_INT = {"type": "integer"}
_MATRIX = {"type": "array", "items": _INT, "minItems": 4, "maxItems": 4}


def _object(props: dict, optional: Sequence[str] = ()) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": [k for k in props if k not in optional],
        "additionalProperties": False,
    }


SCHEMAS: dict[str, dict] = {
    "error": _object({"error": {"type": "string"}, "type": {"type": "string"}}),
    "reduce": _object(
        {"tau": _COMPLEX, "tau_star": _COMPLEX, "gamma": _MATRIX, "word": {"type": "string"}, "stabilizer": _INT}
    ),
    "word": _object(
        {
            "matrix": _MATRIX,
            "word": {"type": "string"},
            "tokens": {"type": "array", "items": {"enum": ["S", "S^-1", "T", "T^-1"]}},
            "sign": {"enum": [1, -1]},
        }
    ),
    "qexp": _object(
        {"name": {"type": "string"}, "lead": _INT, "prec": _INT, "coeffs": {"type": "array", "items": _RATIONAL}}
    ),
    "eval": _object({k: _COMPLEX for k in ("tau", "E4", "E6", "g2", "g3", "delta", "j")}),
    "jinv": _object({"value": _COMPLEX, "tau": _COMPLEX, "residual": {"type": "number"}}),
    "curve j": _object({"j": _SCALAR, "discriminant": _SCALAR, "aut_order": {"enum": [2, 4, 6]}}),
    "curve iso": _object({"isomorphic": {"type": "boolean"}, "u": {"oneOf": [_COMPLEX, {"type": "null"}]}}),
    "curve tau": _object({"tau": _COMPLEX, "lambda": _COMPLEX}),
    "level": _object(
        {"m": _INT, "d": _INT, "cusps": _INT, "chi_open": _RATIONAL, "chi_compact": _RATIONAL, "genus": _INT}
    ),
    "cusps": _object({"m": _INT, "enumerated": _INT, "formula": _INT}),
    "euler strata": _object(
        {
            "chi": _RATIONAL,
            "strata": {
                "type": "array",
                "items": _object({"euler": _INT, "aut_order": _INT, "label": {"type": "string"}}),
            },
        }
    ),
    "euler simplicial": _object(
        {
            "chi": _RATIONAL,
            "group_order": _INT,
            "orbits": {
                "type": "array",
                "items": {
                    "type": "array",
                    "items": _object({"simplex": {"type": "array", "items": _INT}, "stabilizer": _INT}),
                },
            },
        }
    ),
    "picard": _object(
        {"weight": _INT, "twist": _INT, "class_mbar": _INT, "class_open": _INT, "order_open": _INT}
    ),
    "valence": _object(
        {
            "weight": _INT,
            "sum": _RATIONAL,
            "target": _RATIONAL,
            "holds": {"type": "boolean"},
            "class_mbar_red": _INT,
        },
        optional=["class_mbar_red"],
    ),
    "dim": _object(
        {
            "weight": _INT,
            "dim": _INT,
            "cusp_dim": _INT,
            "monomials": {"type": "array", "items": {"type": "array", "items": _INT}},
        }
    ),
    "wp": _object({"wp": _COMPLEX, "wp_prime": _COMPLEX, "ode_residual": {"type": "number"}}),
    "svg-domain": _object(
        {"depth": _INT, "tiles": _INT, "output": {"type": ["string", "null"]}, "svg": {"type": "string"}},
        optional=["svg"],
    ),
    "report": _object(
        {
            "sections": {
                "type": "object",
                "additionalProperties": _object({"header": {"type": "array"}, "rows": {"type": "array"}}),
            },
            "figures": {"type": "array", "items": {"type": "string"}},
        }
    ),
}


# ---------------------------------------------------------------------------
# subcommands


def cmd_reduce(args) -> Output:
    tau = sl2z.check_tau(args.tau)
    z, gamma = sl2z.reduce_to_fundamental_domain(tau)
    word = sl2z.word_decompose(gamma)
    residual = abs(sl2z.act(gamma, tau) - z)
    payload = {
        "tau": json_complex(tau),
        "tau_star": json_complex(z),
        "gamma": list(gamma.entries()),
        "word": str(word),
        "stabilizer": sl2z.stabilizer_order(z),
    }
    gamma_text = "I" if gamma == sl2z.IDENTITY else str(gamma)
    text = _text_lines(
        [("tau*", fmt_complex(z)), ("gamma", gamma_text), ("word", word), ("residual", _fmt_float(residual))]
    )
    return Output(payload, text)


def cmd_word(args) -> Output:
    g = sl2z.Matrix(*args.matrix)
    word = sl2z.word_decompose(g)
    payload = {"matrix": list(g.entries()), "word": str(word), "tokens": list(word.tokens), "sign": word.sign}
    return Output(payload, str(word))


def cmd_qexp(args) -> Output:
    terms = args.terms if args.terms is not None else qseries.default_terms()
    series = qseries.NAMED_SERIES[args.name](terms)
    payload = {"name": args.name, **series.to_json()}
    return Output(payload, str(series))


def cmd_eval(args) -> Output:
    values = analytic.eval_modular(args.tau)
    d = values.as_dict()
    payload = {"tau": json_complex(args.tau), **{k: json_complex(v) for k, v in d.items()}}
    return Output(payload, _text_lines([(k, fmt_complex(v)) for k, v in d.items()]))


def cmd_jinv(args) -> Output:
    c = complex(args.value)
    tau = analytic.invert_j(c)
    residual = abs(analytic.j_invariant(tau) - c) / max(1.0, abs(c))
    payload = {"value": json_complex(c), "tau": json_complex(tau), "residual": residual}
    return Output(payload, _text_lines([("tau", fmt_complex(tau)), ("residual", _fmt_float(residual))]))


def cmd_curve(args) -> Output:
    C = cubic.WeierstrassCurve(args.a, args.b)
    if args.action == "j":
        j = cubic.j_invariant(C)
        aut = cubic.automorphism_order(C)
        disc = cubic.discriminant(C)
        payload = {"j": json_scalar(j), "discriminant": json_scalar(disc), "aut_order": aut}
        text = _text_lines([("j", text_scalar(j)), ("discriminant", text_scalar(disc)), ("aut_order", aut)])
        return Output(payload, text)
    if args.action == "tau":
        tau, lam = cubic.tau_from_curve(C)
        payload = {"tau": json_complex(tau), "lambda": json_complex(lam)}
        return Output(payload, _text_lines([("tau", fmt_complex(tau)), ("lambda", fmt_complex(lam))]))
    if args.a2 is None or args.b2 is None:
        raise UsageError("curve iso needs --a2 and --b2 for the second curve")
    u = cubic.isomorphic(C, cubic.WeierstrassCurve(args.a2, args.b2))
    payload = {"isomorphic": u is not None, "u": None if u is None else json_complex(u)}
    text = _text_lines([("isomorphic", u is not None)] + ([("u", fmt_complex(u))] if u is not None else []))
    return Output(payload, text)


def cmd_level(args) -> Output:
    summary = levels.level_summary(args.m)
    payload = summary.to_json()
    return Output(payload, _text_lines(list(payload.items())))


def cmd_cusps(args) -> Output:
    count = levels.enumerate_cusps(args.m)
    formula = levels.level_summary(args.m).c_m
    payload = {"m": args.m, "enumerated": count, "formula": formula}
    return Output(payload, _text_lines(list(payload.items())))


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"{path} is not valid JSON: {exc}") from None


def cmd_euler(args) -> Output:
    if (args.input is None) == (args.builtin is None):
        raise UsageError("give exactly one of --input or --builtin")
    if args.kind == "strata":
        if args.builtin is not None:
            if args.builtin not in ("open", "compact"):
                raise UsageError("strata builtins are 'open' and 'compact'")
            strata = orbifold.moduli_strata(compact=args.builtin == "compact")
        else:
            data = _load_json(args.input)
            try:
                rows = data["strata"] if isinstance(data, dict) else data
                strata = [
                    orbifold.Stratum(int(r["euler"]), int(r["aut_order"]), str(r.get("label", "")))
                    for r in rows
                ]
            except (KeyError, TypeError, ValueError) as exc:
                raise InvalidArgumentError(f"malformed strata JSON: {exc!r}") from None
        chi = orbifold.stratified_euler(strata)
        payload = {
            "chi": qseries.format_rational(chi),
            "strata": [{"euler": s.euler, "aut_order": s.aut_order, "label": s.label} for s in strata],
        }
        return Output(payload, _text_lines([("chi", chi)]))
    if args.builtin is not None:
        if args.builtin != "hexagon":
            raise UsageError("the simplicial builtin is 'hexagon'")
        K = orbifold.hexagon_s3_complex()
    else:
        K = orbifold.EquivariantComplex.from_json(_load_json(args.input))
    chi = orbifold.simplicial_euler(K)
    orbits = orbifold.simplex_orbits(K)
    payload = {
        "chi": qseries.format_rational(chi),
        "group_order": len(K.group_elements()),
        "orbits": [[{"simplex": sorted(s), "stabilizer": n} for s, n in layer] for layer in orbits],
    }
    return Output(payload, _text_lines([("chi", chi), ("group_order", payload["group_order"])]))


def cmd_picard(args) -> Output:
    mbar = orbifold.picard_class_mbar(args.weight, args.twist)
    open_ = orbifold.picard_class_open(args.weight, args.twist)
    payload = {
        "weight": args.weight,
        "twist": args.twist,
        "class_mbar": mbar,
        "class_open": open_,
        "order_open": orbifold.element_order(open_, 12),
    }
    return Output(payload, _text_lines(list(payload.items())))


def cmd_valence(args) -> Output:
    orders = modforms.OrderVector.parse(args.orders)
    holds = modforms.valence_check(args.weight, orders)
    total = orders.weighted_sum()
    payload = {
        "weight": args.weight,
        "sum": qseries.format_rational(total),
        "target": qseries.format_rational(Fraction(args.weight, 12)),
        "holds": holds,
    }
    if holds:
        D = orbifold.form_divisor(orders.nu_i, orders.nu_rho, orders.nu_infty, dict(orders.nu_other))
        payload["class_mbar_red"] = orbifold.class_in_Cl_mbar_red(D)
    return Output(payload, _text_lines(list(payload.items())))


def cmd_dim(args) -> Output:
    w = args.weight
    payload = {
        "weight": w,
        "dim": modforms.dim_M(w),
        "cusp_dim": modforms.cusp_dim(w),
        "monomials": [list(m) for m in modforms.monomial_basis(w)],
    }
    return Output(payload, _text_lines([(k, payload[k]) for k in ("weight", "dim", "cusp_dim")]))


def cmd_wp(args) -> Output:
    p, dp = analytic.wp(args.tau, args.z)
    g2, g3 = analytic.g2_g3(args.tau)
    residual = abs(dp * dp - (4 * p**3 - g2 * p - g3)) / max(abs(dp) ** 2, abs(4 * p**3), 1.0)
    payload = {"wp": json_complex(p), "wp_prime": json_complex(dp), "ode_residual": residual}
    text = _text_lines([("wp", fmt_complex(p)), ("wp'", fmt_complex(dp)), ("ode_residual", _fmt_float(residual))])
    return Output(payload, text)


def cmd_svg_domain(args) -> Output:
    from . import plotting

    svg, count = plotting.render_tiling_svg(args.depth, args.output, ymax=args.ymax)
    payload = {"depth": args.depth, "tiles": count, "output": args.output}
    if args.output is None:
        payload["svg"] = svg
    text = _text_lines([("depth", args.depth), ("tiles", count), ("output", args.output)])
    return Output(payload, text, raw=None if args.output else svg)


def cmd_report(args) -> Output:
    from . import report

    sections, figures = report.build_report(args.outdir, depth=args.depth)
    payload = {"sections": sections, "figures": figures}
    return Output(payload, report.render_delimited(sections, figures))


class UsageError(Exception):
    """Raised by a subcommand for a bad flag combination (exit status 2)."""


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "svg"), default=None, help="output format")

    parser = argparse.ArgumentParser(
        prog="modcurve", description="Modular forms, elliptic curves and the moduli orbifold M_{1,1}."
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, func: Callable, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    p = add("reduce", cmd_reduce, "reduce tau into the fundamental domain F")
    p.add_argument("--tau", type=parse_complex, required=True)

    p = add("word", cmd_word, "write a matrix of SL2(Z) as a word in S and T")
    p.add_argument("--matrix", type=parse_matrix, required=True, help="a,b,c,d")

    p = add("qexp", cmd_qexp, "exact q-expansion of E4, E6, Delta or j")
    p.add_argument("name", choices=sorted(qseries.NAMED_SERIES))
    p.add_argument("--terms", type=positive_int, default=None, help="absolute precision O(q^N)")

    p = add("eval", cmd_eval, "evaluate E4, E6, g2, g3, Delta and j at tau")
    p.add_argument("--tau", type=parse_complex, required=True)

    p = add("jinv", cmd_jinv, "find tau in F with j(tau) = c")
    p.add_argument("--value", type=parse_complex, required=True)

    p = add("curve", cmd_curve, "Weierstrass cubics y^2 = 4x^3 - a x - b")
    p.add_argument("action", choices=("j", "iso", "tau"))
    p.add_argument("--a", type=parse_scalar, required=True)
    p.add_argument("--b", type=parse_scalar, required=True)
    p.add_argument("--a2", type=parse_scalar, default=None)
    p.add_argument("--b2", type=parse_scalar, default=None)

    p = add("level", cmd_level, "invariants of the level-m modular curve")
    p.add_argument("--m", type=int, required=True)

    p = add("cusps", cmd_cusps, "enumerate cusps of the level-m curve")
    p.add_argument("--m", type=int, required=True)

    p = add("euler", cmd_euler, "orbifold Euler characteristics")
    p.add_argument("kind", choices=("strata", "simplicial"))
    p.add_argument("--input", default=None, help="JSON file")
    p.add_argument("--builtin", default=None, help="open | compact | hexagon")

    p = add("picard", cmd_picard, "class of L_k(d infinity) in the Picard groups")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--twist", type=int, default=0)

    p = add("valence", cmd_valence, "check the valence formula for given orders of vanishing")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--orders", required=True, help='e.g. "i=1,rho=0,inf=2,P=1"')

    p = add("dim", cmd_dim, "dimension of M_w and its monomial basis")
    p.add_argument("--weight", type=int, required=True)

    p = add("wp", cmd_wp, "Weierstrass p and p' for the lattice Z + Z tau")
    p.add_argument("--tau", type=parse_complex, required=True)
    p.add_argument("--z", type=parse_complex, required=True)

    p = add("svg-domain", cmd_svg_domain, "SVG tiling of the upper half plane by translates of F")
    p.add_argument("--depth", type=nonnegative_int, required=True)
    p.add_argument("--output", default=None, help="write the SVG here instead of stdout")
    p.add_argument("--ymax", type=float, default=2.0)

    p = add("report", cmd_report, "summary tables with figures written to a directory")
    p.add_argument("--outdir", default="modcurve-report")
    p.add_argument("--depth", type=nonnegative_int, default=3)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = args.format or ("svg" if args.command == "svg-domain" else "text")
    if fmt == "svg" and args.command != "svg-domain":
        parser.print_usage(sys.stderr)
        print("modcurve: error: --format svg is only valid for svg-domain", file=sys.stderr)
        return EXIT_USAGE
    try:
        out = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"modcurve: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModcurveError as exc:
        print(f"modcurve: {type(exc).__name__}: {exc}", file=sys.stderr)
        if fmt == "json":
            print(dump_json({"error": str(exc), "type": type(exc).__name__}))
        return EXIT_DOMAIN
    text = out.render(fmt)
    if text:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


def run() -> None:
    sys.exit(main())
