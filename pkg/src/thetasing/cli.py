"""Command-line entry point ``thetasing``.

Matrix and vector arguments are Python literals (``"[[1j, 0.3], [0.3, 1.2j]]"``)
or come from a JSON ``--input`` file (schema in ``thetasing.serialize``). Matrix
entries on the command line are 1-based. Exact rationals print as ``p/q``.
"""

from __future__ import annotations

import argparse
import ast
import json
import sys
import warnings

import numpy as np

from . import chow, prym, serialize
from .errors import ThetaSingError
from .pfaffian import rk4_equivalence_check
from .ratlinalg import format_fraction
from .report import FORMATS, SECTIONS, run_report
from .singular import (SingCandidate, TwoTorsion, product_singular_point, thetanull_path, two_torsion_point,
                       verify_singular)
from .theta import Characteristic, EvalConfig, PeriodMatrix, heat_residual, theta_jet, theta_value


def _literal(text):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        raise argparse.ArgumentTypeError(f"cannot parse {text!r} as a number or nested list") from None


def _tau(obj) -> PeriodMatrix:
    if isinstance(obj, PeriodMatrix):
        return obj
    a = np.array(obj, dtype=complex)
    return PeriodMatrix(a.reshape(1, 1) if a.ndim < 2 else a)


def _entry(text: str) -> tuple[int, int]:
    try:
        j, k = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("entry must look like '1,2'") from None
    if j < 1 or k < 1:
        raise argparse.ArgumentTypeError("entries are 1-based")
    return j - 1, k - 1


def _inputs(args) -> dict:
    data = serialize.load(args.input) if getattr(args, "input", None) else {}
    for key in ("tau", "z", "char"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = Characteristic.parse(val) if key == "char" else val
    if "tau" not in data:
        raise ValueError("a period matrix is required (--tau or --input)")
    data["tau"] = _tau(data["tau"])
    g = data["tau"].g
    data["z"] = np.atleast_1d(np.asarray(data.get("z", np.zeros(g)), dtype=complex))
    data.setdefault("char", Characteristic.zero(g))
    return data


def _emit(args, record: dict, text: str):
    out = serialize.dumps(record) + "\n" if args.format == "json" else text.rstrip("\n") + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _cfg(args) -> EvalConfig:
    return EvalConfig(tol=args.tol)


def _table(rows, headers) -> str:
    rows = [[str(x) for x in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(headers)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*headers), fmt.format(*("-" * w for w in widths))] + [fmt.format(*r) for r in rows]
    return "\n".join(line.rstrip() for line in lines)


def _c(x) -> str:
    x = complex(x)
    return f"{x.real:+.15e}{x.imag:+.15e}j"


# theta ---------------------------------------------------------------------

def cmd_theta(args):
    d = _inputs(args)
    tau, z, ch, cfg = d["tau"], d["z"], d["char"], _cfg(args)
    if args.action == "eval":
        v = theta_value(tau, z, ch, cfg)
        _emit(args, {"char": str(ch), "value": serialize.complex_to_json(v)}, f"theta[{ch}] = {_c(v)}")
    elif args.action == "jet":
        jet = theta_jet(tau, z, ch, cfg)
        rec = {"char": str(ch), "value": serialize.complex_to_json(jet.value), "grad": serialize.vector_to_json(jet.grad),
               "hess": serialize.tau_to_json(jet.hess), "trunc_bound": repr(jet.trunc_bound), "radius": jet.radius}
        lines = [f"value = {_c(jet.value)}", "grad  = [" + ", ".join(_c(x) for x in jet.grad) + "]", "hess  ="]
        lines += ["  [" + ", ".join(_c(x) for x in row) + "]" for row in jet.hess]
        lines.append(f"trunc_bound = {jet.trunc_bound:g}  radius = {jet.radius}")
        _emit(args, rec, "\n".join(lines))
    else:
        j, k = args.entry
        r = heat_residual(tau, z, ch, j, k, args.h, cfg)
        _emit(args, {"entry": [j + 1, k + 1], "h": repr(args.h), "residual": repr(r)},
              f"heat residual at ({j + 1},{k + 1}) = {r:.3e}")
    return 0


# sing ----------------------------------------------------------------------

def _sing_record(c: SingCandidate, rep) -> tuple[dict, str]:
    rec = {"candidate": serialize.candidate_to_json(c), "report": serialize.report_to_json(rep)}
    rows = [
        ("value_norm", f"{rep.value_norm:.3e}"),
        ("grad_norm", f"{rep.grad_norm:.3e}"),
        ("singular_values", ", ".join(f"{s:.6g}" for s in rep.hess_singular_values)),
        ("numeric_rank", f"{rep.numeric_rank} / {rep.g}"),
        ("singular", rep.singular),
        ("in_Snull", rep.in_Snull),
        ("in_Sdec", rep.in_Sdec),
        ("hess_degenerate", rep.hess_degenerate),
    ]
    return rec, _table(rows, ("field", "value"))


def cmd_sing(args):
    cfg = _cfg(args)
    if args.action == "product":
        tau2 = _tau(args.tau2)
        z2 = args.z2 if args.z2 is not None else [(1 + tau2.tau[0, 0]) / 2] if tau2.g == 1 else None
        if z2 is None:
            raise ValueError("--z2 is required when the second factor has genus > 1")
        cand = product_singular_point(_tau(args.tau1), tau2, z2, cfg)
    elif args.action == "thetanull":
        ch = Characteristic.parse(args.char)
        start = _tau(args.tau) if args.tau is not None else PeriodMatrix(1j * np.eye(args.genus))
        tau = thetanull_path(args.genus, ch, start, args.entry, seed=args.seed)
        cand = SingCandidate(tau, two_torsion_point(tau, ch), TwoTorsion(ch))
    else:
        if not args.input:
            raise ValueError("sing verify needs --input FILE with a candidate record")
        with open(args.input, encoding="utf-8") as fh:
            obj = json.load(fh)
        cand = serialize.candidate_from_json(obj.get("candidate", obj))
    rep = verify_singular(cand, cfg)
    rec, text = _sing_record(cand, rep)
    if args.action == "thetanull":
        text = "tau* =\n" + "\n".join("  [" + ", ".join(_c(x) for x in row) + "]" for row in cand.tau.tau) + "\n" + text
    _emit(args, rec, text)
    return 0


# pfaff ---------------------------------------------------------------------

def cmd_pfaff(args):
    rep = rk4_equivalence_check(args.trials, args.seed)
    d = rep.as_dict()
    text = (f"trials {rep.trials}  seed {rep.seed}\nchecked {rep.checked}  agreements {rep.agreements}  "
            f"zero quadric {rep.zero_quadric}  unsupported kernel {rep.unsupported_kernel}\n"
            f"{len(rep.counterexamples)} counterexamples")
    for ce in rep.counterexamples:
        text += "\n" + json.dumps(ce)
    _emit(args, d, text)
    return 0 if rep.ok else 1


# classes / prym ------------------------------------------------------------

def cmd_classes(args):
    if args.which == "ag":
        rows = chow.ag_table(args.genus)
        rec = {"genus": args.genus, "rows": [{"class": n, "coefficient": format_fraction(v)} for n, v in rows]}
        table = _table([(n, "lambda1" if i < 3 else "lambda1^2", format_fraction(v), chow.factor_int(v))
                        for i, (n, v) in enumerate(rows)], ("class", "unit", "coefficient", "factored"))
        _emit(args, rec, f"genus {args.genus}\n{table}")
    else:
        rows = []
        rec = {}
        for name, kc in prym.known_classes().items():
            rec[name] = {"basis": kc.cls.basis.name, "coeffs": kc.cls.as_strings(), "citation": kc.citation}
            rows.append((name, kc.cls.basis.name, str(kc.cls), kc.citation))
        rows.append(("pi^*(delta0)", "R6tilde", str(prym.pullback_pi().image("delta0")), "pullback to R6tilde"))
        for s in prym.A5BAR.symbols:
            rows.append((f"P^*({s})", "R6tilde", str(prym.pullback_P().image(s)), "Prym pullback"))
        _emit(args, rec, _table(rows, ("name", "basis", "class", "citation")))
    return 0


def _cert_out(args, cert):
    rec = {"name": cert.name, "citation": cert.citation, "passed": cert.passed, "trace": cert.trace}
    _emit(args, rec, cert.render())
    return 0 if cert.passed else 1


def cmd_push(args):
    sol = prym.solve_prym_pushforward(strict=False)
    rows = [(f"P_*({k})", str(v), ", ".join(v.as_strings())) for k, v in sol.images.items()]
    rec = {"images": {k: v.as_strings() for k, v in sol.images.items()}, "passed": sol.certificate.passed,
           "trace": sol.certificate.trace}
    _emit(args, rec, _table(rows, ("image", "class", "coords")) + "\n" + sol.certificate.render())
    return 0 if sol.certificate.passed else 1


def cmd_slope(args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rows = [(name, format_fraction(prym.slope(kc.cls))) for name, kc in prym.known_classes().items()
                if kc.cls.basis == prym.A5BAR]
    s = prym.slope(prym.known_classes()["N0prime_A5"].cls)
    rec = {"slope_A5": format_fraction(s), "classes": dict(rows)}
    _emit(args, rec, f"{format_fraction(s)}\n" + _table(rows, ("class", "slope")))
    return 0


def cmd_testcurve(args):
    curve = prym.R_PENCIL
    for spec in args.set or []:
        label, value = spec.split("=")
        curve = curve.with_value(label, _literal(value))
    cert = prym.slope_certificate(curve, strict=False)
    known = prym.known_classes()
    pairs = {
        "Qtilde": prym.testcurve_pairing(known["Qtilde"].cls, curve),
        "pi^*(delta0)": prym.testcurve_pairing(prym.pullback_pi().image("delta0"), curve),
        "U": prym.testcurve_pairing(prym._pi_silent(known["GP_6_4"].cls), curve),
        "P^*(lambda1)": prym.testcurve_pairing(prym.pullback_P().image("lambda1"), curve),
    }
    rows = [(f"{curve.name}.{k}", format_fraction(v)) for k, v in pairs.items()]
    rec = {"curve": [format_fraction(x) for x in curve.pairing], "pairings": {k: format_fraction(v) for k, v in pairs.items()},
           "certificate": {"passed": cert.passed, "trace": cert.trace}}
    _emit(args, rec, _table(rows, ("pairing", "value")) + "\n" + cert.render())
    return 0 if cert.passed else 1


def cmd_taut(args):
    return _cert_out(args, prym.taut_vX_class(strict=False))


def cmd_mult(args):
    m = prym.multiplicity_J5()
    fields = ("chi_C4", "chi_W14", "chi_C14", "chi_W4", "chi_theta_gen", "nodes", "mult", "delta0pp_coefficient")
    rec = {f: format_fraction(getattr(m, f)) for f in fields}
    _emit(args, rec, _table([(f, rec[f]) for f in fields], ("quantity", "value")))
    return 0


def cmd_report(args):
    sections = SECTIONS if args.sections is None else tuple(s for s in args.sections.split(",") if s)
    fmt = args.format if args.format in FORMATS else "md"
    doc, code = run_report(sections, fmt, seed=args.seed, out=args.out, timings=args.timings)
    if not args.out:
        sys.stdout.write(doc)
    return code


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-12, help="absolute truncation tolerance")
    common.add_argument("--input", help="JSON input file")
    common.add_argument("--format", choices=("text", "json", "md", "csv"), default="text")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--out", help="write output to FILE instead of stdout")

    p = argparse.ArgumentParser(prog="thetasing", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("theta", parents=[common], help="evaluate theta functions")
    t.add_argument("action", choices=("eval", "jet", "heat"))
    t.add_argument("--tau", type=_literal)
    t.add_argument("--z", type=_literal)
    t.add_argument("--char", help="characteristic as 'eps|delta'")
    t.add_argument("--entry", type=_entry, default=(0, 0), help="1-based j,k for heat")
    t.add_argument("--h", type=float, default=1e-4)
    t.set_defaults(func=cmd_theta)

    s = sub.add_parser("sing", parents=[common], help="construct and verify singular points")
    s.add_argument("action", choices=("product", "thetanull", "verify"))
    s.add_argument("--tau1", type=_literal, default=[[1j]])
    s.add_argument("--tau2", type=_literal, default=[[1j]])
    s.add_argument("--z2", type=_literal)
    s.add_argument("--genus", type=int, default=2)
    s.add_argument("--char", default="11|11")
    s.add_argument("--tau", type=_literal, help="starting matrix for thetanull")
    s.add_argument("--entry", type=_entry, default=(0, 1), help="1-based j,k to deform")
    s.set_defaults(func=cmd_sing)

    f = sub.add_parser("pfaff", parents=[common], help="Pfaffian quadric rank test")
    f.add_argument("action", choices=("check",))
    f.add_argument("--trials", type=int, default=200)
    f.set_defaults(func=cmd_pfaff)

    c = sub.add_parser("classes", parents=[common], help="class tables")
    c.add_argument("which", choices=("ag", "r6"))
    c.add_argument("--genus", type=int, default=4)
    c.set_defaults(func=cmd_classes)

    for name, target, choices, helptext in (("push", cmd_push, ("prym",), "Prym pushforwards"),
                                             ("slope", cmd_slope, ("a5",), "slopes on A5bar"),
                                             ("testcurve", cmd_testcurve, ("R",), "pencil R pairings"),
                                             ("taut", cmd_taut, ("vx",), "sigma_* tautological class"),
                                             ("mult", cmd_mult, ("j5",), "multiplicity along J5")):
        q = sub.add_parser(name, parents=[common], help=helptext)
        q.add_argument("which", choices=choices)
        if name == "testcurve":
            q.add_argument("--set", action="append", metavar="LABEL=VALUE",
                           help="override one intersection number, e.g. \"delta0'=34\"")
        q.set_defaults(func=target)

    r = sub.add_parser("report", parents=[common], help="reproduction report")
    r.add_argument("--sections", help=f"comma-separated subset of {','.join(SECTIONS)} (default: all)")
    r.add_argument("--timings", action="store_true", help="include runtime_ms (breaks byte-identical output)")
    r.set_defaults(func=cmd_report, format="md")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ThetaSingError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
