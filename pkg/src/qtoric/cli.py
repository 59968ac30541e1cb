"""Command line interface.

Exit status: 0 success, 1 invalid input, 2 valid input outside the implemented
regime (the message names the failed assumption).
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from typing import Any, Callable

from . import __version__
from .cellular import cellular_homology, pi1_presentation
from .documents import (complex_from_doc, digest, fans_from_doc, has_complex, parse_text, read_text,
                        trinions_from_doc)
from .errors import ParseError, UnsupportedRegime
from .models import random_complex
from .orbit_complex import OrbitComplex
from .quat_linalg import format_rational, parse_quat_matrix
from .signature import meyer_form, signature_of_symmetric, total_signature
from .spectral import ahss_kgroups, collapse_certificate, euler_report, graded_cohomology, spectral_pages


class Exit(Exception):
    def __init__(self, status: int, message: str = ""):
        self.status = status
        self.message = message


def _load(args) -> tuple[dict, str]:
    if args.path == "random":
        seed = 0 if args.seed is None else args.seed
        X = random_complex(random.Random(seed))
        text = json.dumps(X.to_dict(), sort_keys=True)
    else:
        text = read_text(args.path)
    return parse_text(text, args.path), digest(text)


def _complex(doc: dict, source: str, need_valid: bool = True) -> OrbitComplex:
    X = complex_from_doc(doc, source)
    if need_valid and not X.validation.ok:
        kinds = X.validation.kinds()
        if kinds == {"unimodularity"}:
            raise UnsupportedRegime("unimodularity", "facet vectors do not span direct summands; "
                                                     "the local model does not apply\n" + X.validation.summary())
        raise Exit(1, "invalid orbit complex\n" + X.validation.summary())
    return X


# ------------------------------------------------------------------------------
# commands: each returns (result dict, warnings)
# ------------------------------------------------------------------------------


def cmd_validate(doc, args):
    X = complex_from_doc(doc, args.path)
    rep = X.validation.to_json()
    if not X.validation.ok:
        raise _Invalid(rep, X.validation.summary())
    return rep, []


class _Invalid(Exception):
    def __init__(self, result, summary):
        self.result = result
        self.summary = summary


def cmd_cohomology(doc, args):
    X = _complex(doc, args.path)
    E1, E2 = spectral_pages(X)
    cert = collapse_certificate(E2)
    result: dict[str, Any] = {"E1": E1.to_json(), "E2": E2.to_json(), "collapse": cert.to_json()}
    if not cert.certified:
        raise UnsupportedRegime("collapse", "potential nonzero d_r: " + cert.reason, result)
    G = graded_cohomology(X, h3_split=args.h3_split)
    result["cohomology"] = G.to_json()
    return result, []


def cmd_ktheory(doc, args):
    X = _complex(doc, args.path)
    K = ahss_kgroups(X, allow_empty_vertex_set=args.allow_empty_vertex_set)
    warnings = [f"k_theory_differentials: {c}" for c in K.caveats]
    return K.to_json() | {"total_rank": K.total_rank}, warnings


def cmd_euler(doc, args):
    X = _complex(doc, args.path)
    rep = euler_report(X)
    return rep.to_json(), list(rep.mismatches)


def cmd_pi1(doc, args):
    X = _complex(doc, args.path)
    P = pi1_presentation(X)
    H = cellular_homology(X)
    return {"presentation": str(P), "structured": P.to_json(),
            "abelianization": str(P.abelianization()), "H1(B)": str(H.get(1, P.abelianization()))}, []


def cmd_signature(doc, args):
    warnings = []
    result: dict[str, Any] = {}
    if has_complex(doc):
        X = _complex(doc, args.path)
        result["euler_characteristic"] = euler_report(X).value
    t = trinions_from_doc(doc, args.path)
    bad = t.violations()
    if bad:
        raise Exit(1, "invalid trinion data\n" + "\n".join(bad))
    fans = fans_from_doc(doc, args.path)
    for i, f in enumerate(fans):
        if f.violations():
            raise Exit(1, f"invalid boundary fan {i}\n" + "\n".join(f.violations()))
    S = total_signature(t, fans)
    for i, f in enumerate(fans):
        if f.is_quaternionic():
            warnings.append(f"dieudonne_rationality: fan {i} uses the unsigned Dieudonne fallback")
    result.update(S.to_json())
    return result, warnings


def cmd_meyer(args):
    try:
        C1, C2 = (parse_quat_matrix(_inline(s)) for s in (args.c1, args.c2))
    except (ValueError, TypeError, ParseError) as exc:
        raise Exit(1, f"cannot parse matrix: {exc}")
    try:
        F = meyer_form(C1, C2)
    except (ValueError, ZeroDivisionError) as exc:
        raise Exit(1, str(exc))
    warnings = [] if F.asymmetry == 0 else [f"form asymmetry {F.asymmetry}"]
    return {"tau": signature_of_symmetric(F.matrix), "dim_V": F.dim,
            "asymmetry": format_rational(F.asymmetry)}, warnings


def _inline(s: str):
    import yaml

    try:
        obj = yaml.safe_load(s)
    except yaml.YAMLError as exc:
        raise ParseError(str(exc), "inline matrix") from None
    return obj


COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate, "cohomology": cmd_cohomology, "ktheory": cmd_ktheory,
    "euler": cmd_euler, "pi1": cmd_pi1, "signature": cmd_signature,
}


# ------------------------------------------------------------------------------
# rendering
# ------------------------------------------------------------------------------


def render_structured(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str)


def render_table(report: dict) -> str:
    lines = [f"{report['command']}: status {report['status']}"]
    res = report.get("result") or {}
    cmd = report["command"]
    if cmd == "cohomology" and "cohomology" in res:
        lines.append("degree  rank  graded pieces")
        for r, pieces in sorted(res["cohomology"]["graded"].items(), key=lambda kv: int(kv[0])):
            desc = ", ".join(f"E({x['p']},{x['q']})={x['group']}" for x in pieces if x["group"] != "0")
            lines.append(f"{int(r):>6}  {res['cohomology']['ranks'][int(r)]:>4}  {desc or '0'}")
        lines.append("collapse: " + res["collapse"]["reason"])
    else:
        for k, v in sorted(res.items()):
            lines.append(f"{k}: {v if not isinstance(v, (dict, list)) else json.dumps(v, sort_keys=True)}")
    for w in report.get("warnings", []):
        lines.append("warning: " + w)
    if report.get("error"):
        lines.append("error: " + report["error"])
    return "\n".join(lines)


# ------------------------------------------------------------------------------
# entry point
# ------------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    # subparsers must not overwrite values given before the subcommand
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--format", choices=["table", "structured"], default=d("structured"))
    p.add_argument("--seed", type=int, default=d(None), help="seed used when PATH is 'random'")
    p.add_argument("--strict", action="store_true", default=d(False), help="treat warnings as errors (status 2)")
    p.add_argument("--no-timing", action="store_true", default=d(False), help="omit timing metadata")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qtoric",
                                 description="Invariants of manifolds with local quaternionic torus actions.")
    _add_common(ap, suppress=False)
    ap.add_argument("--version", action="version", version=f"qtoric {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        _add_common(p, suppress=True)
        p.add_argument("path", help="input document, bundled model name, or 'random'")
        if name == "cohomology":
            p.add_argument("--h3-split", action="store_true",
                           help="assert the hypothesis under which the degree-3 extension splits")
        if name == "ktheory":
            p.add_argument("--allow-empty-vertex-set", action="store_true")
    p = sub.add_parser("meyer")
    _add_common(p, suppress=True)
    p.add_argument("--c1", required=True, help="2x2 quaternion matrix (YAML) or I, -I, J, -J")
    p.add_argument("--c2", required=True)
    return ap


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    report: dict[str, Any] = {"tool": "qtoric", "version": __version__, "command": args.command}
    t0 = time.perf_counter()
    status, warnings, result, error = 0, [], None, None
    try:
        if args.command == "meyer":
            report["input"] = {"c1": args.c1, "c2": args.c2}
            result, warnings = cmd_meyer(args)
        else:
            doc, dg = _load(args)
            report["input"] = {"sha256": dg}
            if args.path == "random":
                report["input"]["seed"] = 0 if args.seed is None else args.seed
            result, warnings = COMMANDS[args.command](doc, args)
    except ParseError as exc:
        status, error = 1, f"parse error: {exc}"
    except _Invalid as exc:
        status, result, error = 1, exc.result, "invalid orbit complex\n" + exc.summary
    except Exit as exc:
        status, error = exc.status, exc.message
    except (ValueError, ArithmeticError) as exc:
        status, error = 1, str(exc)
    except UnsupportedRegime as exc:
        status, error = 2, str(exc)
        report["assumption"] = exc.assumption
        if isinstance(exc.details, dict):
            result = exc.details
    if status == 0 and warnings and args.strict:
        status = 2
        report["assumption"] = warnings[0].split(":")[0]
        error = "strict mode: " + warnings[0]
    report.update({"status": status, "result": result, "warnings": warnings})
    if error:
        report["error"] = error
    if not args.no_timing:
        report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    out = render_table(report) if args.format == "table" else render_structured(report)
    print(out)
    if error and args.format == "structured":
        print(error, file=sys.stderr)
    return status, report


def main(argv: list[str] | None = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
