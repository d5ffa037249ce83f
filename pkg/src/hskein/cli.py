"""Command-line interface: ``hskein <command> ...``.

Exit codes: 0 success, 1 nothing found (e.g. no torsion certificate or a
failed example replay), 2 parse or descriptor error, 3 unsupported group model.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import replay
from .catalog import DescriptorParseError, catalog_entry, catalog_names, descriptor_to_dict, load_descriptor
from .groups import GroupParseError, UnsupportedModel
from .intersect import DescriptorError, freeness_verdict, iota_alpha_a, lambda_alpha
from .paths import PathEndpointError, parse_path, s_eval, s_f, s_if
from .present import Bounds, R_MODE, RHAT_MODE, assemble_presentation, torsion_certificates
from .ring import PolyParseError, cyclotomic_q2
from .wrap import parse_wrap, skein_closure

EXIT_OK, EXIT_NOT_FOUND, EXIT_PARSE, EXIT_UNSUPPORTED = 0, 1, 2, 3
ENV_CONJ_BOUND = "HSKEIN_CONJ_BOUND"

PARSE_ERRORS = (GroupParseError, PolyParseError, DescriptorParseError, DescriptorError, PathEndpointError,
                json.JSONDecodeError, OSError, KeyError, ValueError)


class Report:
    def __init__(self, text: str | list[str], payload: dict | None = None, status: int = EXIT_OK):
        self.text = text if isinstance(text, str) else "\n".join(text)
        self.payload = payload or {}
        self.status = status


def _default_conj_bound() -> int:
    raw = os.environ.get(ENV_CONJ_BOUND)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_CONJ_BOUND} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"{ENV_CONJ_BOUND} must be non-negative")
    return value


def _seeds(model, raw: list[str]):
    out = []
    for chunk in raw:
        for lit in chunk.split(";"):
            if lit.strip():
                out.append(parse_wrap(model, lit))
    if not out:
        raise ValueError("give at least one seed wrapping class with --seeds")
    return out


def _vector_payload(v) -> list:
    return [[str(k), str(c)] for k, c in v.items()]


# -- commands ---------------------------------------------------------------------------

def cmd_analyze(args) -> Report:
    M = load_descriptor(args.manifold)
    v = freeness_verdict(M)
    lines = [f"manifold: {M.name}  pi1 = {M.pi1.describe()}"] + v.lines()
    payload = {"manifold": M.name, "h_verdict": v.h_verdict, "h_clause": v.h_clause,
               "c_verdict": v.c_verdict, "c_clause": v.c_clause, "assertions": list(v.assertions)}
    return Report(lines, payload)


def cmd_linking(args) -> Report:
    M = load_descriptor(args.manifold)
    if not M.pi1.is_abelian:
        raise UnsupportedModel(f"linking numbers need an abelian fundamental group; {M.name} has {M.pi1.describe()}")
    alpha = parse_wrap(M.pi1, args.alpha)
    lam = lambda_alpha(M, alpha)
    ann = cyclotomic_q2(lam)
    lines = [f"alpha = {alpha}", f"lambda = {lam}",
             f"annihilator: {ann}" + ("  (summand is free)" if lam == 0 else "")]
    per = []
    for a in sorted(set(alpha.classes)):
        i = iota_alpha_a(M, alpha, a)
        per.append([str(a), i])
        lines.append(f"  iota(alpha, {a}) = {i}")
    payload = {"alpha": str(alpha), "lambda": lam, "annihilator": str(ann), "free": lam == 0, "iota": per}
    return Report(lines, payload)


def cmd_closure(args) -> Report:
    M = load_descriptor(args.manifold)
    seeds = _seeds(M.pi1, args.seeds)
    bound = args.conj_bound if args.conj_bound is not None else _default_conj_bound()
    closed = skein_closure(seeds, M.pi1, bound)
    members = list(closed)
    lines = [f"skein closure of {len(seeds)} seed(s), conjugator bound {bound}: {len(members)} classes"]
    lines += [f"  {a}" for a in members]
    payload = {"conj_bound": bound, "seeds": [str(s) for s in seeds], "members": [str(a) for a in members]}
    return Report(lines, payload)


def cmd_path_eval(args) -> Report:
    model = load_descriptor(args.manifold).pi1 if args.manifold else None
    gamma = parse_path(args.path, model)
    fn = {"s": s_eval, "sf": s_f, "sif": s_if}[args.map]
    value = fn(gamma)
    lines = [f"{args.map}(gamma) = {value}", f"index = {sum(e.sign for e in gamma.events)}"]
    payload = {"map": args.map, "path": args.path, "value": _vector_payload(value)}
    return Report(lines, payload)


def cmd_present(args) -> Report:
    M = load_descriptor(args.manifold)
    seeds = _seeds(M.pi1, args.seeds)
    bound = args.conj_bound if args.conj_bound is not None else _default_conj_bound()
    bounds = Bounds(bound, args.coset_bound)
    P = assemble_presentation(M, seeds, args.mode, bounds)
    lines = [f"presentation of {M.name} ({args.mode}-module mode), {len(P.rows)} rows x {len(P.columns)} columns",
              P.to_table()]
    if P.is_zero():
        lines.append("zero presentation: the span of the closure is free")
    payload = P.to_payload()
    status = EXIT_OK
    if args.certify:
        certs = torsion_certificates(P, None, M)
        payload["certificates"] = [
            {"row": c.row_index, "alpha": str(c.alpha), "factor": str(c.factor),
             "witness": _vector_payload(c.witness), "method": c.method}
            for c in certs
        ]
        if certs:
            for c in certs:
                lines += c.lines()
        else:
            lines.append("torsion certificate: NOT-FOUND")
            status = EXIT_NOT_FOUND
    return Report(lines, payload, status)


def cmd_examples(args) -> Report:
    runs = replay.run(args.name)
    lines = []
    for r in runs:
        lines += r.lines()
    ok = all(r.passed for r in runs)
    lines.append(f"{sum(r.passed for r in runs)}/{len(runs)} examples passed")
    payload = {"examples": [{"name": r.name, "passed": r.passed} for r in runs]}
    return Report(lines, payload, EXIT_OK if ok else EXIT_NOT_FOUND)


def cmd_catalog(args) -> Report:
    if args.name is None:
        names = catalog_names()
        return Report(["catalog entries:"] + [f"  {n}" for n in names], {"entries": names})
    M = catalog_entry(args.name)
    d = descriptor_to_dict(M)
    return Report(json.dumps(d, indent=2), d)


# -- entry point --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hskein", description="Homotopy skein module computations.")
    p.add_argument("--json", action="store_true", help="print the machine-readable payload instead of text")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="freeness verdicts for a manifold")
    a.add_argument("manifold", help="descriptor file or catalog name")
    a.set_defaults(func=cmd_analyze)

    a = sub.add_parser("linking", help="lambda and annihilator of a wrapping class")
    a.add_argument("manifold")
    a.add_argument("alpha", help="wrapping class literal, e.g. '<1, b2>'")
    a.set_defaults(func=cmd_linking)

    a = sub.add_parser("closure", help="skein closure of seed wrapping classes")
    a.add_argument("manifold")
    a.add_argument("--seeds", action="append", default=[], help="';'-separated literals (repeatable)")
    a.add_argument("--conj-bound", type=int, default=None)
    a.set_defaults(func=cmd_closure)

    a = sub.add_parser("path-eval", help="evaluate s, s_f or s_if on a path literal")
    a.add_argument("path", help="e.g. 'start=<a>; events=(+1:<b>)(-1:<c>); end=<a>'")
    a.add_argument("--map", choices=("s", "sf", "sif"), default="s")
    a.add_argument("--manifold", default=None, help="parse <...> labels as wrapping classes of this manifold")
    a.set_defaults(func=cmd_path_eval)

    a = sub.add_parser("present", help="presentation matrix for the span of seed classes")
    a.add_argument("manifold")
    a.add_argument("--seeds", action="append", default=[])
    a.add_argument("--mode", choices=(R_MODE, RHAT_MODE), default=R_MODE)
    a.add_argument("--conj-bound", type=int, default=None)
    a.add_argument("--coset-bound", type=int, default=1)
    a.add_argument("--certify", action="store_true", help="search rows for torsion certificates")
    a.set_defaults(func=cmd_present)

    a = sub.add_parser("examples", help="replay the worked examples against stored values")
    a.add_argument("name", nargs="?", default="all", choices=list(replay.REPLAYS) + ["all"])
    a.set_defaults(func=cmd_examples)

    a = sub.add_parser("catalog", help="list catalog entries or dump one as JSON")
    a.add_argument("name", nargs="?", default=None)
    a.set_defaults(func=cmd_catalog)
    return p


def _validate(args):
    for flag in ("conj_bound", "coset_bound"):
        v = getattr(args, flag, None)
        if v is not None and v < 0:
            raise ValueError(f"--{flag.replace('_', '-')} must be non-negative")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        _validate(args)
        report = args.func(args)
    except UnsupportedModel as e:
        print(f"hskein: unsupported model: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except PARSE_ERRORS as e:
        print(f"hskein: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_PARSE
    if args.json:
        print(json.dumps(report.payload, indent=2))
    else:
        print(report.text)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
