"""Command-line entry point ``nct``.

Exit codes: 0 pass, 1 a mathematical check failed, 2 bad input,
3 a resource bound was exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .errors import InputError, ResourceError
from .kernel import FiniteStrictNCat, is_gaunt, product, standard_object, validate
from .theta import parse_theta, realize, theta_enumerate_objects

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

BUILD_KINDS = ("cell", "boundary", "E", "simplex", "empty", "K", "theta", "cell-product")


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not JSON: {exc}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_build(args) -> int:
    if args.kind == "theta":
        if not args.shape:
            raise InputError("build theta needs --shape, e.g. '[2; [1], [0]]'")
        X = realize(parse_theta(args.shape, args.n), args.n)
    elif args.kind == "cell-product":
        if args.k is None or args.j is None:
            raise InputError("build cell-product needs --k and --j")
        X = product(standard_object("cell", args.n, args.k),
                    standard_object("cell", args.n, args.j))[0]
    else:
        X = standard_object(args.kind, args.n, args.k)
    _write(args.output, json.dumps(X.to_json_dict(), sort_keys=True, ensure_ascii=False) + "\n")
    return EXIT_OK


def _load_ncat(path: str) -> FiniteStrictNCat:
    return FiniteStrictNCat.from_json_dict(_read_json(path))


def cmd_check(args) -> int:
    X = _load_ncat(args.file)
    rep = validate(X)
    if args.property == "valid" or not rep.valid:
        out = {"valid": rep.valid, "violations": [v.as_dict() for v in rep.violations]}
        print(json.dumps(out, sort_keys=True, ensure_ascii=False))
        return EXIT_OK if rep.valid else EXIT_FAIL
    g = is_gaunt(X)
    out = {"gaunt": g.gaunt, "agrees_with_direct_scan": g.agrees}
    if not g.gaunt:
        out["level"] = g.level
        out["witness"] = g.witness.as_dict() if g.witness is not None else None
        out["invertible_cell"] = list(g.invertible_cell) if g.invertible_cell else None
    print(json.dumps(out, sort_keys=True, ensure_ascii=False))
    return EXIT_OK if g.gaunt else EXIT_FAIL


def cmd_verify(args) -> int:
    from .verifier import SuiteConfig, report_render, run_suite
    cfg = SuiteConfig(args.suite, n=args.n, window=args.window, budget=args.budget,
                      seed=args.seed, fault=args.fault, timing=args.timing)
    rep = run_suite(cfg)
    text = report_render(rep, args.format)
    if args.report:
        _write(args.report, text)
        if args.format == "json":
            print(f"{rep.suite}: {'PASS' if rep.passed else 'FAIL'} -> {args.report}")
        else:
            sys.stdout.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_enum(args) -> int:
    for o in theta_enumerate_objects(args.n, args.max_size):
        print(o)
    return EXIT_OK


def cmd_eval(args) -> int:
    from .presheaf import CellularPresheaf
    P = CellularPresheaf.from_json_dict(_read_json(args.file))
    o = P.indexing.parse(args.at)
    print(len(P.elements(o)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    from .verifier import FAULTS, SUITES
    p = argparse.ArgumentParser(prog="nct", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write a named object as JSON")
    b.add_argument("kind", choices=BUILD_KINDS)
    b.add_argument("--n", type=int, required=True, help="ambient dimension")
    b.add_argument("--k", type=int, help="cell/boundary dimension, or simplex size")
    b.add_argument("--j", type=int, help="second factor for cell-product")
    b.add_argument("--shape", help="Theta object, e.g. '[2; [1], [0]]'")
    b.add_argument("-o", "--output", default="-")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="check a JSON n-category")
    c.add_argument("property", choices=("gaunt", "valid"))
    c.add_argument("file")
    c.set_defaults(func=cmd_check)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--window", type=int, default=None, help="suite-specific size bound")
    v.add_argument("--budget", type=int, default=None, help="functor-search node budget")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--report", default=None, help="write the report here")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--fault", choices=sorted(set(FAULTS.values())), default=None,
                   help="developer switch: inject a known fault")
    v.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enum", help="enumerate index objects")
    e.add_argument("what", choices=("theta",))
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--max-size", type=int, required=True)
    e.set_defaults(func=cmd_enum)

    ev = sub.add_parser("eval", help="evaluate a presheaf JSON at an index object")
    ev.add_argument("file")
    ev.add_argument("--at", required=True, help="'[2; [1], [0]]' or '1x2'")
    ev.set_defaults(func=cmd_eval)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"nct: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceError as exc:
        print(f"nct: resource bound exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
