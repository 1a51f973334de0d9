"""Batch driver.

Subcommands: validate, mutate, compare, simples, resolve, msob, export-dot,
serve.  Exit codes: 0 success, 1 domain error, 2 usage error.  With
--format json domain errors are emitted as machine-readable objects.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fixtures
from .algebra import FDAlgebra, build_table, validate
from .errors import TiltmutError
from .msob import (mutate_system_left, mutate_system_right, simples_system,
                   system_from_json, system_to_json)
from .mutation import cross_validate, mutate, resolution_prefix
from .quiver import ParseError, parse_presentation
from .render import (dumps, mutation_json, mutation_text, quiver_dot,
                     resolution_text, simple_image_json, validation_json)


def _load_presentation(path: str, field_override: str | None = None):
    if path in fixtures.BUILTIN:
        text = fixtures.builtin_text(path)
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    if field_override:
        filtered = [ln for ln in text.splitlines() if not ln.startswith("field ")]
        text = f"field {field_override}\n" + "\n".join(filtered) + "\n"
    return parse_presentation(text)


def _emit_error(args, code: str, message: str) -> int:
    if getattr(args, "format", "text") == "json":
        print(json.dumps({"error": {"code": code, "message": message}}))
    else:
        print(f"error [{code}]: {message}", file=sys.stderr)
    return 1


def cmd_validate(args) -> int:
    pres = _load_presentation(args.file, args.field)
    report = validate(pres)
    if args.format == "json":
        print(dumps(validation_json(report)))
    else:
        print(f"admissible:          {report.admissible}")
        print(f"finite dimensional:  {report.finite_dimensional}")
        print(f"weakly symmetric:    {report.weakly_symmetric}")
        print(f"dim:                 {report.dim}")
        print(f"loops:               {report.loops}")
        print(f"socle types:         {report.socle_types}")
        if report.message:
            print(f"note: {report.message}")
    return 0 if report.ok() else 1


def cmd_mutate(args) -> int:
    pres = _load_presentation(args.file, args.field)
    alg = FDAlgebra(build_table(pres))
    checked = args.checked and alg.dim <= args.checked_limit
    if args.checked and not checked:
        print(f"# warning: dim {alg.dim} exceeds {args.checked_limit}; "
              "oracle check skipped", file=sys.stderr)
    result = mutate(alg, args.vertex, side=args.side,
                    reduce=not args.no_reduce, checked=checked)
    if args.format == "json":
        print(dumps(mutation_json(result, alg)))
    elif args.format == "dot":
        prov = {a.label: a.tag for a in result.arrows
                if a.label in result.reduced.quiver.by_label}
        print(quiver_dot(result.reduced, prov), end="")
    else:
        print(mutation_text(result, alg), end="")
    return 0


def cmd_compare(args) -> int:
    pres = _load_presentation(args.file, args.field)
    alg = FDAlgebra(build_table(pres))
    report = cross_validate(alg, args.vertex)
    data = {
        "surjective": report.surjective,
        "dimsEqual": report.dims_equal,
        "relationsInKernel": report.relations_in_kernel,
        "oracleRelationsInIdeal": report.oracle_relations_in_ideal,
        "presentationsIsomorphic": report.presentations_isomorphic,
        "details": report.details,
    }
    if args.format == "json":
        print(dumps(data))
    else:
        for k, v in data.items():
            print(f"{k}: {v}")
    return 0 if report.ok() else 1


def cmd_simples(args) -> int:
    pres = _load_presentation(args.file, args.field)
    alg = FDAlgebra(build_table(pres))
    data = [simple_image_json(alg, args.vertex, j) for j in alg.quiver.vertices]
    if args.format == "json":
        print(dumps({"vertex": args.vertex, "images": data}))
    else:
        for entry in data:
            layers = " / ".join(
                "+".join(f"S_{w}(x{m})" if m > 1 else f"S_{w}"
                         for w, m in l.items()) or "0"
                for l in entry["loewyLayers"])
            print(f"F(S'_{entry['vertex']}): dim {entry['dimVector']}  layers: {layers}")
    return 0


def cmd_resolve(args) -> int:
    pres = _load_presentation(args.file, args.field)
    alg = FDAlgebra(build_table(pres))
    prefix = resolution_prefix(alg, args.vertex, args.simple)
    print(resolution_text(prefix), end="")
    return 0


def cmd_msob(args) -> int:
    pres = _load_presentation(args.file, args.field)
    alg = FDAlgebra(build_table(pres))
    if args.system:
        with open(args.system, "r", encoding="utf-8") as fh:
            sys0 = system_from_json(alg, json.load(fh))
    else:
        sys0 = simples_system(alg)
    i = alg.quiver.vertices.index(args.vertex)
    mutated = mutate_system_left(sys0, i) if args.side == "left" \
        else mutate_system_right(sys0, i)
    print(dumps(system_to_json(mutated)))
    return 0


def cmd_export_dot(args) -> int:
    if args.file.endswith(".json"):
        with open(args.file, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        pres = parse_presentation(data["reducedPresentation"]["text"])
        prov = {a["label"]: a["tag"] for a in data.get("arrows", [])}
        print(quiver_dot(pres, prov), end="")
    else:
        pres = _load_presentation(args.file, args.field)
        print(quiver_dot(pres), end="")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .gateway import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tiltmut",
                                 description="tilting mutation workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, vertex=False):
        p.add_argument("file", help=".alg file or builtin fixture name")
        p.add_argument("--field", default=None, help="override field, e.g. 'Q' or 'F 5'")
        p.add_argument("--format", choices=["text", "json", "dot"], default="text")
        p.add_argument("--seed", type=int, default=0)
        if vertex:
            p.add_argument("--vertex", required=True)

    p = sub.add_parser("validate", help="check admissibility and weak symmetry")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("mutate", help="tilting mutation at a vertex")
    common(p, vertex=True)
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.add_argument("--no-reduce", action="store_true")
    p.add_argument("--no-checked", dest="checked", action="store_false")
    p.add_argument("--checked-limit", type=int, default=200)
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("compare", help="combinatorics vs homotopy oracle")
    common(p, vertex=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("simples", help="stable images of the mutated simples")
    common(p, vertex=True)
    p.set_defaults(func=cmd_simples)

    p = sub.add_parser("resolve", help="projective resolution prefix")
    common(p, vertex=True)
    p.add_argument("--simple", required=True, help="vertex of the simple to resolve")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("msob", help="mutate a system of orthogonal bricks")
    common(p, vertex=True)
    p.add_argument("--system", default=None, help="system JSON file (default: simples)")
    p.add_argument("--side", choices=["left", "right"], default="left")
    p.set_defaults(func=cmd_msob)

    p = sub.add_parser("export-dot", help="DOT graph of a presentation")
    common(p)
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("serve", help="run the JSON gateway")
    p.add_argument("--port", type=int, default=8400)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParseError as e:
        return _emit_error(args, "ParseError", str(e))
    except TiltmutError as e:
        return _emit_error(args, type(e).__name__, str(e))
    except FileNotFoundError as e:
        return _emit_error(args, "FileNotFound", str(e))


if __name__ == "__main__":
    sys.exit(main())
