"""Shared text / JSON / DOT rendering for CLI and gateway output.

All scalar values are rendered as exact rational strings; outputs are
deterministic for a fixed input and seed.
"""

from __future__ import annotations

import json

from .algebra import FDAlgebra, ValidationReport
from .mutation import MutationResult, ResolutionPrefix
from .quiver import QuiverPresentation, format_combination, print_presentation
from .reps import radical_layers, rep_to_json, simple_image


def presentation_json(pres: QuiverPresentation) -> dict:
    q = pres.quiver
    return {
        "text": print_presentation(pres),
        "field": pres.field.name,
        "vertices": list(q.vertices),
        "arrows": [{"label": a.label, "source": a.source, "target": a.target}
                   for a in q.arrows],
        "relations": [format_combination(q, r) for r in pres.relations],
    }


def validation_json(report: ValidationReport) -> dict:
    return {
        "admissible": report.admissible,
        "finiteDimensional": report.finite_dimensional,
        "weaklySymmetric": report.weakly_symmetric,
        "loops": report.loops,
        "socleTypes": report.socle_types,
        "dim": report.dim,
        "message": report.message,
    }


def simple_image_json(alg: FDAlgebra, v: str, j: str) -> dict:
    X = simple_image(alg, v, j)
    layers = radical_layers(X)
    return {
        "vertex": j,
        "dimVector": list(X.dim_vector()),
        "loewyLayers": [{w: l[w] for w in alg.quiver.vertices if l[w]} for l in layers],
        "module": rep_to_json(X),
    }


def mutation_json(result: MutationResult, alg: FDAlgebra | None = None,
                  with_simples: bool = True) -> dict:
    out = {
        "vertex": result.vertex,
        "side": result.side,
        "rawPresentation": presentation_json(result.raw),
        "reducedPresentation": presentation_json(result.reduced),
        "vertexMap": result.vertex_map,
        "arrows": [{"label": a.label, "tag": a.tag, "witness": a.witness,
                    "source": a.source, "target": a.target}
                   for a in result.arrows],
        "relations": [{"text": format_combination(result.raw.quiver, r.combo),
                       "tag": r.tag, "witness": r.witness}
                      for r in result.relations],
        "eliminationLog": [{"arrow": e.arrow, "replacement": e.replacement}
                           for e in result.elimination],
        "flags": {k: v for k, v in result.flags.items()},
        "provenance": {
            "arrowTags": sorted({a.tag for a in result.arrows}),
            "relationTags": sorted({r.tag for r in result.relations}),
        },
    }
    if with_simples and result.side == "left" and alg is not None:
        out["simpleImages"] = [simple_image_json(alg, result.vertex, j)
                               for j in alg.quiver.vertices]
    return out


def mutation_text(result: MutationResult, alg: FDAlgebra | None = None) -> str:
    lines = [f"# {result.side} mutation at vertex {result.vertex}"]
    lines.append("## arrows")
    for a in result.arrows:
        lines.append(f"  [{a.tag}] {a.label} : {a.source} -> {a.target}   (from {a.witness})")
    lines.append("## relations")
    for r in result.relations:
        lines.append(f"  [{r.tag}] {format_combination(result.raw.quiver, r.combo)}")
    if result.elimination:
        lines.append("## eliminated arrows")
        for e in result.elimination:
            lines.append(f"  {e.arrow} := {e.replacement}")
    lines.append("## reduced presentation")
    lines.append(print_presentation(result.reduced).rstrip())
    if result.side == "left" and alg is not None:
        lines.append("## simple images")
        for j in alg.quiver.vertices:
            X = simple_image(alg, result.vertex, j)
            layers = radical_layers(X)
            shape = " / ".join(
                " + ".join(f"S_{w}" for w in alg.quiver.vertices for _ in range(l[w]))
                or "0" for l in layers)
            lines.append(f"  F(S'_{j}): dim {list(X.dim_vector())}  layers {shape}")
    return "\n".join(lines) + "\n"


def quiver_dot(pres: QuiverPresentation, provenance: dict[str, str] | None = None) -> str:
    lines = ["digraph quiver {", "  rankdir=LR;"]
    for v in pres.quiver.vertices:
        lines.append(f'  "{v}" [shape=circle];')
    for a in pres.quiver.arrows:
        tag = f" [{provenance[a.label]}]" if provenance and a.label in provenance else ""
        lines.append(f'  "{a.source}" -> "{a.target}" [label="{a.label}{tag}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def resolution_text(prefix: ResolutionPrefix) -> str:
    q = prefix.presentation.quiver

    def fmt(x):
        return "0" if x.is_zero() else format_combination(q, x, monic=False)

    lines = [f"# projective resolution prefix of the mutated simple at {prefix.simple_at}"]
    lines.append("P2 = " + (" + ".join(f"P'_{v}" for v in prefix.p2) or "0"))
    lines.append("P1 = " + (" + ".join(f"P'_{v}" for v in prefix.p1) or "0"))
    lines.append(f"P0 = P'_{prefix.p0[0]}")
    lines.append("d1 (P1 -> P0):")
    lines.append("  [" + ", ".join(fmt(x) for x in prefix.d1[0]) + "]")
    lines.append("phi (P2 -> P1), rows by P1 summands:")
    for tag, row in zip(prefix.row_tags, prefix.phi):
        lines.append(f"  {tag}: [" + ", ".join(fmt(x) for x in row) + "]")
    lines.append("columns: " + "; ".join(prefix.col_tags))
    return "\n".join(lines) + "\n"


def dumps(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
