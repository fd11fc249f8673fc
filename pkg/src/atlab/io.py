"""JSON graph files with optional per-edge weights, and correlator spec files."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import SpecInvalid
from .graph import Corner, Graph, build_graph, describe
from .model import Chi, Couplings, Disorder, EdgeWeights, Phi, SigmaTilde, couplings_to_weights


def graph_to_json(g: Graph, w: EdgeWeights | None = None) -> dict:
    desc = describe(g)
    if w is not None:
        for e, xy in zip(desc["edges"], w.to_json()):
            e.update(xy)
    return desc


def graph_from_json(desc: dict):
    """(graph, weights or None).  Edges carry either exact "x"/"y" strings
    or float "J"/"U" couplings; all edges must use the same form."""
    g = build_graph(desc)
    edges = desc["edges"]
    if all("x" in e and "y" in e for e in edges) and edges:
        return g, EdgeWeights.exact([e["x"] for e in edges], [e["y"] for e in edges])
    if all("J" in e and "U" in e for e in edges) and edges:
        return g, couplings_to_weights(Couplings(tuple(float(e["J"]) for e in edges),
                                                 tuple(float(e["U"]) for e in edges)))
    if any(k in e for e in edges for k in ("x", "y", "J", "U")):
        raise SpecInvalid("edges must all carry x/y or all carry J/U")
    return g, None


def load_graph(path) -> tuple:
    return graph_from_json(json.loads(Path(path).read_text()))


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def _corner(c) -> Corner:
    if isinstance(c, dict):
        return Corner(c["vertex"], int(c["face"]))
    v, f = c
    return Corner(v, int(f))


def spec_from_json(obj: dict):
    """Correlator request: {"type": "SigmaTilde"|"Phi"|"Disorder"|"Chi", ...sets}."""
    kind = obj.get("type")
    try:
        if kind == "SigmaTilde":
            return SigmaTilde(obj.get("A", ()), obj.get("B", ()))
        if kind == "Phi":
            return Phi(obj.get("A1", ()), obj.get("A2", ()), obj.get("B1", ()), obj.get("B2", ()))
        if kind == "Disorder":
            return Disorder(obj.get("A", ()), obj.get("B", ()),
                            [int(f) for f in obj.get("C", ())], [int(f) for f in obj.get("D", ())])
        if kind == "Chi":
            return Chi(*([_corner(c) for c in obj.get(k, ())] for k in ("A1", "A2", "B1", "B2")))
    except (TypeError, ValueError, KeyError) as exc:
        raise SpecInvalid(f"bad correlator spec: {exc}") from None
    raise SpecInvalid(f"unknown correlator type {kind!r}")


def spec_to_json(spec) -> dict:
    def vs(s):
        return sorted(s, key=repr)

    if isinstance(spec, SigmaTilde):
        return {"type": "SigmaTilde", "A": vs(spec.A), "B": vs(spec.B)}
    if isinstance(spec, Phi):
        return {"type": "Phi", "A1": vs(spec.A1), "A2": vs(spec.A2), "B1": vs(spec.B1), "B2": vs(spec.B2)}
    if isinstance(spec, Disorder):
        return {"type": "Disorder", "A": vs(spec.A), "B": vs(spec.B), "C": sorted(spec.C), "D": sorted(spec.D)}
    if isinstance(spec, Chi):
        def cs(s):
            return [{"vertex": c.vertex, "face": c.face} for c in sorted(s, key=lambda c: (repr(c.vertex), c.face))]
        return {"type": "Chi", "A1": cs(spec.A1), "A2": cs(spec.A2), "B1": cs(spec.B1), "B2": cs(spec.B2)}
    raise SpecInvalid(f"unknown correlator {spec!r}")
