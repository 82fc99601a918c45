"""JSON network/result files and DOT rendering."""

from __future__ import annotations

import json
from typing import Any, Sequence

from .network import Edge, LayeredNetwork, Node, NetworkError, validate
from .solver import PathSet


class FormatError(ValueError):
    pass


def network_to_dict(net: LayeredNetwork) -> dict[str, Any]:
    return {
        "field": net.p,
        "layers": [[{"id": n.id, "inputs": n.inputs, "outputs": n.outputs} for n in layer] for layer in net.layers],
        "edges": [
            {"from": e.from_node, "x": e.input_index, "to": e.to_node, "y": e.output_index, "coeff": e.coeff}
            for e in net.edges
        ],
    }


def dumps_network(net: LayeredNetwork) -> str:
    return json.dumps(network_to_dict(net), indent=1) + "\n"


def _int(obj, key, where, default=None):
    v = obj.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"{where}: '{key}' must be an integer, got {v!r}")
    return v


def network_from_dict(doc: Any) -> LayeredNetwork:
    """Parse and validate; raises FormatError for bad JSON shapes, NetworkError for bad structure."""
    if not isinstance(doc, dict):
        raise FormatError("network document must be a JSON object")
    p = _int(doc, "field", "network", 2)
    layers_doc = doc.get("layers")
    if not isinstance(layers_doc, list):
        raise FormatError("'layers' must be a list of lists")
    layers = []
    for li, layer in enumerate(layers_doc):
        if not isinstance(layer, list):
            raise FormatError(f"layer {li} must be a list")
        row = []
        for n in layer:
            if not isinstance(n, dict) or not isinstance(n.get("id"), str):
                raise FormatError(f"layer {li}: node entries need a string 'id'")
            where = f"node {n['id']!r}"
            row.append(Node(n["id"], _int(n, "inputs", where, 0), _int(n, "outputs", where, 0)))
        layers.append(row)
    edges = []
    for i, e in enumerate(doc.get("edges", [])):
        if not isinstance(e, dict) or not isinstance(e.get("from"), str) or not isinstance(e.get("to"), str):
            raise FormatError(f"edge {i}: needs string 'from' and 'to'")
        where = f"edge {i}"
        edges.append(Edge(e["from"], _int(e, "x", where), e["to"], _int(e, "y", where), _int(e, "coeff", where, 1)))
    try:
        net = LayeredNetwork.build(p, layers, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    errs = validate(net)
    if errs:
        raise NetworkError(errs)
    return net


def loads_network(text: str) -> LayeredNetwork:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return network_from_dict(doc)


def load_network(path) -> LayeredNetwork:
    with open(path, encoding="utf-8") as fh:
        return loads_network(fh.read())


def edge_ref(e: Edge) -> dict[str, Any]:
    return {"from": e.from_node, "x": e.input_index, "to": e.to_node, "y": e.output_index}


def result_to_dict(
    capacity: int,
    paths: PathSet | Sequence[Sequence[Edge]] | None = None,
    counters: dict[str, int] | None = None,
    argmin_cut: Sequence[str] | None = None,
) -> dict[str, Any]:
    doc: dict[str, Any] = {"capacity": capacity}
    if paths is not None:
        plist = paths.paths if isinstance(paths, PathSet) else paths
        doc["paths"] = [[edge_ref(e) for e in path] for path in plist]
    if counters is not None:
        doc["counters"] = dict(counters)
    if argmin_cut is not None:
        doc["argmin_cut"] = list(argmin_cut)
    return doc


def paths_from_result(doc: Any, net: LayeredNetwork) -> list[list[Edge]]:
    """Resolve edge refs against ``net``; refs to missing edges keep coefficient 0."""
    if not isinstance(doc, dict) or not isinstance(doc.get("capacity"), int):
        raise FormatError("result document needs an integer 'capacity'")
    coeffs = {e.key: e.coeff for e in net.edges}
    out = []
    for i, path in enumerate(doc.get("paths", [])):
        if not isinstance(path, list):
            raise FormatError(f"path {i} must be a list of edge refs")
        row = []
        for ref in path:
            try:
                key = (ref["from"], int(ref["x"]), ref["to"], int(ref["y"]))
            except (KeyError, TypeError, ValueError):
                raise FormatError(f"path {i}: malformed edge ref {ref!r}") from None
            row.append(Edge(*key, coeffs.get(key, 0)))
        out.append(row)
    return out


PALETTE = ("red", "green3", "blue", "purple", "orange", "cyan4", "magenta", "brown", "gold3", "gray40")


def to_dot(net: LayeredNetwork, paths: Sequence[Sequence[Edge]] | None = None) -> str:
    """Left-to-right layered rendering; one record node per network node, ports as fields."""
    color: dict[tuple, str] = {}
    for i, path in enumerate(paths or ()):
        for e in path:
            color[e.key] = PALETTE[i % len(PALETTE)]
    lines = ["digraph G {", "  rankdir=LR;", "  node [shape=record];"]
    for li, layer in enumerate(net.layers):
        lines.append(f"  subgraph layer{li} {{ rank=same;")
        for n in layer:
            outs = "|".join(f"<y{j}> y{j}" for j in range(n.outputs))
            ins = "|".join(f"<x{i}> x{i}" for i in range(n.inputs))
            fields = "|".join(f for f in (f"{{{outs}}}" if outs else "", n.id, f"{{{ins}}}" if ins else "") if f)
            lines.append(f'    "{n.id}" [label="{fields}"];')
        lines.append("  }")
    for e in net.edges:
        attrs = [f'label="{e.coeff}"'] if net.p > 2 else []
        if e.key in color:
            attrs += [f'color="{color[e.key]}"', "penwidth=2"]
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f'  "{e.from_node}":x{e.input_index} -> "{e.to_node}":y{e.output_index}{suffix};')
    lines.append("}")
    return "\n".join(lines) + "\n"
