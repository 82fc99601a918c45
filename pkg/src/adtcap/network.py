"""Layered linear deterministic relay networks.

A node in layer ``l`` owns ordered transmit levels (inputs) and receive levels
(outputs).  Edges run from an input of a layer-``l`` node to an output of a
layer-``l+1`` node and carry a nonzero coefficient in F_p.  The edges leaving
layer ``l`` form *layer cut* ``l`` (0-based here).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .gfp import ContractError, FieldSpec, FMatrix, rank_rows


class NetworkError(ValueError):
    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class Node:
    id: str
    inputs: int
    outputs: int


@dataclass(frozen=True)
class Edge:
    from_node: str
    input_index: int
    to_node: str
    output_index: int
    coeff: int = 1

    @property
    def key(self) -> tuple[str, int, str, int]:
        return (self.from_node, self.input_index, self.to_node, self.output_index)


@dataclass(frozen=True)
class Cut:
    omega: frozenset[str]

    @classmethod
    def of(cls, nodes: Iterable[str]) -> "Cut":
        return cls(frozenset(nodes))


@dataclass(frozen=True)
class LayeredNetwork:
    field: FieldSpec
    layers: tuple[tuple[Node, ...], ...]
    edges: tuple[Edge, ...] = ()

    @classmethod
    def build(cls, p: int, layers: Sequence[Sequence[Node]], edges: Iterable[Edge] = ()) -> "LayeredNetwork":
        return cls(FieldSpec(p), tuple(tuple(l) for l in layers), tuple(edges))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    @property
    def source(self) -> str:
        return self.layers[0][0].id

    @property
    def sink(self) -> str:
        return self.layers[-1][0].id

    @cached_property
    def nodes(self) -> tuple[Node, ...]:
        return tuple(n for layer in self.layers for n in layer)

    @cached_property
    def index(self) -> "PortIndex":
        errs = validate(self)
        if errs:
            raise NetworkError(errs)
        return PortIndex(self)

    def node_layer(self, node_id: str) -> int:
        return self.index.node_layer[node_id]

    def stats(self) -> dict[str, int]:
        """Size measures: L, M, |V_x|, |V_y|, |E|, d (max out-degree of an input), max inputs per node."""
        idx = self.index
        return {
            "L": self.num_layers,
            "M": max(len(layer) for layer in self.layers),
            "V_x": idx.num_inputs,
            "V_y": idx.num_outputs,
            "E": len(self.edges),
            "d": max((len(a) for a in idx.out_adj), default=0),
            "max_node_inputs": max((n.inputs for n in self.nodes), default=0),
        }


def validate(net: LayeredNetwork) -> list[str]:
    """Every violated structural invariant, located by node/edge.  Empty means ok."""
    errs: list[str] = []
    if len(net.layers) < 2:
        return ["network needs at least 2 layers"]
    layer_of: dict[str, int] = {}
    ports: dict[str, Node] = {}
    for li, layer in enumerate(net.layers):
        if not layer:
            errs.append(f"layer {li} is empty")
        for n in layer:
            if n.id in layer_of:
                errs.append(f"duplicate node id {n.id!r}")
                continue
            if n.inputs < 0 or n.outputs < 0:
                errs.append(f"node {n.id!r}: negative port count")
            layer_of[n.id] = li
            ports[n.id] = n
    first, last = net.layers[0], net.layers[-1]
    if len(first) != 1:
        errs.append(f"first layer must hold exactly one source node, has {len(first)}")
    elif first[0].outputs != 0:
        errs.append(f"source {first[0].id!r} must have no outputs")
    if len(last) != 1:
        errs.append(f"last layer must hold exactly one destination node, has {len(last)}")
    elif last[0].inputs != 0:
        errs.append(f"destination {last[0].id!r} must have no inputs")

    seen: set[tuple[str, int, str, int]] = set()
    p = net.field.p
    for i, e in enumerate(net.edges):
        where = f"edge {i} ({e.from_node}:{e.input_index} -> {e.to_node}:{e.output_index})"
        if e.from_node not in ports or e.to_node not in ports:
            missing = e.from_node if e.from_node not in ports else e.to_node
            errs.append(f"{where}: unknown node {missing!r}")
            continue
        if layer_of[e.to_node] != layer_of[e.from_node] + 1:
            errs.append(f"{where}: non-adjacent layers {layer_of[e.from_node]} -> {layer_of[e.to_node]}")
        if not 0 <= e.input_index < ports[e.from_node].inputs:
            errs.append(f"{where}: input index out of range")
        if not 0 <= e.output_index < ports[e.to_node].outputs:
            errs.append(f"{where}: output index out of range")
        if not isinstance(e.coeff, int) or not 0 < e.coeff < p:
            errs.append(f"{where}: coefficient {e.coeff!r} is not a nonzero element of F_{p}")
        if e.key in seen:
            errs.append(f"{where}: duplicate edge")
        seen.add(e.key)
    return errs


class PortIndex:
    """Dense integer ids for every input and output, plus adjacency lookups.

    Inputs and outputs are numbered in (layer, node order, port index) order, so
    ascending id is the deterministic scan order used by the solver.
    """

    def __init__(self, net: LayeredNetwork):
        self.node_ids: list[str] = [n.id for n in net.nodes]
        self.node_pos = {nid: i for i, nid in enumerate(self.node_ids)}
        self.node_layer: dict[str, int] = {}
        self.node_inputs: list[list[int]] = []
        self.node_outputs: list[list[int]] = []
        self.input_port: list[tuple[str, int]] = []
        self.output_port: list[tuple[str, int]] = []
        self.input_node: list[int] = []
        self.output_node: list[int] = []
        self.input_layer: list[int] = []
        for li, layer in enumerate(net.layers):
            for n in layer:
                pos = self.node_pos[n.id]
                self.node_layer[n.id] = li
                ins = []
                for q in range(n.inputs):
                    ins.append(len(self.input_port))
                    self.input_port.append((n.id, q))
                    self.input_node.append(pos)
                    self.input_layer.append(li)
                outs = []
                for q in range(n.outputs):
                    outs.append(len(self.output_port))
                    self.output_port.append((n.id, q))
                    self.output_node.append(pos)
                self.node_inputs.append(ins)
                self.node_outputs.append(outs)
        self.input_id = {port: i for i, port in enumerate(self.input_port)}
        self.output_id = {port: i for i, port in enumerate(self.output_port)}
        self.num_inputs = len(self.input_port)
        self.num_outputs = len(self.output_port)
        self.layer_of_node = [self.node_layer[nid] for nid in self.node_ids]
        # out_adj[x] = {y: coeff}; keys inserted in ascending y
        adj: list[dict[int, int]] = [dict() for _ in range(self.num_inputs)]
        pairs = sorted(
            (self.input_id[(e.from_node, e.input_index)], self.output_id[(e.to_node, e.output_index)], e.coeff)
            for e in net.edges
        )
        for x, y, c in pairs:
            adj[x][y] = c
        self.out_adj = adj
        self.source = self.node_pos[net.source]
        self.sink = self.node_pos[net.sink]

    def coeff(self, x: int, y: int) -> int:
        return self.out_adj[x].get(y, 0)

    def edge(self, x: int, y: int) -> Edge:
        c = self.out_adj[x][y]
        (a, i), (b, j) = self.input_port[x], self.output_port[y]
        return Edge(a, i, b, j, c)

    def layer_inputs(self, layer: int) -> list[int]:
        return [x for x in range(self.num_inputs) if self.input_layer[x] == layer]

    def layer_outputs(self, layer: int) -> list[int]:
        """Outputs that receive from layer cut ``layer`` (they sit in node layer ``layer + 1``)."""
        return [y for y in range(self.num_outputs) if self.layer_of_node[self.output_node[y]] == layer + 1]


def _input_gid(idx: PortIndex, port) -> int:
    try:
        return idx.input_id[tuple(port)]
    except KeyError:
        raise ContractError(f"unknown input port {port!r}") from None


def _output_gid(idx: PortIndex, port) -> int:
    try:
        return idx.output_id[tuple(port)]
    except KeyError:
        raise ContractError(f"unknown output port {port!r}") from None


def adjacency_ids(idx: PortIndex, xs: Sequence[int], ys: Sequence[int]) -> list[list[int]]:
    return [[idx.out_adj[x].get(y, 0) for y in ys] for x in xs]


def adjacency(net: LayeredNetwork, xs: Sequence[tuple[str, int]], ys: Sequence[tuple[str, int]]) -> FMatrix:
    """Transfer matrix T(xs, ys): entry (i, j) is the coefficient of edge xs[i] -> ys[j], else 0."""
    idx = net.index
    xg = [_input_gid(idx, x) for x in xs]
    yg = [_output_gid(idx, y) for y in ys]
    return FMatrix(tuple(tuple(r) for r in adjacency_ids(idx, xg, yg)), len(yg), net.field)


def cut_edges(net: LayeredNetwork, cut: Cut) -> list[Edge]:
    _check_cut(net, cut)
    om = cut.omega
    return [e for e in net.edges if e.from_node in om and e.to_node not in om]


def cut_value(net: LayeredNetwork, cut: Cut) -> int:
    """Rank over F_p of the transfer matrix between the crossing edges' inputs and outputs."""
    crossing = cut_edges(net, cut)
    return _rank_of_edges(net.index, crossing, net.p)


def _rank_of_edges(idx: PortIndex, edges: Iterable[Edge], p: int) -> int:
    xs, ys = set(), set()
    for e in edges:
        xs.add(idx.input_id[(e.from_node, e.input_index)])
        ys.add(idx.output_id[(e.to_node, e.output_index)])
    return rank_rows(adjacency_ids(idx, sorted(xs), sorted(ys)), p)


def layer_cut(net: LayeredNetwork, layer: int) -> Cut:
    return Cut.of(n.id for layer_nodes in net.layers[: layer + 1] for n in layer_nodes)


def layer_rank(net: LayeredNetwork, layer: int) -> int:
    """Rank of the full transfer matrix of layer cut ``layer``."""
    idx = net.index
    return rank_rows(adjacency_ids(idx, idx.layer_inputs(layer), idx.layer_outputs(layer)), net.p)


def layer_cut_bound(net: LayeredNetwork) -> int:
    """min over layer cuts of the full-layer rank; an upper bound on capacity."""
    return min(layer_rank(net, l) for l in range(net.num_layers - 1))


def _check_cut(net: LayeredNetwork, cut: Cut) -> None:
    if net.source not in cut.omega or net.sink in cut.omega:
        raise ContractError("cut must contain the source and exclude the destination")
    unknown = cut.omega - {n.id for n in net.nodes}
    if unknown:
        raise ContractError(f"cut names unknown nodes {sorted(unknown)}")
