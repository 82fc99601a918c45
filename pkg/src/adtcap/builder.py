"""Network construction: the Gaussian-to-deterministic level reduction and a seeded fuzzer."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .network import Edge, LayeredNetwork, Node


class BuildError(ValueError):
    pass


def levels_from_snr(snr: float) -> int:
    """Number of signal levels above the noise floor, ceil(log2(snr) / 2), floored at 0."""
    if not snr > 0:
        raise ValueError(f"SNR must be positive, got {snr!r}")
    return max(0, math.ceil(0.5 * math.log2(snr)))


@dataclass
class GainSpec:
    layers: list[list[str]]
    links: list[tuple[str, str, int]] = field(default_factory=list)


def build_from_gains(spec: GainSpec, levels: Mapping[str, int], p: int = 2) -> LayeredNetwork:
    """Wire each link of ``n`` levels top-aligned: input level q -> output level q, q < n.

    Port 0 is the most significant level.  The source gets no outputs and the
    destination no inputs; every other node has ``levels[node]`` of each.
    """
    if len(spec.layers) < 2:
        raise BuildError("need at least two layers")
    layer_of = {nid: li for li, layer in enumerate(spec.layers) for nid in layer}
    last = len(spec.layers) - 1
    nodes = []
    for li, layer in enumerate(spec.layers):
        row = []
        for nid in layer:
            q = levels.get(nid)
            if q is None or q < 0:
                raise BuildError(f"missing or negative level count for {nid!r}")
            row.append(Node(nid, 0 if li == last else q, 0 if li == 0 else q))
        nodes.append(row)
    ports = {n.id: n for layer in nodes for n in layer}

    edges = []
    seen = set()
    for a, b, n in spec.links:
        if a not in layer_of or b not in layer_of:
            raise BuildError(f"link {a}->{b} names an unknown node")
        if layer_of[b] != layer_of[a] + 1:
            raise BuildError(f"link {a}->{b} does not join consecutive layers")
        if n < 0:
            raise BuildError(f"link {a}->{b} has negative level count")
        if (a, b) in seen:
            raise BuildError(f"link {a}->{b} given twice")
        seen.add((a, b))
        if n > ports[a].inputs or n > ports[b].outputs:
            raise BuildError(f"link {a}->{b} needs {n} levels, endpoints have {ports[a].inputs}/{ports[b].outputs}")
        edges.extend(Edge(a, q, b, q, 1) for q in range(n))
    return LayeredNetwork.build(p, nodes, edges)


@dataclass
class GenParams:
    layers: int = 4
    max_nodes_per_layer: int = 3
    max_levels_per_node: int = 3
    edge_density: float = 0.5
    p: int = 2
    seed: int = 0
    min_nodes_per_layer: int = 1
    min_levels_per_node: int = 1

    def check(self) -> None:
        if self.layers < 2:
            raise ValueError("need at least 2 layers")
        if not 0.0 <= self.edge_density <= 1.0:
            raise ValueError("edge density must lie in [0, 1]")
        if not 1 <= self.min_nodes_per_layer <= self.max_nodes_per_layer:
            raise ValueError("node-count bounds are inconsistent")
        if not 0 <= self.min_levels_per_node <= self.max_levels_per_node:
            raise ValueError("level-count bounds are inconsistent")


def random_network(params: GenParams) -> LayeredNetwork:
    """Seeded random layered network.

    Uses ``random.Random(seed)`` (Mersenne Twister); the draw order is layer
    sizes, then per-node level counts, then one Bernoulli + coefficient draw
    per candidate (input, output) pair in port order.
    """
    params.check()
    rng = random.Random(params.seed)
    L = params.layers
    lo, hi = params.min_levels_per_node, params.max_levels_per_node
    layers: list[list[Node]] = []
    for li in range(L):
        if li in (0, L - 1):
            count = 1
        else:
            count = rng.randint(params.min_nodes_per_layer, params.max_nodes_per_layer)
        row = []
        for j in range(count):
            q = rng.randint(lo, hi)
            nid = "S" if li == 0 else "D" if li == L - 1 else f"n{li}_{j}"
            row.append(Node(nid, 0 if li == L - 1 else q, 0 if li == 0 else q))
        layers.append(row)

    edges = []
    p = params.p
    for li in range(L - 1):
        for a in layers[li]:
            for i in range(a.inputs):
                for b in layers[li + 1]:
                    for j in range(b.outputs):
                        if rng.random() < params.edge_density:
                            edges.append(Edge(a.id, i, b.id, j, rng.randint(1, p - 1)))
    return LayeredNetwork.build(p, layers, edges)
