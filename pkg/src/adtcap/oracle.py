"""Exponential-time ground truth for small networks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .gfp import rank_rows
from .network import Cut, Edge, LayeredNetwork, adjacency_ids, layer_rank

DEFAULT_LIMIT = 22


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    capacity: int
    argmin_cut: Cut
    cuts_examined: int


def brute_force_capacity(net: LayeredNetwork, limit: int = DEFAULT_LIMIT) -> OracleResult:
    """Minimum cut value over all 2^(|V|-2) S-D cuts, cross-layer cuts included.

    Cut ``b`` puts intermediate node ``i`` (network order) on the source side
    iff bit ``i`` of ``b`` is set; the first minimiser in that order is returned.
    """
    idx = net.index
    inner = [n for n in range(len(idx.node_ids)) if n not in (idx.source, idx.sink)]
    if len(inner) > limit:
        raise OracleSizeError(f"{len(inner)} intermediate nodes exceed the enumeration limit {limit}")
    leaving: list[list[tuple[int, int]]] = [[] for _ in idx.node_ids]
    for x in range(idx.num_inputs):
        n = idx.input_node[x]
        leaving[n].extend((x, y) for y in idx.out_adj[x])
    p = net.p
    best, best_mask = None, 0
    total = 1 << len(inner)
    for mask in range(total):
        side = [False] * len(idx.node_ids)
        side[idx.source] = True
        for bit, n in enumerate(inner):
            if mask >> bit & 1:
                side[n] = True
        xs, ys = set(), set()
        for n, on in enumerate(side):
            if not on:
                continue
            for x, y in leaving[n]:
                if not side[idx.output_node[y]]:
                    xs.add(x)
                    ys.add(y)
        value = rank_rows(adjacency_ids(idx, sorted(xs), sorted(ys)), p)
        if best is None or value < best:
            best, best_mask = value, mask
            if best == 0:
                total = mask + 1
                break
    omega = {idx.node_ids[idx.source]} | {idx.node_ids[n] for bit, n in enumerate(inner) if best_mask >> bit & 1}
    return OracleResult(best, Cut.of(omega), total)


def li_path_capacity(net: LayeredNetwork, node_limit: int = 8) -> int:
    """Largest linearly independent set of S-D paths, by exhaustive search.

    Independent of the cut enumeration; meant for networks of at most
    ``node_limit`` nodes.
    """
    idx = net.index
    if len(idx.node_ids) > node_limit:
        raise OracleSizeError(f"{len(idx.node_ids)} nodes exceed the path-search limit {node_limit}")
    ncuts = net.num_layers - 1
    all_paths: list[tuple[tuple[int, int], ...]] = []

    def walk(node, acc):
        if node == idx.sink:
            all_paths.append(tuple(acc))
            return
        for x in idx.node_inputs[node]:
            for y in idx.out_adj[x]:
                acc.append((x, y))
                walk(idx.output_node[y], acc)
                acc.pop()

    walk(idx.source, [])
    p = net.p
    bound = min([len(all_paths)] + [layer_rank(net, l) for l in range(ncuts)])
    best = 0

    def independent(chosen):
        for l in range(ncuts):
            xs = [all_paths[i][l][0] for i in chosen]
            ys = [all_paths[i][l][1] for i in chosen]
            if len(set(xs)) < len(xs) or len(set(ys)) < len(ys):
                return False
            if rank_rows(adjacency_ids(idx, xs, ys), p) < len(xs):
                return False
        return True

    def grow(start, chosen):
        nonlocal best
        best = max(best, len(chosen))
        if best >= bound:
            return
        for i in range(start, len(all_paths)):
            if len(chosen) + len(all_paths) - i <= best:
                return
            chosen.append(i)
            if independent(chosen):
                grow(i + 1, chosen)
            chosen.pop()
            if best >= bound:
                return

    grow(0, [])
    return best


def verify_paths(net: LayeredNetwork, paths: Sequence[Sequence[Edge]]) -> list[str]:
    """Violations of the LI-path conditions, first one per failing check; empty means ok.

    Checks that every path is a connected S-D walk over existing edges, then per
    layer cut: no repeated edge (rank deficit), distinct ports (not a matching),
    and full rank of the used transfer matrix (rank deficit).
    """
    idx = net.index
    L = net.num_layers
    edge_set = {e.key: e.coeff for e in net.edges}
    for i, path in enumerate(paths):
        if not path:
            return [f"path {i}: disconnected path (empty)"]
        if path[0].from_node != net.source:
            return [f"path {i}: disconnected path (does not start at {net.source})"]
        for j, e in enumerate(path):
            if e.key not in edge_set:
                return [f"path {i} edge {j}: edge {e.key} not in network"]
            if j + 1 < len(path) and path[j + 1].from_node != e.to_node:
                return [f"path {i} edge {j}: disconnected path ({e.to_node} -> {path[j + 1].from_node})"]
        if path[-1].to_node != net.sink:
            return [f"path {i}: disconnected path (does not reach {net.sink})"]
        if len(path) != L - 1:
            return [f"path {i}: length {len(path)}, expected {L - 1}"]
    for l in range(L - 1):
        layer = [path[l] for path in paths]
        keys = [e.key for e in layer]
        if len(set(keys)) < len(keys):
            return [f"cut {l}: rank deficit (repeated edge)"]
        xs = [idx.input_id[(e.from_node, e.input_index)] for e in layer]
        ys = [idx.output_id[(e.to_node, e.output_index)] for e in layer]
        if len(set(xs)) < len(xs) or len(set(ys)) < len(ys):
            return [f"cut {l}: not a matching (shared port)"]
        if rank_rows(adjacency_ids(idx, xs, ys), net.p) < len(xs):
            return [f"cut {l}: rank deficit"]
    return []
