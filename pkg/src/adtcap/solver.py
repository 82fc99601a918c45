"""Unicast capacity by path augmentation with forward moves and rewirings.

State model
-----------
The only persistent state is, for every layer cut ``l``, the set ``U^l`` of
used edges, kept as a matching (``mate_x``: input -> output, ``mate_y``: the
inverse).  While path ``k+1`` is being grown its head sits at a *frontier*
node: cuts before the frontier's layer carry ``k+1`` used edges, the rest carry
``k``.  Which old path an edge "belongs to" never matters for linear
independence, so paths are only pulled apart (by flow decomposition) once the
solver is done.

Exploration is the recursive node/input search with three branches per node:
forward moves from unused inputs, same-layer rewirings from type-1 inputs
along alternating paths, and backward rewirings from outputs that were used
when the iteration began.  Recursion is driven by a generator trampoline so
depth is limited by memory, not by the interpreter stack.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .gfp import dependency_rows, rank_rows, removable_rows
from .network import Edge, LayeredNetwork, adjacency_ids

COUNTER_KEYS = (
    "type1_visits",
    "type2_visits",
    "backward_rewirings",
    "same_layer_rewirings",
    "forward_moves",
    "eliminations",
    "stale_recomputes",
    "legacy_phi_calls",
)


class InvariantError(AssertionError):
    pass


class InternalError(RuntimeError):
    pass


@dataclass
class SolverConfig:
    legacy_backward: bool = False
    legacy_same_layer: bool = False
    # re-check matching/rank/conservation after every commit and every rollback
    debug: bool = False


@dataclass
class PathSet:
    paths: list[list[Edge]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.paths)

    def layer_edges(self, layer: int) -> list[Edge]:
        return [path[layer] for path in self.paths if layer < len(path)]


@dataclass
class SolveResult:
    capacity: int
    paths: PathSet
    counters: dict[str, int]
    iterations: list[dict[str, int]]


# -- alternating paths -------------------------------------------------------------


def alternating_paths_from_input(
    adj: Mapping[int, Mapping[int, int]] | list,
    mate_x: Mapping[int, int],
    mate_y: Mapping[int, int],
    used_y: Iterable[int] | set,
    source: int,
    targets: Iterable[int],
) -> dict[int, list[tuple[int, int]]]:
    """BFS over the used ports plus ``source`` for paths source -> each target.

    A path is returned as its edge list ``[(source, y1), (x1, y1), (x1, y2),
    ..., (xm, ym)]``: unused and used edges alternate, starting unused and
    ending with the target's used edge.  Targets with no path are absent.
    """
    used_y = used_y if isinstance(used_y, (set, frozenset)) else set(used_y)
    wanted = set(targets)
    parent: dict[int, int] = {}  # used input -> output it was reached through
    via: dict[int, int] = {}  # output -> input it was reached from
    queue = deque([source])
    seen_x = {source}
    found: dict[int, list[tuple[int, int]]] = {}
    while queue and len(found) < len(wanted):
        xq = queue.popleft()
        own = mate_x.get(xq)
        for y in adj[xq]:
            if y == own or y not in used_y or y in via:
                continue
            via[y] = xq
            nxt = mate_y[y]
            if nxt in seen_x:
                continue
            seen_x.add(nxt)
            parent[nxt] = y
            queue.append(nxt)
            if nxt in wanted:
                found[nxt] = _unwind_input_path(nxt, parent, via, source)
    return found


def _unwind_input_path(target, parent, via, source):
    edges = []
    x = target
    while x != source:
        y = parent[x]
        edges.append((x, y))  # used edge
        prev = via[y]
        edges.append((prev, y))  # unused edge
        x = prev
    edges.reverse()
    return edges


def alternating_path_from_output(
    adj,
    mate_x: Mapping[int, int],
    mate_y: Mapping[int, int],
    used_y: Iterable[int] | set,
    y: int,
    target: int,
) -> list[tuple[int, int]] | None:
    """Path ``[(x1, y), (x1, y2), (x2, y2), ..., (xm, ym)]`` with xm = target.

    Starts and ends with used edges; ``None`` if the target is unreachable.
    """
    used_y = used_y if isinstance(used_y, (set, frozenset)) else set(used_y)
    start = mate_y[y]
    parent: dict[int, int | None] = {start: None}
    via: dict[int, int] = {y: -1}
    queue = deque([start])
    while queue:
        xq = queue.popleft()
        if xq == target:
            break
        own = mate_x[xq]
        for y2 in adj[xq]:
            if y2 == own or y2 not in used_y or y2 in via:
                continue
            via[y2] = xq
            nxt = mate_y[y2]
            if nxt in parent:
                continue
            parent[nxt] = y2
            queue.append(nxt)
    if target not in parent:
        return None
    edges = []
    x = target
    while True:
        edges.append((x, mate_x[x]))
        y2 = parent[x]
        if y2 is None:
            break
        prev = via[y2]
        edges.append((prev, y2))
        x = prev
    edges.reverse()
    return edges


def rewired_dependency(lam: Mapping[int, int], x: int, xj: int, p: int) -> dict[int, int]:
    """Dependency of ``xj`` once ``x`` has replaced it among the used inputs.

    From row(x) = a' row(xj) + sum a_i row(x_i):
    row(xj) = (1/a') row(x) - sum (a_i/a') row(x_i).  O(|lam|), no elimination.
    """
    inv = pow(lam[xj], -1, p)
    out = {xi: (-a * inv) % p for xi, a in lam.items() if xi != xj}
    out[x] = inv
    return dict(sorted(out.items()))


# -- solver --------------------------------------------------------------------------


class Solver:
    """One capacity computation on one network.  Not thread-safe; make one per run."""

    def __init__(
        self,
        net: LayeredNetwork,
        cfg: SolverConfig | None = None,
        on_commit: Callable[["Solver", str, int, int], None] | None = None,
        on_rollback: Callable[["Solver", str], None] | None = None,
    ):
        self.net = net
        self.idx = net.index
        self.cfg = cfg or SolverConfig()
        self.p = net.p
        self.on_commit = on_commit
        self.on_rollback = on_rollback
        ncuts = net.num_layers - 1
        self.mate_x: dict[int, int] = {}
        self.mate_y: dict[int, int] = {}
        self.used_x: list[set[int]] = [set() for _ in range(ncuts)]
        self.used_y: list[set[int]] = [set() for _ in range(ncuts)]
        self.stamp = [0] * ncuts
        self._clock = itertools.count(1)
        self._log: list[tuple] = []
        self.k = 0
        self.iterations: list[dict[str, int]] = []
        idx = self.idx
        self._out_cut = [idx.layer_of_node[n] - 1 for n in idx.output_node]

    # -- mutation with undo --------------------------------------------------------

    def _link(self, x: int, y: int) -> None:
        l = self.idx.input_layer[x]
        self.mate_x[x] = y
        self.mate_y[y] = x
        self.used_x[l].add(x)
        self.used_y[l].add(y)
        self._log.append(("link", x, y))

    def _unlink(self, x: int, y: int) -> None:
        l = self.idx.input_layer[x]
        del self.mate_x[x]
        del self.mate_y[y]
        self.used_x[l].discard(x)
        self.used_y[l].discard(y)
        self._log.append(("unlink", x, y))

    def _touch(self, l: int) -> None:
        self._log.append(("stamp", l, self.stamp[l]))
        self.stamp[l] = next(self._clock)

    def _undo(self, mark: int) -> None:
        log = self._log
        while len(log) > mark:
            op, a, b = log.pop()
            if op == "link":
                l = self.idx.input_layer[a]
                del self.mate_x[a]
                del self.mate_y[b]
                self.used_x[l].discard(a)
                self.used_y[l].discard(b)
            elif op == "unlink":
                l = self.idx.input_layer[a]
                self.mate_x[a] = b
                self.mate_y[b] = a
                self.used_x[l].add(a)
                self.used_y[l].add(b)
            else:
                self.stamp[a] = b

    def snapshot(self) -> tuple:
        return tuple(sorted(self.mate_x.items())), tuple(self.stamp)

    def _begin(self) -> tuple[int, tuple | None]:
        snap = self.snapshot() if (self.cfg.debug or self.on_rollback) else None
        return len(self._log), snap

    def _rollback(self, token, kind: str) -> None:
        mark, snap = token
        self._undo(mark)
        if snap is not None and self.snapshot() != snap:
            raise InvariantError(f"rollback after failed {kind} did not restore the used-edge state")
        if self.on_rollback:
            self.on_rollback(self, kind)

    def _commit(self, kind: str, frontier: int, port: int) -> None:
        if self.cfg.debug:
            self.check_state(frontier)
        if self.on_commit:
            self.on_commit(self, kind, frontier, port)

    # -- invariants ------------------------------------------------------------------

    def check_state(self, frontier: int) -> None:
        """Raise InvariantError unless every cut is a full-rank perfect matching of the right size
        and used ports are conserved at every node (with one surplus at ``frontier``)."""
        idx = self.idx
        flayer = idx.layer_of_node[frontier]
        for l in range(len(self.used_x)):
            ux, uy = sorted(self.used_x[l]), sorted(self.used_y[l])
            want = self.k + 1 if l < flayer else self.k
            if len(ux) != want or len(uy) != want:
                raise InvariantError(f"cut {l}: {len(ux)} used inputs / {len(uy)} used outputs, expected {want}")
            if sorted(self.mate_x[x] for x in ux) != uy:
                raise InvariantError(f"cut {l}: used edges are not a perfect matching")
            for x in ux:
                if self.mate_x[x] not in idx.out_adj[x] or self.mate_y[self.mate_x[x]] != x:
                    raise InvariantError(f"cut {l}: matched pair ({x}, {self.mate_x[x]}) is not a consistent edge")
            if rank_rows(adjacency_ids(idx, ux, uy), self.p) != want:
                raise InvariantError(f"cut {l}: used edges are linearly dependent")
        for n in range(len(idx.node_ids)):
            if n in (idx.source, idx.sink):
                continue
            inflow = sum(1 for y in idx.node_outputs[n] if y in self.mate_y)
            outflow = sum(1 for x in idx.node_inputs[n] if x in self.mate_x)
            if inflow - outflow != int(n == frontier):
                raise InvariantError(f"node {idx.node_ids[n]}: {inflow} used outputs vs {outflow} used inputs")

    # -- driver ------------------------------------------------------------------------

    def solve(self) -> SolveResult:
        while self._iteration():
            self.k += 1
        totals = {key: sum(it[key] for it in self.iterations) for key in COUNTER_KEYS}
        totals["iterations"] = len(self.iterations)
        return SolveResult(self.k, self.paths(), totals, self.iterations)

    def begin_iteration(self) -> None:
        """Reset marks, types and the dependency cache; snapshot the used outputs."""
        idx = self.idx
        self.node_mark = [False] * len(idx.node_ids)
        self.in_mark = [False] * idx.num_inputs
        self.out_mark = [False] * idx.num_outputs
        self.in_type = [1] * idx.num_inputs
        self.cache: dict[int, tuple[int, dict[int, int]]] = {}
        self.rewired_once: set[int] = set()
        self.start_used = frozenset(self.mate_y)
        self.ctr = dict.fromkeys(COUNTER_KEYS, 0)
        self.ctr["k"] = self.k

    def explore_node(self, node: int) -> bool:
        """Try to complete the partial path from ``node``; all edits are undone on failure."""
        return _trampoline(self._explore(node))

    def _iteration(self) -> bool:
        idx = self.idx
        self.begin_iteration()
        mark = len(self._log)
        ok = self.explore_node(idx.source)
        self.ctr["success"] = int(ok)
        self.iterations.append(self.ctr)
        if ok:
            self._log.clear()
            if self.cfg.debug:
                self.check_state(idx.sink)
        elif len(self._log) != mark:
            raise InvariantError("failed iteration left uncommitted edits")
        return ok

    def paths(self) -> PathSet:
        """Decompose the used edges into ``k`` S-D paths (ascending port order)."""
        idx = self.idx
        pending = {n: sorted(x for x in idx.node_inputs[n] if x in self.mate_x) for n in range(len(idx.node_ids))}
        out = []
        for _ in range(self.k):
            node, path = idx.source, []
            while node != idx.sink:
                x = pending[node].pop(0)
                y = self.mate_x[x]
                path.append(idx.edge(x, y))
                node = idx.output_node[y]
            out.append(path)
        return PathSet(out)

    # -- dependency bookkeeping ------------------------------------------------------

    def _lambda(self, x: int) -> dict[int, int]:
        """Unique {used input: coeff} expressing row x over the used outputs of its cut."""
        l = self.idx.input_layer[x]
        ux, uy = sorted(self.used_x[l]), sorted(self.used_y[l])
        basis = adjacency_ids(self.idx, ux, uy)
        target = [self.idx.out_adj[x].get(y, 0) for y in uy]
        self.ctr["eliminations"] += 1
        sol = dependency_rows(basis, target, self.p) if ux else {}
        if sol is None:
            raise InternalError(f"cut {l} is not full rank; row {x} is not in its span")
        return {ux[j]: a for j, a in sorted(sol.items())}

    def _cached_lambda(self, x: int) -> dict[int, int]:
        l = self.idx.input_layer[x]
        entry = self.cache.get(x)
        if entry is not None and entry[0] == self.stamp[l]:
            return entry[1]
        self.ctr["stale_recomputes"] += 1
        lam = self._lambda(x)
        self.cache[x] = (self.stamp[l], lam)
        return lam

    # -- exploration -----------------------------------------------------------------------

    def _explore(self, node: int):
        idx = self.idx
        self.node_mark[node] = True
        if node == idx.sink:
            return True
        ins = idx.node_inputs[node]
        for x in ins:
            if x in self.mate_x or self.in_mark[x] or self.in_type[x] != 2:
                continue
            self.in_mark[x] = True
            self.ctr["type2_visits"] += 1
            lam = self._cached_lambda(x)
            if (yield self._forward_moves(x, lam)):
                return True
        for x in ins:
            if x in self.mate_x or self.in_mark[x] or self.in_type[x] != 1:
                continue
            self.in_mark[x] = True
            self.ctr["type1_visits"] += 1
            lam = self._lambda(x)
            self.cache[x] = (self.stamp[idx.input_layer[x]], lam)
            if (yield self._forward_moves(x, lam)):
                return True
            if (yield self._same_layer(x, lam)):
                return True
        if not self.cfg.legacy_backward:
            for y in idx.node_outputs[node]:
                if self.out_mark[y] or y not in self.mate_y or y not in self.start_used:
                    continue
                self.out_mark[y] = True
                if (yield self._backward(y)):
                    return True
        return False

    def _forward_moves(self, x: int, lam: dict[int, int]):
        idx, p = self.idx, self.p
        l = idx.input_layer[x]
        used_y = self.used_y[l]
        out_adj = idx.out_adj
        for y, c in list(out_adj[x].items()):
            if y in used_y:
                continue
            target = idx.output_node[y]
            if self.node_mark[target]:
                continue
            acc = 0
            for xj, a in lam.items():
                acc += a * out_adj[xj].get(y, 0)
            if (c - acc) % p == 0:
                continue
            self.ctr["forward_moves"] += 1
            token = self._begin()
            self._link(x, y)
            self._touch(l)
            self._commit("forward", target, x)
            if target == idx.sink:
                return True
            if (yield self._explore(target)):
                return True
            self._rollback(token, "forward")
            if self.cfg.legacy_backward and (yield self._legacy_phi(x, y, target)):
                return True
        return False

    def _same_layer(self, x: int, lam: dict[int, int]):
        if not lam:
            return False
        idx, p = self.idx, self.p
        l = idx.input_layer[x]
        routes = alternating_paths_from_input(idx.out_adj, self.mate_x, self.mate_y, self.used_y[l], x, lam)
        for xj in sorted(lam):
            if self.cfg.legacy_same_layer:
                if xj in self.rewired_once:
                    continue
                self.rewired_once.add(xj)
            route = routes.get(xj)
            if route is None:
                raise InternalError(f"no alternating path from input {x} to {xj} although it is in Lambda")
            self.ctr["same_layer_rewirings"] += 1
            mate_lam = rewired_dependency(lam, x, xj, p)
            token = self._begin()
            for xu, yu in route[1::2]:
                self._unlink(xu, yu)
            for xn, yn in route[0::2]:
                self._link(xn, yn)
            self._touch(l)
            self.in_mark[xj] = False
            self.in_type[xj] = 2
            self.cache[xj] = (self.stamp[l], mate_lam)
            target = idx.input_node[xj]
            self._commit("same_layer", target, xj)
            if (yield self._explore(target)):
                return True
            self._rollback(token, "same_layer")
        return False

    def _backward(self, y: int):
        idx = self.idx
        l = self._out_cut[y]
        ux, uy = sorted(self.used_x[l]), sorted(self.used_y[l])
        self.ctr["backward_rewirings"] += 1
        self.ctr["eliminations"] += 1
        rows = removable_rows(adjacency_ids(idx, ux, uy), uy.index(y), self.p)
        xr = ux[rows[0]]
        route = alternating_path_from_output(idx.out_adj, self.mate_x, self.mate_y, self.used_y[l], y, xr)
        if route is None:
            raise InternalError(f"no alternating path from output {y} to removable input {xr}")
        token = self._begin()
        for xu, yu in route[0::2]:
            self._unlink(xu, yu)
        for xn, yn in route[1::2]:
            self._link(xn, yn)
        self._touch(l)
        self.in_mark[xr] = False
        self.in_type[xr] = 1
        self.cache.pop(xr, None)
        target = idx.input_node[xr]
        self._commit("backward", target, xr)
        if (yield self._explore(target)):
            return True
        self._rollback(token, "backward")
        return False

    def _legacy_phi(self, x: int, y: int, node: int):
        """Original rule: hand the new edge to a path entering ``node`` and re-route that path's tail."""
        idx = self.idx
        l = idx.input_layer[x]
        for yk in idx.node_outputs[node]:
            xk = self.mate_y.get(yk)
            if xk is None:
                continue
            token = self._begin()
            self._link(x, y)
            self._unlink(xk, yk)
            ux, uy = sorted(self.used_x[l]), sorted(self.used_y[l])
            self.ctr["eliminations"] += 1
            if rank_rows(adjacency_ids(idx, ux, uy), self.p) != len(ux):
                self._undo(token[0])
                continue
            self._touch(l)
            self.ctr["legacy_phi_calls"] += 1
            target = idx.input_node[xk]
            self._commit("legacy_phi", target, xk)
            if (yield self._explore(target)):
                return True
            self._rollback(token, "legacy_phi")
        return False


def _trampoline(gen) -> bool:
    """Run nested generators without Python recursion: a yielded generator is a call."""
    stack = [gen]
    value = None
    while stack:
        try:
            call = stack[-1].send(value)
        except StopIteration as stop:
            stack.pop()
            value = stop.value
            continue
        stack.append(call)
        value = None
    return bool(value)


def capacity(net: LayeredNetwork, cfg: SolverConfig | None = None, **hooks) -> SolveResult:
    """Maximum number of linearly independent S-D paths, with the paths and per-run counters."""
    return Solver(net, cfg, **hooks).solve()
