"""Search seeded random networks for the two legacy-failure regression fixtures.

Fixture A: true capacity 4, but the original backward rule (phi) stops at 3.
Fixture B: true capacity 2, but once-only same-layer marking stops at 1.
Candidates must agree with the cut oracle; the smallest network found wins.
A must actually invoke phi (and still fail); B must succeed without any
backward rewiring so only the type-2 revisit separates the two modes.
"""

import argparse
import random
from pathlib import Path

from adtcap.builder import GenParams, random_network
from adtcap.io import dumps_network
from adtcap.oracle import brute_force_capacity
from adtcap.solver import SolverConfig, capacity

TARGETS = {
    "a": (4, 3, SolverConfig(legacy_backward=True)),
    "b": (2, 1, SolverConfig(legacy_same_layer=True)),
}


def size(net):
    return (len(net.nodes), net.index.num_inputs + net.index.num_outputs, len(net.edges))


def search(which, tries, seed):
    true_c, legacy_c, legacy_cfg = TARGETS[which]
    rng = random.Random(seed)
    best = None
    for _ in range(tries):
        lo = 1 if which == "b" else 2
        gp = GenParams(
            layers=rng.randint(3, 5),
            max_nodes_per_layer=rng.randint(2, 3),
            min_levels_per_node=lo,
            max_levels_per_node=rng.randint(lo, 4 if which == "b" else 5),
            edge_density=rng.choice([0.3, 0.4, 0.5, 0.6]),
            p=2,
            seed=rng.getrandbits(32),
        )
        net = random_network(gp)
        if best is not None and size(net) >= size(best):
            continue
        if capacity(net).capacity != true_c:
            continue
        legacy = capacity(net, legacy_cfg)
        if legacy.capacity != legacy_c:
            continue
        if which == "a" and legacy.counters["legacy_phi_calls"] == 0:
            continue
        if which == "b" and capacity(net).counters["backward_rewirings"] != 0:
            continue
        if brute_force_capacity(net).capacity != true_c:
            continue
        best = net
        print(which, size(net), gp)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tries", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("tests/fixtures"))
    args = ap.parse_args()
    for which in TARGETS:
        net = search(which, args.tries, args.seed)
        if net is None:
            print(f"fixture {which}: nothing found")
            continue
        (args.out / f"fixture_{which}.json").write_text(dumps_network(net))


if __name__ == "__main__":
    main()
